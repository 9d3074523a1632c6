#include "contra/pipeline/quadruple.hpp"

namespace contra::pipeline {

std::pair<std::size_t, std::size_t> pick_variants(std::size_t program_count,
                                                  std::size_t comment_count, Rng& rng) {
  if (program_count == 0 || comment_count == 0) throw EmptySet();
  const std::size_t c = uniform_index(rng, program_count);
  const std::size_t w = uniform_index(rng, comment_count);
  return {c, w};
}

Quadruple assemble_quadruple(const frontend::AstFunction& code, const frontend::Comment& comment,
                             const augment::AugmentationSet& sets, Rng& rng) {
  const auto [c, w] = pick_variants(sets.program_variants.size(), sets.comment_variants.size(), rng);
  Quadruple q;
  q.code = code;
  q.comment = comment;
  q.code_op = sets.program_variants[c].first;
  q.code_variant = sets.program_variants[c].second;
  q.comment_op = sets.comment_variants[w].first;
  q.comment_variant = sets.comment_variants[w].second;
  return q;
}

}  // namespace contra::pipeline

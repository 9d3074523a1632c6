#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>

#include "contra/augment/augmentation_set.hpp"
#include "contra/common/random.hpp"

namespace contra::pipeline {

class EmptySet : public std::runtime_error {
 public:
  EmptySet() : std::runtime_error("augmentation set is empty") {}
};

struct Quadruple {
  frontend::AstFunction code;
  frontend::Comment comment;
  frontend::AstFunction code_variant;
  frontend::Comment comment_variant;
  augment::Op code_op = augment::Op::RFN;
  augment::Op comment_op = augment::Op::Delete;
};

// Independent uniform picks (program variant, comment variant). Both
// assemble_quadruple and the training batch builder draw through here so the
// random stream is the same.
std::pair<std::size_t, std::size_t> pick_variants(std::size_t program_count,
                                                  std::size_t comment_count, Rng& rng);

Quadruple assemble_quadruple(const frontend::AstFunction& code, const frontend::Comment& comment,
                             const augment::AugmentationSet& sets, Rng& rng);

}  // namespace contra::pipeline

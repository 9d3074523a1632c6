#include <utility>

#include "contra/augment/operators.hpp"

namespace contra::augment {

Comment nl_delete(const Comment& w, Rng& rng) {
  if (w.words.empty()) throw TooShort("delete needs at least one word");
  Comment out = w;
  const std::size_t i = uniform_index(rng, out.words.size());
  out.words.erase(out.words.begin() + static_cast<std::ptrdiff_t>(i));
  return out;
}

Comment nl_switch(const Comment& w, Rng& rng) {
  if (w.words.size() < 2) throw TooShort("switch needs at least two words");
  Comment out = w;
  const std::size_t n = out.words.size();
  const std::size_t i = uniform_index(rng, n);
  // j uniform over the other n-1 positions
  std::size_t j = uniform_index(rng, n - 1);
  if (j >= i) ++j;
  std::swap(out.words[i], out.words[j]);
  return out;
}

Comment nl_copy(const Comment& w, Rng& rng) {
  if (w.words.empty()) throw TooShort("copy needs at least one word");
  Comment out = w;
  const std::size_t i = uniform_index(rng, out.words.size());
  out.words.insert(out.words.begin() + static_cast<std::ptrdiff_t>(i + 1), out.words[i]);
  return out;
}

}  // namespace contra::augment

#pragma once

// Test-side oracles written against the public AST and vector types only,
// independent of the operator and metric implementations they check.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "contra/frontend/ast.hpp"
#include "contra/frontend/parser.hpp"

namespace contra::oracle {

using frontend::AstFunction;
using frontend::render;
using frontend::render_tokens;
using frontend::Statement;
using frontend::StmtKind;
using Vectors = std::vector<std::vector<float>>;

// Token streams equal except where `may_change` names were consistently and
// injectively replaced. Returns the replacement map, or nullopt when the
// streams are not isomorphic in that sense.
inline std::optional<std::map<std::string, std::string>> name_isomorphism(const AstFunction& a, const AstFunction& b,
                                                                   const std::set<std::string>& may_change) {
  const auto ta = render_tokens(a), tb = render_tokens(b);
  if (ta.size() != tb.size()) return std::nullopt;
  std::map<std::string, std::string> fwd, back;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (!may_change.count(ta[i])) {
      if (ta[i] != tb[i]) return std::nullopt;
      continue;
    }
    auto [it, fresh] = fwd.emplace(ta[i], tb[i]);
    if (!fresh && it->second != tb[i]) return std::nullopt;
    auto [jt, fresh2] = back.emplace(tb[i], ta[i]);
    if (!fresh2 && jt->second != ta[i]) return std::nullopt;
  }
  const std::set<std::string> original(ta.begin(), ta.end());
  for (auto it = fwd.begin(); it != fwd.end();) {
    if (it->first == it->second) {
      it = fwd.erase(it);
      continue;
    }
    if (original.count(it->second)) return std::nullopt;
    ++it;
  }
  return fwd;
}

inline std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

inline bool is_subsequence(const std::vector<std::string>& small, const std::vector<std::string>& big) {
  std::size_t j = 0;
  for (const auto& x : big) {
    if (j < small.size() && small[j] == x) ++j;
  }
  return j == small.size();
}

inline void block_lists(const std::vector<Statement>& items, std::vector<const std::vector<Statement>*>& out);

inline void descend(const Statement& s, std::vector<const std::vector<Statement>*>& out) {
  if (s.kind == StmtKind::Block) {
    block_lists(s.children, out);
    return;
  }
  for (const auto& c : s.children) descend(c, out);
}

inline void block_lists(const std::vector<Statement>& items, std::vector<const std::vector<Statement>*>& out) {
  out.push_back(&items);
  for (const auto& s : items) descend(s, out);
}

inline std::vector<const std::vector<Statement>*> block_lists(const AstFunction& fn) {
  std::vector<const std::vector<Statement>*> out;
  block_lists(fn.body, out);
  return out;
}

// Exactly one block list changes directly, by one adjacent transposition of
// a swappable pair.
inline bool is_single_swappable_swap(const AstFunction& before, const AstFunction& after) {
  const auto la = block_lists(before), lb = block_lists(after);
  if (la.size() != lb.size()) return false;
  int differing = 0;
  for (std::size_t k = 0; k < la.size(); ++k) {
    const auto& x = *la[k];
    const auto& y = *lb[k];
    if (x == y) continue;
    if (x.size() != y.size()) return false;
    std::vector<std::size_t> diff;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!(x[i] == y[i])) diff.push_back(i);
    }
    // A lone differing compound statement carries a change from a nested list.
    if (diff.size() == 1 && !x[diff[0]].children.empty() && x[diff[0]].kind == y[diff[0]].kind) continue;
    ++differing;
    if (diff.size() != 2 || diff[1] != diff[0] + 1) return false;
    const std::size_t i = diff[0];
    if (!(x[i] == y[i + 1] && x[i + 1] == y[i])) return false;
    if (!frontend::swappable(x[i], x[i + 1])) return false;
  }
  return differing == 1;
}

inline std::multiset<std::string> line_multiset(const AstFunction& fn) {
  const auto l = lines(render(fn));
  return {l.begin(), l.end()};
}

inline Vectors random_pool(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Vectors v(n, std::vector<float>(d));
  for (auto& row : v) {
    for (auto& x : row) x = static_cast<float>(g(rng));
  }
  return v;
}

inline double brute_cos(const std::vector<float>& a, const std::vector<float>& b) {
  long double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += static_cast<long double>(a[i]) * b[i];
    aa += static_cast<long double>(a[i]) * a[i];
    bb += static_cast<long double>(b[i]) * b[i];
  }
  return static_cast<double>(ab / std::sqrt(aa * bb));
}

// Sort every candidate by (similarity desc, index asc) and walk the list.
inline double brute_map(const Vectors& v, const std::vector<int>& labels, std::size_t R) {
  double total = 0.0;
  std::size_t queries = 0;
  for (std::size_t q = 0; q < v.size(); ++q) {
    std::vector<std::pair<double, std::size_t>> c;
    std::size_t relevant = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (j == q) continue;
      c.push_back({-brute_cos(v[q], v[j]), j});
      relevant += labels[j] == labels[q];
    }
    if (relevant == 0) continue;
    std::sort(c.begin(), c.end());
    double ap = 0.0;
    std::size_t hits = 0;
    for (std::size_t r = 0; r < std::min(R, c.size()); ++r) {
      if (labels[c[r].second] != labels[q]) continue;
      ++hits;
      ap += double(hits) / double(r + 1);
    }
    total += ap / double(std::min(R, relevant));
    ++queries;
  }
  return total / double(queries);
}

inline double brute_mrr(const Vectors& v, const std::vector<int>& labels) {
  double total = 0.0;
  std::size_t n = 0;
  for (std::size_t q = 0; q < v.size(); ++q) {
    std::vector<std::pair<double, std::size_t>> c;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (j != q) c.push_back({-brute_cos(v[q], v[j]), j});
    }
    std::sort(c.begin(), c.end());
    for (std::size_t r = 0; r < c.size(); ++r) {
      if (labels[c[r].second] == labels[q]) {
        total += 1.0 / double(r + 1);
        ++n;
        break;
      }
    }
  }
  return total / double(n);
}

inline std::vector<int> labels_for(std::size_t n, int clusters) {
  std::vector<int> l(n);
  for (std::size_t i = 0; i < n; ++i) l[i] = static_cast<int>(i) % clusters;
  return l;
}

}  // namespace contra::oracle

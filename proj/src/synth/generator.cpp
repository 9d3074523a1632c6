#include "contra/synth/generator.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <stdexcept>

#include "contra/common/random.hpp"

namespace contra::synth {

namespace {

enum class Reduction { Sum, Product, Max, Min };
enum class Filter { All, Even, Odd, Positive, Negative };
enum class Transform { Same, Square, Double, PlusOne, MinusOne };

struct Task {
  Reduction reduction;
  Filter filter;
  Transform transform;
};

Task task_of(std::size_t cluster) {
  if (cluster >= kTaskCount) throw std::out_of_range("cluster index");
  return Task{static_cast<Reduction>(cluster / 25), static_cast<Filter>((cluster / 5) % 5),
              static_cast<Transform>(cluster % 5)};
}

using Words = std::vector<std::string>;

const std::string& pick(const Words& w, Rng& rng) { return w[uniform_index(rng, w.size())]; }

bool coin(Rng& rng, double p) { return uniform01(rng) < p; }

const Words& reduction_words(Reduction r) {
  static const std::array<Words, 4> w{Words{"sum", "total", "acc"}, Words{"prod", "product", "mul"},
                                      Words{"max", "best", "largest"}, Words{"min", "least", "smallest"}};
  return w[static_cast<std::size_t>(r)];
}

const Words& filter_words(Filter f) {
  static const std::array<Words, 5> w{Words{"all", "every"}, Words{"even", "evens"}, Words{"odd", "odds"},
                                      Words{"pos", "positive"}, Words{"neg", "negative"}};
  return w[static_cast<std::size_t>(f)];
}

const Words& transform_words(Transform t) {
  static const std::array<Words, 5> w{Words{"val", "elem"}, Words{"sq", "square"}, Words{"dbl", "twice"},
                                      Words{"inc", "next"}, Words{"dec", "prev"}};
  return w[static_cast<std::size_t>(t)];
}

const Words kNeutralAcc{"r", "res", "result", "out", "ret", "y", "z", "w"};
const Words kNeutralElem{"x", "e", "v", "cur", "item", "el", "t"};
const Words kArray{"a", "arr", "data", "values", "nums", "xs", "buf", "in"};
const Words kLength{"n", "len", "size", "count", "m", "num", "cnt"};
const Words kIndex{"i", "j", "k", "idx", "p", "pos"};
const Words kNoise{"steps", "seen", "visited", "iter", "ops", "tick"};
const Words kFunction{"solve", "calc", "compute", "process", "run", "work", "helper", "func", "go",
                      "handle", "eval", "apply", "doit", "task", "main2", "f"};

std::string join_name(const std::string& a, const std::string& b, Rng& rng) {
  if (coin(rng, 0.5)) return a + "_" + b;
  std::string cap = b;
  cap[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(cap[0])));
  return a + cap;
}

struct Names {
  std::string fn, arr, len, acc, idx, elem, noise;
};

Names draw_names(const Task& task, double themed, Rng& rng) {
  for (;;) {
    Names n;
    n.fn = pick(kFunction, rng);
    n.arr = pick(kArray, rng);
    n.len = pick(kLength, rng);
    n.idx = pick(kIndex, rng);
    n.noise = pick(kNoise, rng);
    if (coin(rng, themed)) {
      const std::string& red = pick(reduction_words(task.reduction), rng);
      n.acc = task.filter == Filter::All ? red : join_name(pick(filter_words(task.filter), rng), red, rng);
    } else {
      n.acc = pick(kNeutralAcc, rng);
    }
    if (coin(rng, themed)) {
      n.elem = pick(transform_words(task.transform), rng);
    } else {
      n.elem = pick(kNeutralElem, rng);
    }
    const std::set<std::string> all{n.fn, n.arr, n.len, n.acc, n.idx, n.elem, n.noise};
    if (all.size() == 7) return n;
  }
}

std::string transformed(Transform t, const std::string& x, Rng& rng) {
  switch (t) {
    case Transform::Same:
      return x;
    case Transform::Square:
      return x + " * " + x;
    case Transform::Double: {
      const std::size_t form = uniform_index(rng, 3);
      return form == 0 ? "2 * " + x : form == 1 ? x + " * 2" : x + " + " + x;
    }
    case Transform::PlusOne:
      return coin(rng, 0.5) ? x + " + 1" : "1 + " + x;
    case Transform::MinusOne:
      return x + " - 1";
  }
  return x;
}

std::string predicate(Filter f, const std::string& x, Rng& rng) {
  switch (f) {
    case Filter::All:
      return "";
    case Filter::Even:
      return x + " % 2 == 0";
    case Filter::Odd:
      return coin(rng, 0.5) ? x + " % 2 != 0" : x + " % 2 == 1";
    case Filter::Positive:
      return coin(rng, 0.5) ? x + " > 0" : "0 < " + x;
    case Filter::Negative:
      return coin(rng, 0.5) ? x + " < 0" : "0 > " + x;
  }
  return "";
}

std::string initial_value(Reduction r, Rng& rng) {
  switch (r) {
    case Reduction::Sum:
      return "0";
    case Reduction::Product:
      return "1";
    case Reduction::Max:
      return coin(rng, 0.5) ? "-1000000" : "-999999";
    case Reduction::Min:
      return coin(rng, 0.5) ? "1000000" : "999999";
  }
  return "0";
}

// Statements that fold `value` into the accumulator.
std::vector<std::string> accumulate(const Task& task, const std::string& acc, const std::string& value,
                                    Rng& rng) {
  switch (task.reduction) {
    case Reduction::Sum:
      return {coin(rng, 0.5) ? acc + " += " + value + ";" : acc + " = " + acc + " + " + value + ";"};
    case Reduction::Product:
      return {coin(rng, 0.5) ? acc + " *= " + value + ";" : acc + " = " + acc + " * (" + value + ");"};
    case Reduction::Max:
    case Reduction::Min: {
      const char* op = task.reduction == Reduction::Max ? " > " : " < ";
      const char* flip = task.reduction == Reduction::Max ? " < " : " > ";
      const std::string cond = coin(rng, 0.5) ? "(" + value + ")" + op + acc : acc + flip + "(" + value + ")";
      return {"if (" + cond + ") {", "  " + acc + " = " + value + ";", "}"};
    }
  }
  return {};
}

std::string indent(std::size_t depth) { return std::string(2 * depth, ' '); }

std::string write_function(const Task& task, const Names& n, Rng& rng) {
  const bool use_elem = coin(rng, 0.6);
  const bool noise = coin(rng, 0.3);
  const std::size_t loop = uniform_index(rng, 3);  // for-decl, for, while
  const std::string x = use_elem ? n.elem : n.arr + "[" + n.idx + "]";

  std::vector<std::string> body;
  if (use_elem) body.push_back("int " + n.elem + " = " + n.arr + "[" + n.idx + "];");
  const std::string value = transformed(task.transform, x, rng);
  const auto acc_lines = accumulate(task, n.acc, value, rng);
  const std::string pred = predicate(task.filter, x, rng);
  if (pred.empty()) {
    body.insert(body.end(), acc_lines.begin(), acc_lines.end());
  } else {
    body.push_back("if (" + pred + ") {");
    for (const auto& l : acc_lines) body.push_back("  " + l);
    body.push_back("}");
  }
  if (noise) body.push_back(coin(rng, 0.5) ? n.noise + "++;" : n.noise + " = " + n.noise + " + 1;");

  std::string s = "int " + n.fn + "(int " + n.arr + "[], int " + n.len + ") {\n";
  std::vector<std::string> head;
  head.push_back("int " + n.acc + " = " + initial_value(task.reduction, rng) + ";");
  if (noise) head.push_back("int " + n.noise + " = 0;");
  if (loop != 0) head.push_back("int " + n.idx + ";");
  // Declarations are independent; their order is a free surface choice.
  if (coin(rng, 0.5)) std::reverse(head.begin(), head.end());
  for (const auto& l : head) s += indent(1) + l + "\n";

  if (loop == 0) {
    s += indent(1) + "for (int " + n.idx + " = 0; " + n.idx + " < " + n.len + "; " + n.idx + "++) {\n";
  } else if (loop == 1) {
    s += indent(1) + "for (" + n.idx + " = 0; " + n.idx + " < " + n.len + "; " + n.idx + "++) {\n";
  } else {
    s += indent(1) + n.idx + " = 0;\n";
    s += indent(1) + "while (" + n.idx + " < " + n.len + ") {\n";
  }
  for (const auto& l : body) s += indent(2) + l + "\n";
  if (loop == 2) s += indent(2) + n.idx + " = " + n.idx + " + 1;\n";
  s += indent(1) + "}\n";
  s += indent(1) + "return " + n.acc + ";\n}\n";
  return s;
}

std::string write_comment(const Task& task, Rng& rng) {
  static const std::array<Words, 4> verbs{
      Words{"return the sum of", "compute the total of", "add up", "sum"},
      Words{"return the product of", "multiply together", "compute the product of"},
      Words{"return the largest of", "find the maximum of", "get the biggest of"},
      Words{"return the smallest of", "find the minimum of", "get the lowest of"}};
  static const std::array<Words, 5> transforms{
      Words{""}, Words{"the squares of", "squared"}, Words{"twice", "doubled"},
      Words{"one plus", "incremented"}, Words{"one less than", "decremented"}};
  static const std::array<Words, 5> filters{
      Words{"all elements", "the array values", "every number"},
      Words{"the even elements", "even numbers"}, Words{"the odd elements", "odd numbers"},
      Words{"the positive elements", "values above zero"}, Words{"the negative elements", "values below zero"}};
  std::string c = pick(verbs[static_cast<std::size_t>(task.reduction)], rng);
  const std::string& t = pick(transforms[static_cast<std::size_t>(task.transform)], rng);
  if (!t.empty()) c += " " + t;
  c += " " + pick(filters[static_cast<std::size_t>(task.filter)], rng);
  if (coin(rng, 0.4)) c += coin(rng, 0.5) ? " in the array" : " of the list";
  return c;
}

}  // namespace

std::string task_description(std::size_t cluster) {
  const Task t = task_of(cluster);
  static const char* red[] = {"sum", "product", "maximum", "minimum"};
  static const char* tr[] = {"", "squared ", "doubled ", "incremented ", "decremented "};
  static const char* fl[] = {"all", "even", "odd", "positive", "negative"};
  return std::string(red[static_cast<int>(t.reduction)]) + " of " + tr[static_cast<int>(t.transform)] +
         fl[static_cast<int>(t.filter)] + " elements";
}

std::vector<pipeline::Sample> generate_corpus(const SynthOptions& o) {
  if (o.clusters > kTaskCount) throw std::invalid_argument("at most 100 clusters are available");
  std::vector<pipeline::Sample> out;
  out.reserve(o.clusters * o.per_cluster);
  for (std::size_t c = 0; c < o.clusters; ++c) {
    const Task task = task_of(c);
    for (std::size_t k = 0; k < o.per_cluster; ++k) {
      Rng rng(derive_seed(o.seed, c, k));
      const Names names = draw_names(task, o.themed_names, rng);
      pipeline::Sample s;
      s.id = "c" + std::to_string(c) + "_" + std::to_string(k);
      s.lang = "c";
      s.code = write_function(task, names, rng);
      s.comment = write_comment(task, rng);
      s.cluster = static_cast<int>(c);
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace contra::synth

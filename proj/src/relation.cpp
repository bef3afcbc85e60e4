#include "liftsl/relation.hpp"

#include <algorithm>
#include <atomic>
#include <optional>
#include <stdexcept>

#include "liftsl/error.hpp"

namespace liftsl {

namespace {

std::atomic<bool> g_minimize{true};

void require_arity(const GenRel& r, const GenRel& s, const char* op) {
  if (r.arity() != s.arity()) {
    throw std::invalid_argument(std::string(op) + ": arity mismatch " + std::to_string(r.arity()) +
                                " vs " + std::to_string(s.arity()));
  }
}

std::size_t total_cells(const HeapTuple& t) {
  std::size_t n = 0;
  for (const auto& h : t) n += h.size();
  return n;
}

}  // namespace

bool tuple_extends(const HeapTuple& t, const HeapTuple& u) {
  if (t.size() != u.size()) return false;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!extends(t[k], u[k])) return false;
  }
  return true;
}

GenRel::GenRel(int arity) : arity_(arity) {
  if (arity < 1) throw std::invalid_argument("relation arity must be positive");
}

GenRel::GenRel(int arity, std::vector<HeapTuple> generators) : GenRel(arity) {
  for (const auto& g : generators) {
    if (static_cast<int>(g.size()) != arity) {
      throw std::invalid_argument("generator tuple length " + std::to_string(g.size()) +
                                  " does not match arity " + std::to_string(arity));
    }
  }
  gens_ = std::move(generators);
  canonicalize();
}

GenRel GenRel::top(int arity) {
  return GenRel(arity, {HeapTuple(static_cast<std::size_t>(arity))});
}

GenRel GenRel::empty(int arity) { return GenRel(arity); }

GenRel GenRel::principal(HeapTuple t) {
  const int n = static_cast<int>(t.size());
  return GenRel(n, {std::move(t)});
}

bool GenRel::is_top() const {
  return std::any_of(gens_.begin(), gens_.end(), [](const HeapTuple& g) {
    return std::all_of(g.begin(), g.end(), [](const Heap& h) { return h.empty(); });
  });
}

void GenRel::set_minimize(bool on) { g_minimize = on; }
bool GenRel::minimize_enabled() { return g_minimize; }

void GenRel::canonicalize() {
  // Smaller tuples first, so a kept generator is never extended-by a later one.
  std::sort(gens_.begin(), gens_.end(), [](const HeapTuple& a, const HeapTuple& b) {
    const auto ca = total_cells(a), cb = total_cells(b);
    if (ca != cb) return ca < cb;
    return a < b;
  });
  gens_.erase(std::unique(gens_.begin(), gens_.end()), gens_.end());
  if (!g_minimize) return;
  std::vector<HeapTuple> kept;
  kept.reserve(gens_.size());
  for (auto& g : gens_) {
    const bool covered = std::any_of(kept.begin(), kept.end(),
                                     [&](const HeapTuple& k) { return tuple_extends(k, g); });
    if (!covered) kept.push_back(std::move(g));
  }
  gens_ = std::move(kept);
}

bool member(const GenRel& r, const HeapTuple& t) {
  if (static_cast<int>(t.size()) != r.arity()) {
    throw std::invalid_argument("member: tuple length does not match arity");
  }
  return std::any_of(r.generators().begin(), r.generators().end(),
                     [&](const HeapTuple& g) { return tuple_extends(g, t); });
}

std::optional<HeapTuple> escaping_generator(const GenRel& r, const GenRel& s) {
  require_arity(r, s, "included");
  for (const auto& g : r.generators()) {
    if (!member(s, g)) return g;
  }
  return std::nullopt;
}

bool included(const GenRel& r, const GenRel& s) { return !escaping_generator(r, s).has_value(); }

bool equivalent(const GenRel& r, const GenRel& s) { return included(r, s) && included(s, r); }

GenRel rel_union(const GenRel& r, const GenRel& s) {
  require_arity(r, s, "union");
  std::vector<HeapTuple> gens = r.generators();
  gens.insert(gens.end(), s.generators().begin(), s.generators().end());
  return GenRel(r.arity(), std::move(gens));
}

namespace {

template <typename Combine>
GenRel pairwise(const GenRel& r, const GenRel& s, Combine combine) {
  std::vector<HeapTuple> gens;
  const auto n = static_cast<std::size_t>(r.arity());
  for (const auto& g : r.generators()) {
    for (const auto& f : s.generators()) {
      HeapTuple t;
      t.reserve(n);
      for (std::size_t k = 0; k < n; ++k) {
        auto c = combine(g[k], f[k]);
        if (!c) break;
        t.push_back(std::move(*c));
      }
      if (t.size() == n) gens.push_back(std::move(t));
    }
  }
  return GenRel(r.arity(), std::move(gens));
}

}  // namespace

GenRel meet(const GenRel& r, const GenRel& s) {
  require_arity(r, s, "meet");
  return pairwise(r, s, [](const Heap& a, const Heap& b) { return merge(a, b); });
}

GenRel star(const GenRel& r, const GenRel& s) {
  require_arity(r, s, "star");
  return pairwise(r, s, [](const Heap& a, const Heap& b) { return compose(a, b); });
}

GenRel delta(int n, const GenRel& p) {
  if (p.arity() != 1) throw std::invalid_argument("delta: argument must be unary");
  std::vector<HeapTuple> gens;
  for (const auto& g : p.generators()) gens.emplace_back(static_cast<std::size_t>(n), g[0]);
  return GenRel(n, std::move(gens));
}

std::string to_string(const HeapTuple& t) {
  std::string out = "(";
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k) out += ",";
    out += to_string(t[k]);
  }
  return out + ")";
}

std::string to_string(const GenRel& r) {
  if (r.is_empty()) return "EMPTY(" + std::to_string(r.arity()) + ")";
  if (r.is_top()) return "TOP(" + std::to_string(r.arity()) + ")";
  std::string out = "{ ";
  for (std::size_t i = 0; i < r.generators().size(); ++i) {
    if (i) out += ", ";
    out += to_string(r.generators()[i]);
  }
  return out + " }";
}

namespace {

struct RelParser {
  std::string_view s;
  std::size_t pos = 0;

  void ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\n' || s[pos] == '\r')) ++pos;
  }
  bool eat(std::string_view tok) {
    ws();
    if (s.substr(pos, tok.size()) == tok) {
      pos += tok.size();
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("relation literal: " + msg, 1, static_cast<int>(pos) + 1);
  }
  int number() {
    ws();
    std::size_t start = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (start == pos) fail("expected arity");
    return std::stoi(std::string(s.substr(start, pos - start)));
  }
  Heap heap() {
    ws();
    const std::size_t start = pos;
    const std::size_t close = s.find(']', pos);
    if (pos >= s.size() || s[pos] != '[' || close == std::string_view::npos) fail("expected heap");
    pos = close + 1;
    try {
      return parse_heap(s.substr(start, close + 1 - start));
    } catch (const ParseError& e) {
      fail(e.what());
    }
  }
  HeapTuple tuple() {
    ws();
    if (pos < s.size() && s[pos] == '[') return {heap()};
    if (!eat("(")) fail("expected '(' or '['");
    HeapTuple t;
    do t.push_back(heap());
    while (eat(","));
    if (!eat(")")) fail("expected ')'");
    return t;
  }
};

}  // namespace

GenRel parse_relation(std::string_view text, int expected_arity) {
  RelParser p{text};
  GenRel result;
  const bool top = p.eat("TOP");
  if (top || p.eat("EMPTY")) {
    if (!p.eat("(")) p.fail("expected '('");
    const int n = p.number();
    if (!p.eat(")")) p.fail("expected ')'");
    if (n < 1) p.fail("arity must be positive");
    result = top ? GenRel::top(n) : GenRel::empty(n);
  } else {
    if (!p.eat("{")) p.fail("expected '{', TOP(n) or EMPTY(n)");
    std::vector<HeapTuple> gens;
    if (!p.eat("}")) {
      do gens.push_back(p.tuple());
      while (p.eat(","));
      if (!p.eat("}")) p.fail("expected '}'");
    }
    int n = expected_arity;
    if (!gens.empty()) n = static_cast<int>(gens.front().size());
    if (n < 1) p.fail("cannot infer arity of an empty literal");
    for (const auto& g : gens) {
      if (static_cast<int>(g.size()) != n) p.fail("tuples of different lengths");
    }
    result = GenRel(n, std::move(gens));
  }
  p.ws();
  if (p.pos != text.size()) p.fail("trailing input");
  if (expected_arity > 0 && result.arity() != expected_arity) {
    throw ParseError("relation literal: expected arity " + std::to_string(expected_arity) +
                         ", got " + std::to_string(result.arity()),
                     1, 1);
  }
  return result;
}

}  // namespace liftsl

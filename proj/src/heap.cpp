#include "liftsl/heap.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "liftsl/error.hpp"

namespace liftsl {

Heap Heap::from_cells(std::vector<Cell> cells) {
  std::sort(cells.begin(), cells.end());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].first <= 0) {
      throw std::invalid_argument("heap location must be positive: " +
                                  std::to_string(cells[i].first));
    }
    if (i > 0 && cells[i - 1].first == cells[i].first) {
      throw std::invalid_argument("repeated heap location " + std::to_string(cells[i].first));
    }
  }
  Heap h;
  h.cells_ = std::move(cells);
  return h;
}

Heap Heap::cell(Loc loc, Val value) { return from_cells({{loc, value}}); }

Heap Heap::zeros(std::span<const Loc> locs) {
  std::vector<Cell> cells;
  cells.reserve(locs.size());
  for (Loc l : locs) cells.emplace_back(l, 0);
  return from_cells(std::move(cells));
}

bool Heap::contains(Loc loc) const { return at(loc).has_value(); }

std::optional<Val> Heap::at(Loc loc) const {
  auto it = std::lower_bound(cells_.begin(), cells_.end(), loc,
                             [](const Cell& c, Loc l) { return c.first < l; });
  if (it == cells_.end() || it->first != loc) return std::nullopt;
  return it->second;
}

std::vector<Loc> Heap::domain() const {
  std::vector<Loc> out;
  out.reserve(cells_.size());
  for (const auto& c : cells_) out.push_back(c.first);
  return out;
}

Heap Heap::with(Loc loc, Val value) const {
  if (loc <= 0) throw std::invalid_argument("heap location must be positive");
  Heap h = *this;
  auto it = std::lower_bound(h.cells_.begin(), h.cells_.end(), loc,
                             [](const Cell& c, Loc l) { return c.first < l; });
  if (it != h.cells_.end() && it->first == loc) {
    it->second = value;
  } else {
    h.cells_.insert(it, {loc, value});
  }
  return h;
}

bool disjoint(const Heap& f, const Heap& g) {
  const auto& a = f.cells();
  const auto& b = g.cells();
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first == b[j].first) return false;
    if (a[i].first < b[j].first) ++i; else ++j;
  }
  return true;
}

namespace {

// Sorted union of cells. A shared location is rejected unless overlap is
// allowed and both sides store the same value.
template <bool AllowAgreeingOverlap>
std::optional<Heap> combine(const Heap& f, const Heap& g) {
  const auto& a = f.cells();
  const auto& b = g.cells();
  std::vector<Heap::Cell> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      if (!AllowAgreeingOverlap || a[i].second != b[j].second) return std::nullopt;
      out.push_back(a[i]);
      ++i;
      ++j;
    }
  }
  return Heap::from_cells(std::move(out));
}

}  // namespace

std::optional<Heap> compose(const Heap& f, const Heap& g) {
  if (f.empty()) return g;
  if (g.empty()) return f;
  return combine<false>(f, g);
}

std::optional<Heap> merge(const Heap& f, const Heap& g) {
  if (f.empty()) return g;
  if (g.empty()) return f;
  return combine<true>(f, g);
}

Heap subtract(const Heap& f, const Heap& g) {
  std::vector<Heap::Cell> out;
  for (const auto& c : f.cells()) {
    if (!g.contains(c.first)) out.push_back(c);
  }
  return Heap::from_cells(std::move(out));
}

Heap restrict_to(const Heap& f, const Heap& g) {
  std::vector<Heap::Cell> out;
  for (const auto& c : f.cells()) {
    if (g.contains(c.first)) out.push_back(c);
  }
  return Heap::from_cells(std::move(out));
}

bool extends(const Heap& f, const Heap& g) {
  if (f.size() > g.size()) return false;
  const auto& a = f.cells();
  const auto& b = g.cells();
  std::size_t j = 0;
  for (const auto& c : a) {
    while (j < b.size() && b[j].first < c.first) ++j;
    if (j == b.size() || b[j] != c) return false;
    ++j;
  }
  return true;
}

std::vector<Heap> subheaps(const Heap& h) {
  const auto& cells = h.cells();
  if (cells.size() > 20) throw std::invalid_argument("subheaps: heap too large to enumerate");
  std::vector<Heap> out;
  const std::size_t count = std::size_t{1} << cells.size();
  out.reserve(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    std::vector<Heap::Cell> picked;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (mask & (std::size_t{1} << i)) picked.push_back(cells[i]);
    }
    out.push_back(Heap::from_cells(std::move(picked)));
  }
  std::stable_sort(out.begin(), out.end(), [](const Heap& x, const Heap& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    return x < y;
  });
  return out;
}

std::vector<Heap> enumerate_heaps(Loc max_loc, std::span<const Val> values,
                                  std::size_t max_cells) {
  std::vector<Heap> out{Heap{}};
  // Layered growth: extend each heap by a cell above its largest location.
  std::vector<Heap> frontier{Heap{}};
  for (std::size_t size = 1; size <= max_cells; ++size) {
    std::vector<Heap> next;
    for (const Heap& h : frontier) {
      for (Loc l = h.max_loc() + 1; l <= max_loc; ++l) {
        for (Val v : values) next.push_back(h.with(l, v));
      }
    }
    std::sort(next.begin(), next.end());
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

std::string to_string(const Heap& h) {
  std::string out = "[";
  bool first = true;
  for (const auto& [l, v] : h.cells()) {
    if (!first) out += ", ";
    first = false;
    out += std::to_string(l) + "↦" + std::to_string(v);
  }
  return out + "]";
}

namespace {

struct HeapLexer {
  std::string_view s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(std::string_view tok) {
    skip_ws();
    if (s.substr(pos, tok.size()) == tok) {
      pos += tok.size();
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("heap literal: " + msg, 1, static_cast<int>(pos) + 1);
  }
  std::int64_t integer() {
    skip_ws();
    std::size_t start = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    std::size_t digits = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (digits == pos) fail("expected integer");
    return std::stoll(std::string(s.substr(start, pos - start)));
  }
};

}  // namespace

Heap parse_heap(std::string_view text) {
  HeapLexer lx{text};
  if (!lx.eat("[")) lx.fail("expected '['");
  std::vector<Heap::Cell> cells;
  if (!lx.eat("]")) {
    do {
      Loc l = lx.integer();
      Val v = 0;
      if (lx.eat("↦") || lx.eat("|->") || lx.eat(":")) v = lx.integer();
      cells.emplace_back(l, v);
    } while (lx.eat(","));
    if (!lx.eat("]")) lx.fail("expected ']'");
  }
  lx.skip_ws();
  if (lx.pos != text.size()) lx.fail("trailing input");
  try {
    return Heap::from_cells(std::move(cells));
  } catch (const std::invalid_argument& e) {
    lx.fail(e.what());
  }
}

SegregatingSets segregating_sets(int rows, int cols, Loc offset) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("segregating_sets: rows and cols must be >= 1");
  if (offset < 0) throw std::invalid_argument("segregating_sets: negative offset");
  // Universe: choice tuples t : rows -> cols, encoded in base `cols`.
  // S[i][j] = { encode(t) | t(i) = j }.
  std::size_t universe = 1;
  for (int i = 0; i < rows; ++i) {
    if (universe > (std::size_t{1} << 24) / static_cast<std::size_t>(cols)) {
      throw std::invalid_argument("segregating_sets: universe too large");
    }
    universe *= static_cast<std::size_t>(cols);
  }
  SegregatingSets sets(static_cast<std::size_t>(rows),
                       std::vector<std::vector<Loc>>(static_cast<std::size_t>(cols)));
  for (std::size_t code = 0; code < universe; ++code) {
    std::size_t rest = code;
    for (int i = 0; i < rows; ++i) {
      const auto choice = rest % static_cast<std::size_t>(cols);
      rest /= static_cast<std::size_t>(cols);
      sets[static_cast<std::size_t>(i)][choice].push_back(offset + static_cast<Loc>(code) + 1);
    }
  }
  return sets;
}

}  // namespace liftsl

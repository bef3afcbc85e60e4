#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace liftsl {

using Loc = std::int64_t;
using Val = std::int64_t;

/// A finite partial map from positive locations to integer values.
///
/// Cells are kept sorted by location, so two heaps are equal exactly when
/// they denote the same mapping.
class Heap {
 public:
  using Cell = std::pair<Loc, Val>;

  Heap() = default;

  /// Builds a heap from arbitrary cells. Throws std::invalid_argument on a
  /// non-positive location or a repeated location.
  static Heap from_cells(std::vector<Cell> cells);

  /// The one-cell heap [loc -> value].
  static Heap cell(Loc loc, Val value = 0);

  /// [m0, ..., mk]: every location stores 0. Locations must be distinct.
  static Heap zeros(std::span<const Loc> locs);

  bool empty() const { return cells_.empty(); }
  std::size_t size() const { return cells_.size(); }
  bool contains(Loc loc) const;
  std::optional<Val> at(Loc loc) const;
  const std::vector<Cell>& cells() const { return cells_; }
  std::vector<Loc> domain() const;
  /// Largest allocated location, 0 for the empty heap.
  Loc max_loc() const { return cells_.empty() ? 0 : cells_.back().first; }

  /// Copy of this heap with `loc` set to `value` (inserted if absent).
  Heap with(Loc loc, Val value) const;

  auto operator<=>(const Heap&) const = default;
  bool operator==(const Heap&) const = default;

 private:
  std::vector<Cell> cells_;
};

bool disjoint(const Heap& f, const Heap& g);

/// f . g, defined only for disjoint domains.
std::optional<Heap> compose(const Heap& f, const Heap& g);

/// f + g, defined when f and g agree on shared locations.
std::optional<Heap> merge(const Heap& f, const Heap& g);

/// f - g: f restricted to locations outside dom(g). Total.
Heap subtract(const Heap& f, const Heap& g);

/// f restricted to dom(g).
Heap restrict_to(const Heap& f, const Heap& g);

/// f is extended by g (f is a subheap of g).
bool extends(const Heap& f, const Heap& g);

/// Every subheap of h, smallest first.
std::vector<Heap> subheaps(const Heap& h);

/// All heaps over locations 1..max_loc with at most max_cells cells and
/// values drawn from `values`, ordered by size and then lexicographically.
std::vector<Heap> enumerate_heaps(Loc max_loc, std::span<const Val> values,
                                  std::size_t max_cells);

std::string to_string(const Heap& h);

/// Parses "[1↦0, 2↦5]", "[1:0,2:5]", "[1|->0]" or the shorthand "[1, 2]"
/// (a bare location stores 0). "[]" is the empty heap.
Heap parse_heap(std::string_view text);

/// Segregating location sets, indexed [row][col]. Rows share one union,
/// cells in a row are disjoint, and cells from distinct rows intersect.
/// Every produced location is strictly greater than `offset`.
using SegregatingSets = std::vector<std::vector<std::vector<Loc>>>;
SegregatingSets segregating_sets(int rows, int cols, Loc offset = 0);

}  // namespace liftsl

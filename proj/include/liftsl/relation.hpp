#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "liftsl/heap.hpp"

namespace liftsl {

using HeapTuple = std::vector<Heap>;

/// t is componentwise extended by u.
bool tuple_extends(const HeapTuple& t, const HeapTuple& u);

/// An upward-closed n-ary heap relation, stored as the finite set of
/// generators whose upward closure it denotes.
///
/// The generator list is kept sorted and minimal (an antichain under
/// componentwise extension) unless minimization has been switched off
/// globally for debugging; equality of GenRel values is then equality of
/// relations.
class GenRel {
 public:
  explicit GenRel(int arity = 1);
  GenRel(int arity, std::vector<HeapTuple> generators);

  static GenRel top(int arity);
  static GenRel empty(int arity);
  /// The principal relation {t}↑.
  static GenRel principal(HeapTuple t);

  int arity() const { return arity_; }
  const std::vector<HeapTuple>& generators() const { return gens_; }
  bool is_empty() const { return gens_.empty(); }
  bool is_top() const;

  bool operator==(const GenRel&) const = default;

  static void set_minimize(bool on);
  static bool minimize_enabled();

 private:
  void canonicalize();

  int arity_;
  std::vector<HeapTuple> gens_;
};

bool member(const GenRel& r, const HeapTuple& t);
bool included(const GenRel& r, const GenRel& s);
bool equivalent(const GenRel& r, const GenRel& s);

GenRel rel_union(const GenRel& r, const GenRel& s);
GenRel meet(const GenRel& r, const GenRel& s);
GenRel star(const GenRel& r, const GenRel& s);

/// Diagonal embedding of a unary relation: {(f, ..., f) | f ∈ p}↑.
GenRel delta(int n, const GenRel& p);

/// A generator of r that is not a member of s, if any.
std::optional<HeapTuple> escaping_generator(const GenRel& r, const GenRel& s);

std::string to_string(const HeapTuple& t);
std::string to_string(const GenRel& r);

/// "{ ([1↦0],[]), ([2],[2]) }", "TOP(2)", "EMPTY(2)". A bare heap
/// "[1]" inside braces is a 1-tuple. Arity is inferred from the tuples;
/// `{}` needs `expected_arity`.
GenRel parse_relation(std::string_view text, int expected_arity = 0);

}  // namespace liftsl

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "liftsl/assertion.hpp"
#include "liftsl/relation.hpp"

namespace liftsl {

/// Finite stand-in for Int when interpreting quantifiers, the `_` wildcard
/// and the nonempty-heap atom `-` (which ranges over locations
/// 1..loc_bound). Results involving these constructs are relative to it.
struct ValueDomain {
  std::vector<Val> values{0, 1};
  Loc loc_bound = 3;
};

/// Bounds for enumerating relations and heaps.
struct SearchBudget {
  Loc max_locs = 3;
  std::vector<Val> values{0};
  int max_gens = 2;
  std::size_t max_heap_size = 1;
  /// Worker threads for candidate evaluation. The first hit in enumeration
  /// order is returned whatever the value.
  int threads = 1;
};

/// ρ: assertion variables to relations of a common arity.
struct AssertEnv {
  int arity = 1;
  std::map<std::string, GenRel> rels;

  const GenRel& at(const std::string& name) const;
  void set(const std::string& name, GenRel r);
};

std::string to_string(const AssertEnv& rho);

/// The n-ary interpretation, with n = rho.arity. Throws ShapeError on
/// unbound normal or assertion variables.
GenRel interpret(const Assertion& phi, const VarEnv& eta, const AssertEnv& rho,
                 const ValueDomain& dom);

/// Unary interpretation of an assertion without assertion variables.
GenRel interpret_unary(const Assertion& phi, const VarEnv& eta, const ValueDomain& dom);

/// Whether ⟦lhs⟧ ⊆ ⟦rhs⟧ under the fixed environments.
bool env_valid(const Assertion& lhs, const Assertion& rhs, const VarEnv& eta,
               const AssertEnv& rho, const ValueDomain& dom);

struct CounterEnv {
  AssertEnv rho;
  /// In ⟦lhs⟧ and not in ⟦rhs⟧ under rho.
  HeapTuple witness;
};

struct SearchReport {
  std::optional<CounterEnv> found;
  std::size_t candidates = 0;
  int arity = 1;
  SearchBudget budget;
};

/// Bounded search for ρ refuting n-ary η-validity. Candidate relations are
/// antichains of at most max_gens generator tuples over heaps with at most
/// max_heap_size cells, locations 1..max_locs and values from the budget.
/// Enumeration goes by total generator count, then per-variable counts in
/// lexicographic order, then an odometer over candidates; the first hit is
/// returned. Absence of a hit is not a validity proof.
SearchReport find_counter_env(const Assertion& lhs, const Assertion& rhs, const VarEnv& eta,
                              int n, const SearchBudget& budget, const ValueDomain& dom);

/// The candidate relations find_counter_env tries for one variable, in order.
std::vector<GenRel> candidate_relations(int n, const SearchBudget& budget);

}  // namespace liftsl

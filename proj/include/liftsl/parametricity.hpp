#pragma once

#include <optional>
#include <vector>

#include "liftsl/normalize.hpp"
#include "liftsl/semantics.hpp"

namespace liftsl {

/// Heaps h and hᵢ ⊑ h, hᵢ ∈ ⟦φᵢ⟧¹, for which no conjunct part lands in a
/// disjunct it dominates (Π(i) ≥ Ω(j)) and h is in no empty disjunct.
struct PcWitness {
  Heap h;
  std::vector<Heap> parts;
};

struct PcVerdict {
  bool holds = true;  // within the bound only
  std::optional<PcWitness> witness;
  std::size_t heaps_checked = 0;
};

/// Checks the parametricity condition over every heap h with locations in
/// 1..budget.max_locs and values from budget.values, and every choice of
/// subheaps of h. Bases are interpreted in `dom`.
PcVerdict pc_check(const ImplicationForm& impl, const VarEnv& eta, const SearchBudget& budget,
                   const ValueDomain& dom);

/// Whether (h, parts) violates the condition.
bool pc_violated(const ImplicationForm& impl, const VarEnv& eta, const ValueDomain& dom,
                 const PcWitness& w);

struct PcRefutation {
  int arity = 2;
  AssertEnv rho;
  HeapTuple witness;
  /// Domain under which the witness membership claims are exact.
  ValueDomain dom;
};

/// From a violation, builds an n-ary environment, n = max(2, largest
/// conjunct variable count), whose witness lies in the left side and, when
/// the violation is genuine, outside the right side. Each variable maps to
/// generators (h − hᵢ) in the k-th component composed with a segregating
/// location block in the first component, one per occurrence.
PcRefutation pc_counter_env(const ImplicationForm& impl, const PcWitness& w, const ValueDomain& dom);

}  // namespace liftsl

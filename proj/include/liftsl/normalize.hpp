#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "liftsl/assertion.hpp"

namespace liftsl {

/// base ∗ a₁ ∗ … ∗ aₖ with a variable-free base. `vars` is a sorted multiset.
struct Conjunct {
  Assertion base;
  std::vector<std::string> vars;
};

/// ⋁ᵢ ⋀ⱼ (φᵢⱼ ∗ āᵢⱼ).
struct SimpleAssertion {
  std::vector<std::vector<Conjunct>> disjuncts;
};

/// ⋀ᵢ φᵢ ∗ āᵢ  ⟹  ⋁ⱼ ψⱼ ∗ b̄ⱼ
struct ImplicationForm {
  std::vector<Conjunct> lhs;
  std::vector<Conjunct> rhs;
};

Conjunct make_conjunct(Assertion base, std::vector<std::string> vars);
Assertion to_assertion(const Conjunct& c);
Assertion to_assertion(const SimpleAssertion& s);
Assertion lhs_assertion(const ImplicationForm& f);
Assertion rhs_assertion(const ImplicationForm& f);

std::string to_string(const Conjunct& c);
std::string to_string(const SimpleAssertion& s);
/// "phi_1 * a * b /\ ... |= psi_1 * a \/ ..."
std::string to_string(const ImplicationForm& f);

/// Rewrites to a simple assertion using distribution of ∗ over ∨ and ∃,
/// pushing ∃ inward, and the distributive lattice laws. Subterms without
/// assertion variables are kept verbatim as bases. nullopt when no simple
/// form is reached or the result would exceed `max_conjuncts`.
std::optional<SimpleAssertion> to_simple(const Assertion& phi, std::size_t max_conjuncts = 10000);

/// Splits a simple implication into canonical implications: the left side
/// by its disjuncts, the right side by the clauses of its conjunctive
/// normal form; right-hand disjuncts mentioning variables absent on the
/// left are dropped, and an emptied right side becomes `false`.
/// Throws ShapeError when the clause count exceeds `max_forms`.
std::vector<ImplicationForm> reduce_implication(const SimpleAssertion& lhs,
                                                const SimpleAssertion& rhs,
                                                std::size_t max_forms = 10000);

/// Reads an implication already written in canonical form. Throws
/// ShapeError if it is not: the left side must be a conjunction and the
/// right side a disjunction of (variable-free base) ∗ variables.
ImplicationForm as_implication_form(const Assertion& lhs, const Assertion& rhs);

}  // namespace liftsl

#pragma once

#include <string>
#include <vector>

#include "liftsl/normalize.hpp"

namespace liftsl {

struct Edge {
  bool solid = true;
  /// Solid: variables with Π(i)(c) > Ω(j)(c). Dashed: Π(i)(c) < Ω(j)(c).
  std::vector<std::string> labels;
};

/// Variable-count vectors of an implication and the bipartite graph between
/// its conjuncts (left) and disjuncts (right).
struct LayoutGraph {
  std::vector<std::string> vars;         // sorted
  std::vector<std::vector<int>> pi;      // pi[i][v]
  std::vector<std::vector<int>> omega;   // omega[j][v]
  std::vector<std::vector<Edge>> edges;  // edges[i][j]

  std::size_t conjuncts() const { return pi.size(); }
  std::size_t disjuncts() const { return omega.size(); }
  bool conjunct_empty(std::size_t i) const;
  bool disjunct_empty(std::size_t j) const;
  int var_index(const std::string& name) const;  // -1 if absent
};

LayoutGraph compute_layout(const ImplicationForm& impl);

/// Layout from raw count vectors over `vars`.
LayoutGraph layout_from_counts(std::vector<std::string> vars, std::vector<std::vector<int>> pi,
                               std::vector<std::vector<int>> omega);

/// An implication with the given layout whose bases are all `base`
/// (default `true`).
ImplicationForm implication_with_layout(const LayoutGraph& g, const Assertion& base = nullptr);

/// Graphviz text. Conjunct nodes on the left, disjunct nodes on the right;
/// dashed edges drawn dashed, labels as edge annotations, empty disjuncts
/// as boxes.
std::string to_dot(const LayoutGraph& g, const ImplicationForm* impl = nullptr);

std::string describe(const LayoutGraph& g);

}  // namespace liftsl

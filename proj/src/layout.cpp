#include "liftsl/layout.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace liftsl {

bool LayoutGraph::conjunct_empty(std::size_t i) const {
  return std::all_of(pi[i].begin(), pi[i].end(), [](int c) { return c == 0; });
}

bool LayoutGraph::disjunct_empty(std::size_t j) const {
  return std::all_of(omega[j].begin(), omega[j].end(), [](int c) { return c == 0; });
}

int LayoutGraph::var_index(const std::string& name) const {
  auto it = std::lower_bound(vars.begin(), vars.end(), name);
  if (it == vars.end() || *it != name) return -1;
  return static_cast<int>(it - vars.begin());
}

LayoutGraph layout_from_counts(std::vector<std::string> vars, std::vector<std::vector<int>> pi,
                               std::vector<std::vector<int>> omega) {
  if (!std::is_sorted(vars.begin(), vars.end()) ||
      std::adjacent_find(vars.begin(), vars.end()) != vars.end()) {
    throw std::invalid_argument("layout variables must be sorted and distinct");
  }
  for (const auto& row : pi)
    if (row.size() != vars.size()) throw std::invalid_argument("count vector length mismatch");
  for (const auto& row : omega)
    if (row.size() != vars.size()) throw std::invalid_argument("count vector length mismatch");

  LayoutGraph g;
  g.vars = std::move(vars);
  g.pi = std::move(pi);
  g.omega = std::move(omega);
  g.edges.assign(g.pi.size(), std::vector<Edge>(g.omega.size()));
  for (std::size_t i = 0; i < g.pi.size(); ++i) {
    for (std::size_t j = 0; j < g.omega.size(); ++j) {
      Edge& e = g.edges[i][j];
      std::vector<std::string> more, fewer;
      for (std::size_t v = 0; v < g.vars.size(); ++v) {
        if (g.pi[i][v] > g.omega[j][v]) more.push_back(g.vars[v]);
        if (g.pi[i][v] < g.omega[j][v]) fewer.push_back(g.vars[v]);
      }
      e.solid = fewer.empty();
      e.labels = e.solid ? more : fewer;
    }
  }
  return g;
}

LayoutGraph compute_layout(const ImplicationForm& impl) {
  std::set<std::string> all;
  for (const auto& c : impl.lhs) all.insert(c.vars.begin(), c.vars.end());
  for (const auto& c : impl.rhs) all.insert(c.vars.begin(), c.vars.end());
  std::vector<std::string> vars(all.begin(), all.end());
  auto counts = [&](const Conjunct& c) {
    std::vector<int> row(vars.size(), 0);
    for (const auto& v : c.vars) {
      ++row[static_cast<std::size_t>(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin())];
    }
    return row;
  };
  std::vector<std::vector<int>> pi, omega;
  for (const auto& c : impl.lhs) pi.push_back(counts(c));
  for (const auto& c : impl.rhs) omega.push_back(counts(c));
  return layout_from_counts(std::move(vars), std::move(pi), std::move(omega));
}

ImplicationForm implication_with_layout(const LayoutGraph& g, const Assertion& base) {
  const Assertion b = base ? base : mk_true();
  auto conjunct = [&](const std::vector<int>& row) {
    std::vector<std::string> vs;
    for (std::size_t v = 0; v < g.vars.size(); ++v) {
      for (int k = 0; k < row[v]; ++k) vs.push_back(g.vars[v]);
    }
    return Conjunct{b, std::move(vs)};
  };
  ImplicationForm f;
  for (const auto& row : g.pi) f.lhs.push_back(conjunct(row));
  for (const auto& row : g.omega) f.rhs.push_back(conjunct(row));
  return f;
}

namespace {

std::string join(const std::vector<std::string>& xs, const char* sep) {
  std::string out;
  for (const auto& x : xs) {
    if (!out.empty()) out += sep;
    out += x;
  }
  return out;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string to_dot(const LayoutGraph& g, const ImplicationForm* impl) {
  std::string out = "digraph layout {\n  rankdir=LR;\n  edge [dir=none];\n";
  out += "  subgraph cluster_lhs {\n    label=\"conjuncts\";\n";
  for (std::size_t i = 0; i < g.conjuncts(); ++i) {
    std::string label = "L" + std::to_string(i + 1);
    if (impl) label += ": " + to_string(impl->lhs[i]);
    out += "    L" + std::to_string(i + 1) + " [shape=ellipse, label=\"" + escape(label) + "\"];\n";
  }
  out += "  }\n  subgraph cluster_rhs {\n    label=\"disjuncts\";\n";
  for (std::size_t j = 0; j < g.disjuncts(); ++j) {
    std::string label = "R" + std::to_string(j + 1);
    if (impl) label += ": " + to_string(impl->rhs[j]);
    const char* shape = g.disjunct_empty(j) ? "box" : "ellipse";
    out += "    R" + std::to_string(j + 1) + " [shape=" + shape + ", label=\"" + escape(label) + "\"];\n";
  }
  out += "  }\n";
  for (std::size_t i = 0; i < g.conjuncts(); ++i) {
    for (std::size_t j = 0; j < g.disjuncts(); ++j) {
      const Edge& e = g.edges[i][j];
      out += "  L" + std::to_string(i + 1) + " -> R" + std::to_string(j + 1) + " [style=" +
             (e.solid ? "solid" : "dashed");
      if (!e.labels.empty()) out += ", label=\"" + escape(join(e.labels, ",")) + "\"";
      out += "];\n";
    }
  }
  out += "}\n";
  return out;
}

std::string describe(const LayoutGraph& g) {
  std::string out;
  for (std::size_t i = 0; i < g.conjuncts(); ++i) {
    for (std::size_t j = 0; j < g.disjuncts(); ++j) {
      const Edge& e = g.edges[i][j];
      if (!out.empty()) out += ", ";
      out += "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") " +
             (e.solid ? "solid" : "dashed") + "{" + join(e.labels, ",") + "}";
    }
  }
  for (std::size_t j = 0; j < g.disjuncts(); ++j) {
    if (g.disjunct_empty(j)) out += "; disjunct " + std::to_string(j + 1) + " empty";
  }
  return out;
}

}  // namespace liftsl

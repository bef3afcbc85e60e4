#include "liftsl/parametricity.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "liftsl/layout.hpp"

namespace liftsl {

namespace {

struct Prepared {
  LayoutGraph layout;
  std::vector<GenRel> phi;  // unary meanings of the conjunct bases
  std::vector<GenRel> psi;  // and of the disjunct bases
};

Prepared prepare(const ImplicationForm& impl, const VarEnv& eta, const ValueDomain& dom) {
  Prepared p{compute_layout(impl), {}, {}};
  for (const auto& c : impl.lhs) p.phi.push_back(interpret_unary(c.base, eta, dom));
  for (const auto& c : impl.rhs) p.psi.push_back(interpret_unary(c.base, eta, dom));
  return p;
}

bool in(const GenRel& r, const Heap& h) { return member(r, HeapTuple{h}); }

// Part hᵢ of conjunct i satisfies the first option on its own.
bool part_ok(const Prepared& p, std::size_t i, const Heap& part) {
  for (std::size_t j = 0; j < p.psi.size(); ++j) {
    if (p.layout.edges[i][j].solid && in(p.psi[j], part)) return true;
  }
  return false;
}

bool whole_ok(const Prepared& p, const Heap& h) {
  for (std::size_t j = 0; j < p.psi.size(); ++j) {
    if (p.layout.disjunct_empty(j) && in(p.psi[j], h)) return true;
  }
  return false;
}

}  // namespace

bool pc_violated(const ImplicationForm& impl, const VarEnv& eta, const ValueDomain& dom,
                 const PcWitness& w) {
  const Prepared p = prepare(impl, eta, dom);
  if (w.parts.size() != impl.lhs.size()) throw std::invalid_argument("one part per conjunct expected");
  for (std::size_t i = 0; i < w.parts.size(); ++i) {
    if (!extends(w.parts[i], w.h) || !in(p.phi[i], w.parts[i])) return false;
  }
  if (whole_ok(p, w.h)) return false;
  for (std::size_t i = 0; i < w.parts.size(); ++i) {
    if (part_ok(p, i, w.parts[i])) return false;
  }
  return true;
}

PcVerdict pc_check(const ImplicationForm& impl, const VarEnv& eta, const SearchBudget& budget,
                   const ValueDomain& dom) {
  const Prepared p = prepare(impl, eta, dom);
  PcVerdict v;
  const auto heaps = enumerate_heaps(budget.max_locs, budget.values, static_cast<std::size_t>(budget.max_locs));
  for (const Heap& h : heaps) {
    ++v.heaps_checked;
    if (whole_ok(p, h)) continue;
    // A violating tuple exists iff every conjunct has a bad candidate part;
    // the parts can be chosen independently.
    const auto subs = subheaps(h);
    std::vector<Heap> parts;
    for (std::size_t i = 0; i < impl.lhs.size(); ++i) {
      auto bad = std::find_if(subs.begin(), subs.end(), [&](const Heap& s) {
        return in(p.phi[i], s) && !part_ok(p, i, s);
      });
      if (bad == subs.end()) break;
      parts.push_back(*bad);
    }
    if (parts.size() == impl.lhs.size()) {
      v.holds = false;
      v.witness = PcWitness{h, std::move(parts)};
      return v;
    }
  }
  return v;
}

PcRefutation pc_counter_env(const ImplicationForm& impl, const PcWitness& w, const ValueDomain& dom) {
  const int m = static_cast<int>(impl.lhs.size());
  if (m == 0 || w.parts.size() != impl.lhs.size()) throw std::invalid_argument("malformed parametricity witness");
  int k_max = 1;
  for (const auto& c : impl.lhs) k_max = std::max(k_max, static_cast<int>(c.vars.size()));
  const int n = std::max(2, k_max);
  const Loc offset = w.h.max_loc();
  const SegregatingSets seg = segregating_sets(m, k_max, offset);

  auto block = [](const std::vector<Loc>& locs) { return Heap::zeros(locs); };
  auto nth = [&](int k, const Heap& h) {
    HeapTuple t(static_cast<std::size_t>(n));
    t[static_cast<std::size_t>(k)] = h;
    return t;
  };
  // Componentwise composition; the pieces are disjoint by construction.
  auto glue = [](HeapTuple a, const HeapTuple& b) {
    for (std::size_t c = 0; c < a.size(); ++c) a[c] = *compose(a[c], b[c]);
    return a;
  };

  PcRefutation out;
  out.arity = n;
  out.rho.arity = n;
  std::set<std::string> vars;
  for (const auto& c : impl.lhs) vars.insert(c.vars.begin(), c.vars.end());
  for (const auto& c : impl.rhs) vars.insert(c.vars.begin(), c.vars.end());
  for (const auto& v : vars) out.rho.rels.emplace(v, GenRel::empty(n));

  for (int i = 0; i < m; ++i) {
    const auto& occ = impl.lhs[static_cast<std::size_t>(i)].vars;
    const Heap rest = subtract(w.h, w.parts[static_cast<std::size_t>(i)]);
    for (int k = 0; k < static_cast<int>(occ.size()); ++k) {
      HeapTuple g = glue(nth(k, rest), nth(0, block(seg[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)])));
      GenRel& r = out.rho.rels.at(occ[static_cast<std::size_t>(k)]);
      r = rel_union(r, GenRel::principal(std::move(g)));
    }
  }

  std::vector<Loc> universe;
  for (const auto& cell : seg[0]) universe.insert(universe.end(), cell.begin(), cell.end());
  std::sort(universe.begin(), universe.end());
  out.witness = glue(HeapTuple(static_cast<std::size_t>(n), w.h), nth(0, block(universe)));

  out.dom = dom;
  Loc top = universe.empty() ? offset : universe.back();
  out.dom.loc_bound = std::max(dom.loc_bound, top);
  for (const auto& [l, v] : w.h.cells()) {
    (void)l;
    if (!std::count(out.dom.values.begin(), out.dom.values.end(), v)) out.dom.values.push_back(v);
  }
  if (!std::count(out.dom.values.begin(), out.dom.values.end(), Val{0})) out.dom.values.push_back(0);
  std::sort(out.dom.values.begin(), out.dom.values.end());
  return out;
}

}  // namespace liftsl

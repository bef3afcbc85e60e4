#include "liftsl/lifting.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "liftsl/error.hpp"
#include "liftsl/parametricity.hpp"

namespace liftsl {

const char* to_string(Criterion c) {
  switch (c) {
    case Criterion::Shadow: return "Shadow";
    case Criterion::Balloon: return "Balloon";
    case Criterion::Lonely: return "Lonely";
  }
  return "?";
}

const char* const kNoGuaranteeNote =
    "note: failure of the lifting theorems do not imply that a concrete implication cannot be "
    "lifted; the parametricity condition can still be checked directly (see `pc`)";

namespace {

std::string join(const std::vector<std::string>& xs, const char* sep = ",") {
  std::string out;
  for (const auto& x : xs) {
    if (!out.empty()) out += sep;
    out += x;
  }
  return out;
}

std::string edge_name(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

// c labels no solid edge: Π(k)(c) = Ω(l)(c) whenever (k,l) is solid.
bool solid_label_free(const LayoutGraph& g, std::size_t c) {
  for (std::size_t k = 0; k < g.conjuncts(); ++k) {
    for (std::size_t l = 0; l < g.disjuncts(); ++l) {
      if (g.edges[k][l].solid && g.pi[k][c] != g.omega[l][c]) return false;
    }
  }
  return true;
}

}  // namespace

ShadowResult shadow_criterion(const LayoutGraph& g) {
  ShadowResult r;
  std::vector<bool> free(g.vars.size());
  for (std::size_t c = 0; c < g.vars.size(); ++c) free[c] = solid_label_free(g, c);

  for (std::size_t i = 0; i < g.conjuncts(); ++i) {
    for (std::size_t j = 0; j < g.disjuncts(); ++j) {
      if (g.edges[i][j].solid) continue;
      bool ok = false;
      for (std::size_t c = 0; c < g.vars.size() && !ok; ++c) {
        ok = g.pi[i][c] < g.omega[j][c] && free[c];
      }
      if (!ok) {
        r.diagnostic = "dashed " + edge_name(i, j) + " has no label that is absent from every solid edge";
        return r;
      }
    }
  }
  for (std::size_t j = 0; j < g.disjuncts(); ++j) {
    bool ok = false;
    for (std::size_t c = 0; c < g.vars.size() && !ok; ++c) ok = g.omega[j][c] > 0 && free[c];
    if (!ok) {
      r.diagnostic = g.disjunct_empty(j)
                         ? "disjunct " + std::to_string(j + 1) + " is empty"
                         : "disjunct " + std::to_string(j + 1) + " has no variable absent from every solid edge label";
      return r;
    }
  }
  r.holds = true;
  return r;
}

namespace {

bool balloon_ok(const LayoutGraph& g, const std::vector<bool>& in_b) {
  auto sum = [&](const std::vector<int>& row) {
    int s = 0;
    for (std::size_t c = 0; c < row.size(); ++c) s += in_b[c] ? row[c] : 0;
    return s;
  };
  for (const auto& row : g.pi)
    if (sum(row) > 1) return false;
  for (std::size_t j = 0; j < g.disjuncts(); ++j)
    if (!g.disjunct_empty(j) && sum(g.omega[j]) != 1) return false;
  for (std::size_t i = 0; i < g.conjuncts(); ++i) {
    for (std::size_t j = 0; j < g.disjuncts(); ++j) {
      const Edge& e = g.edges[i][j];
      if (e.solid) continue;
      bool hit = std::any_of(e.labels.begin(), e.labels.end(),
                             [&](const std::string& v) { return in_b[static_cast<std::size_t>(g.var_index(v))]; });
      if (!hit) return false;
    }
  }
  return true;
}

}  // namespace

BalloonResult balloon_criterion(const LayoutGraph& g, std::size_t max_vars) {
  BalloonResult r;
  const std::size_t n = g.vars.size();
  if (n > max_vars) {
    r.budget_exceeded = true;
    r.diagnostic = "undecided: budget (" + std::to_string(n) + " variables, limit " + std::to_string(max_vars) + ")";
    return r;
  }
  // Subsets by size, then lexicographically.
  for (std::size_t size = 0; size <= n; ++size) {
    std::vector<bool> in_b(n, false);
    std::fill(in_b.begin(), in_b.begin() + static_cast<std::ptrdiff_t>(size), true);
    do {
      if (balloon_ok(g, in_b)) {
        std::vector<std::string> b;
        for (std::size_t c = 0; c < n; ++c)
          if (in_b[c]) b.push_back(g.vars[c]);
        r.set = std::move(b);
        return r;
      }
    } while (std::prev_permutation(in_b.begin(), in_b.end()));
  }
  r.diagnostic = "no subset of {" + join(g.vars) + "} meets all three conditions";
  return r;
}

LonelyResult lonely_criterion(const LayoutGraph& g) {
  LonelyResult r;
  if (g.conjuncts() != 1) {
    r.diagnostic = std::to_string(g.conjuncts()) + " conjuncts";
    return r;
  }
  for (std::size_t j = 0; j < g.disjuncts(); ++j) {
    if (!g.edges[0][j].solid) {
      r.diagnostic = "edge " + edge_name(0, j) + " is dashed";
      return r;
    }
  }
  r.holds = true;
  return r;
}

std::string LiftVerdict::label() const {
  if (undecided) return "Undecided(budget)";
  if (!lifts) return "NoGuarantee";
  if (criterion == Criterion::Balloon) return "Lifts(Balloon({" + join(balloon_set) + "}))";
  return std::string("Lifts(") + to_string(criterion) + ")";
}

LiftVerdict lift_check(const LayoutGraph& g) {
  LiftVerdict v;
  v.shadow = shadow_criterion(g);
  v.balloon = balloon_criterion(g);
  v.lonely = lonely_criterion(g);
  if (v.shadow.holds) {
    v.lifts = true;
    v.criterion = Criterion::Shadow;
  } else if (v.balloon.set) {
    v.lifts = true;
    v.criterion = Criterion::Balloon;
    v.balloon_set = *v.balloon.set;
  } else if (v.lonely.holds) {
    v.lifts = true;
    v.criterion = Criterion::Lonely;
  } else {
    v.undecided = v.balloon.budget_exceeded;
  }
  return v;
}

LiftVerdict lift_check(const ImplicationForm& impl) { return lift_check(compute_layout(impl)); }

std::vector<std::string> right_only_variables(const LayoutGraph& g) {
  std::vector<std::string> out;
  for (std::size_t c = 0; c < g.vars.size(); ++c) {
    bool left = false, right = false;
    for (const auto& row : g.pi) left = left || row[c] > 0;
    for (const auto& row : g.omega) right = right || row[c] > 0;
    if (right && !left) out.push_back(g.vars[c]);
  }
  return out;
}

std::string ChkReport::headline() const {
  if (ok) {
    std::vector<std::string> names;
    for (const auto& v : verdicts) {
      std::string n = to_string(v.criterion);
      if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
    }
    return "LIFTS (" + (names.empty() ? std::string("vacuous") : join(names, ", ")) + ")";
  }
  if (!lhs_simple || !rhs_simple) return "DOES NOT LIFT (not simple)";
  if (std::any_of(verdicts.begin(), verdicts.end(), [](const LiftVerdict& v) { return v.undecided; }))
    return "DOES NOT LIFT (Undecided)";
  return "DOES NOT LIFT (NoGuarantee)";
}

ChkReport chk(const Assertion& phi, const Assertion& psi) {
  ChkReport r;
  const auto l = to_simple(phi);
  const auto rr = to_simple(psi);
  r.lhs_simple = l.has_value();
  r.rhs_simple = rr.has_value();
  if (!l || !rr) {
    r.reason = !l ? "left side has no simple form" : "right side has no simple form";
    return r;
  }
  try {
    r.family = reduce_implication(*l, *rr);
  } catch (const ShapeError& e) {
    r.reason = e.what();
    return r;
  }
  r.ok = true;
  for (std::size_t k = 0; k < r.family.size(); ++k) {
    r.verdicts.push_back(lift_check(r.family[k]));
    const LiftVerdict& v = r.verdicts.back();
    if (!v.lifts && r.ok) {
      r.ok = false;
      const std::string why = v.undecided ? v.balloon.diagnostic : v.shadow.diagnostic + "; " +
                                                                       v.balloon.diagnostic + "; " +
                                                                       v.lonely.diagnostic;
      r.reason = "implication " + std::to_string(k + 1) + " (" + to_string(r.family[k]) + "): " + v.label() +
                 ": " + why;
    }
  }
  return r;
}

RecheckResult recheck(const CounterexamplePackage& p) {
  RecheckResult r;
  const Assertion lhs = lhs_assertion(p.impl);
  const Assertion rhs = rhs_assertion(p.impl);
  r.witness_in_lhs = member(interpret(lhs, p.eta, p.binary_rho, p.dom), p.witness);
  r.witness_in_rhs = member(interpret(rhs, p.eta, p.binary_rho, p.dom), p.witness);
  r.unary_clear = !find_counter_env(lhs, rhs, p.eta, 1, p.unary_budget, p.dom).found.has_value();
  return r;
}

std::vector<Assertion> witness_templates() {
  const Assertion one = mk_points_to_any(lit(1));
  const Assertion two = mk_points_to_any(lit(2));
  const Assertion ne = mk_nonempty();
  return {mk_true(), one, two, ne, mk_false(), mk_star(ne, ne), mk_star(one, two), mk_star(one, ne), mk_or(one, two)};
}

namespace {

struct Pattern {
  const char* name;
  std::vector<std::vector<int>> pi, omega;  // over variables (a, b)
  std::vector<Assertion> lhs, rhs;
  std::vector<std::string> rels;  // ρ(a), ρ(b)
  HeapTuple witness;
};

std::vector<Pattern> fast_paths() {
  const Assertion one = mk_points_to_any(lit(1));
  const Assertion ne = mk_nonempty();
  std::vector<Pattern> out;
  out.push_back({"fan",
                 {{0, 0}, {1, 1}},
                 {{1, 0}, {0, 1}},
                 {one, mk_true()},
                 {one, one},
                 {"{([1],[])}", "{([],[1])}"},
                 {parse_heap("[1]"), parse_heap("[1]")}});
  out.push_back({"bridge",
                 {{1, 1}, {2, 0}},
                 {{2, 0}, {0, 1}},
                 {ne, mk_true()},
                 {ne, mk_star(ne, ne)},
                 {"{([1],[]), ([2],[2])}", "TOP(2)"},
                 {parse_heap("[1, 2]"), parse_heap("[2]")}});
  return out;
}

struct Match {
  std::vector<std::size_t> var_of;  // pattern variable -> layout variable
  std::vector<std::size_t> conj;    // layout conjunct -> pattern conjunct
  std::vector<std::size_t> disj;
};

std::optional<std::vector<std::size_t>> match_rows(const std::vector<std::vector<int>>& rows,
                                                   const std::vector<std::vector<int>>& pattern,
                                                   const std::vector<std::size_t>& var_of) {
  if (rows.size() != pattern.size()) return std::nullopt;
  std::vector<std::size_t> perm;
  std::vector<bool> used(pattern.size(), false);
  for (const auto& row : rows) {
    bool found = false;
    for (std::size_t p = 0; p < pattern.size() && !found; ++p) {
      if (used[p]) continue;
      bool eq = true;
      for (std::size_t v = 0; v < var_of.size(); ++v) eq = eq && pattern[p][v] == row[var_of[v]];
      if (eq) {
        used[p] = true;
        perm.push_back(p);
        found = true;
      }
    }
    if (!found) return std::nullopt;
  }
  return perm;
}

std::optional<Match> match(const LayoutGraph& g, const Pattern& p) {
  if (g.vars.size() != 2) return std::nullopt;
  for (std::vector<std::size_t> var_of : {std::vector<std::size_t>{0, 1}, std::vector<std::size_t>{1, 0}}) {
    auto c = match_rows(g.pi, p.pi, var_of);
    auto d = match_rows(g.omega, p.omega, var_of);
    if (c && d) return Match{var_of, *c, *d};
  }
  return std::nullopt;
}

ImplicationForm with_bases(const LayoutGraph& g, const std::vector<Assertion>& lhs, const std::vector<Assertion>& rhs) {
  ImplicationForm f = implication_with_layout(g);
  for (std::size_t i = 0; i < f.lhs.size(); ++i) f.lhs[i].base = lhs[i];
  for (std::size_t j = 0; j < f.rhs.size(); ++j) f.rhs[j].base = rhs[j];
  return f;
}

AssertEnv pattern_rho(const LayoutGraph& g, const Pattern& p, const Match& m) {
  AssertEnv rho{2, {}};
  for (std::size_t v = 0; v < 2; ++v) rho.set(g.vars[m.var_of[v]], parse_relation(p.rels[v], 2));
  return rho;
}

// Fills in the unary evidence; false if the bounded search refutes.
bool attach_unary(CounterexamplePackage& p, const SearchBudget& budget) {
  p.unary_budget = budget;
  const auto rep = find_counter_env(lhs_assertion(p.impl), rhs_assertion(p.impl), p.eta, 1, budget, p.dom);
  p.unary_candidates = rep.candidates;
  return !rep.found;
}

bool refuted(const CounterexamplePackage& p) {
  return member(interpret(lhs_assertion(p.impl), p.eta, p.binary_rho, p.dom), p.witness) &&
         !member(interpret(rhs_assertion(p.impl), p.eta, p.binary_rho, p.dom), p.witness);
}

// Unary validity with every variable empty or full; a cheap necessary
// condition checked before anything binary.
bool holds_at_extremes(const ImplicationForm& impl, const VarEnv& eta, const ValueDomain& dom) {
  std::vector<std::string> vars;
  for (const auto& c : impl.lhs) vars.insert(vars.end(), c.vars.begin(), c.vars.end());
  for (const auto& d : impl.rhs) vars.insert(vars.end(), d.vars.begin(), d.vars.end());
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  if (vars.size() > 12) return true;
  const Assertion lhs = lhs_assertion(impl);
  const Assertion rhs = rhs_assertion(impl);
  for (std::size_t m = 0; m < (std::size_t{1} << vars.size()); ++m) {
    AssertEnv rho{1, {}};
    for (std::size_t v = 0; v < vars.size(); ++v) rho.set(vars[v], (m >> v) & 1 ? GenRel::top(1) : GenRel::empty(1));
    if (!included(interpret(lhs, eta, rho, dom), interpret(rhs, eta, rho, dom))) return false;
  }
  return true;
}

// Binary environments assembled from a parametricity violation (h, hᵢ):
// each occurrence in conjunct i contributes h − hᵢ in the left component, in
// the right one, or nothing, and a variable may instead be Heap². The
// witness is (h, h).
std::optional<std::pair<AssertEnv, HeapTuple>> occurrence_env(const ImplicationForm& impl, const VarEnv& eta,
                                                               const PcWitness& w, const ValueDomain& dom,
                                                               std::size_t max_envs) {
  std::vector<std::string> vars;
  struct Occ {
    std::size_t var;
    Heap rest;
  };
  std::vector<Occ> occ;
  for (std::size_t i = 0; i < impl.lhs.size(); ++i) {
    const Heap rest = subtract(w.h, w.parts[i]);
    for (const auto& v : impl.lhs[i].vars) {
      auto it = std::find(vars.begin(), vars.end(), v);
      if (it == vars.end()) it = vars.insert(vars.end(), v);
      occ.push_back({static_cast<std::size_t>(it - vars.begin()), rest});
    }
  }
  for (const auto& d : impl.rhs)
    for (const auto& v : d.vars)
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);

  const Assertion lhs = lhs_assertion(impl);
  const Assertion rhs = rhs_assertion(impl);
  const HeapTuple witness{w.h, w.h};
  std::size_t tried = 0;
  std::vector<bool> top(vars.size(), false);
  std::vector<int> choice(occ.size(), 0);
  std::optional<std::pair<AssertEnv, HeapTuple>> hit;

  std::function<void(std::size_t)> occurrences = [&](std::size_t k) {
    if (hit || tried >= max_envs) return;
    if (k == occ.size()) {
      ++tried;
      std::vector<std::vector<HeapTuple>> gens(vars.size());
      for (std::size_t o = 0; o < occ.size(); ++o) {
        if (choice[o] == 1) gens[occ[o].var].push_back({occ[o].rest, Heap()});
        if (choice[o] == 2) gens[occ[o].var].push_back({Heap(), occ[o].rest});
      }
      AssertEnv rho{2, {}};
      for (std::size_t v = 0; v < vars.size(); ++v)
        rho.set(vars[v], top[v] ? GenRel::top(2) : GenRel(2, std::move(gens[v])));
      if (member(interpret(lhs, eta, rho, dom), witness) && !member(interpret(rhs, eta, rho, dom), witness))
        hit = std::make_pair(std::move(rho), witness);
      return;
    }
    for (int c = 0; c < (top[occ[k].var] ? 1 : 3) && !hit; ++c) {
      choice[k] = c;
      occurrences(k + 1);
    }
  };
  for (std::size_t m = 0; m < (std::size_t{1} << vars.size()) && !hit && tried < max_envs; ++m) {
    for (std::size_t v = 0; v < vars.size(); ++v) top[v] = (m >> v) & 1;
    occurrences(0);
  }
  return hit;
}

// A binary refutation from a parametricity violation, or from bounded search
// when neither direct construction applies.
std::optional<CounterexamplePackage> refute(const ImplicationForm& impl, const VarEnv& eta,
                                            const WitnessSearchOptions& o, std::string origin) {
  const PcVerdict pc = pc_check(impl, eta, o.pc_budget, o.dom);
  if (pc.holds) return std::nullopt;
  if (!holds_at_extremes(impl, eta, o.dom)) return std::nullopt;
  CounterexamplePackage p;
  p.impl = impl;
  p.eta = eta;
  p.origin = std::move(origin);
  std::size_t k = 0;
  for (const auto& c : impl.lhs) k = std::max(k, c.vars.size());
  bool have = false;
  if (k <= 2) {
    const PcRefutation ref = pc_counter_env(impl, *pc.witness, o.dom);
    p.dom = ref.dom;
    p.binary_rho = ref.rho;
    p.witness = ref.witness;
    have = refuted(p);
  }
  if (!have) {
    if (auto env = occurrence_env(impl, eta, *pc.witness, o.dom, o.max_occurrence_envs)) {
      p.dom = o.dom;
      p.binary_rho = std::move(env->first);
      p.witness = std::move(env->second);
      have = true;
    }
  }
  if (!have) {
    const auto rep = find_counter_env(lhs_assertion(impl), rhs_assertion(impl), eta, 2, o.binary_budget, o.dom);
    if (!rep.found) return std::nullopt;
    p.dom = o.dom;
    p.binary_rho = rep.found->rho;
    p.witness = rep.found->witness;
  }
  if (!attach_unary(p, o.unary_budget)) return std::nullopt;
  return p;
}

void tuples_with_sum(std::size_t slots, std::size_t kinds, std::size_t sum, std::vector<std::size_t>& cur,
                     const std::function<bool(const std::vector<std::size_t>&)>& visit, bool& stop) {
  if (stop) return;
  if (cur.size() == slots) {
    if (sum == 0) stop = !visit(cur);
    return;
  }
  const std::size_t left = slots - cur.size() - 1;
  for (std::size_t t = 0; t < kinds && t <= sum && !stop; ++t) {
    if (sum - t > left * (kinds - 1)) continue;
    cur.push_back(t);
    tuples_with_sum(slots, kinds, sum - t, cur, visit, stop);
    cur.pop_back();
  }
}

}  // namespace

WitnessSearchReport witness_search(const LayoutGraph& g, const ImplicationForm* impl, const WitnessSearchOptions& o) {
  WitnessSearchReport r;
  const LiftVerdict v = lift_check(g);
  if (v.lifts) {
    r.criteria_hold = true;
    r.note = "layout meets " + v.label() + "; no witness exists";
    return r;
  }
  if (v.undecided) {
    r.note = "criteria undecided within budget; search skipped";
    return r;
  }
  if (const auto extra = right_only_variables(g); !extra.empty()) {
    r.outside_form = true;
    r.note = "outside the implication form: {" + join(extra) + "} occur only on the right; search skipped";
    return r;
  }
  const VarEnv no_eta;

  for (const Pattern& pat : fast_paths()) {
    const auto m = match(g, pat);
    if (!m) continue;
    std::vector<Assertion> lhs, rhs;
    for (std::size_t i : m->conj) lhs.push_back(pat.lhs[i]);
    for (std::size_t j : m->disj) rhs.push_back(pat.rhs[j]);
    auto candidate = [&](const ImplicationForm& f, const VarEnv& eta, std::string origin) {
      CounterexamplePackage p;
      p.impl = f;
      p.eta = eta;
      p.dom = o.dom;
      p.binary_rho = pattern_rho(g, pat, *m);
      p.witness = pat.witness;
      p.origin = std::move(origin);
      ++r.candidates;
      if (refuted(p) && attach_unary(p, o.unary_budget)) r.package = std::move(p);
    };
    if (impl) candidate(*impl, {}, std::string(pat.name) + " environment on the given bases");
    if (!r.package) candidate(with_bases(g, lhs, rhs), no_eta, std::string(pat.name) + " counterexample");
    if (r.package) return r;
  }

  if (impl) {
    ++r.candidates;
    if (auto p = refute(*impl, {}, o, "given bases")) {
      r.package = std::move(p);
      return r;
    }
  }

  // A repeated conjunct (disjunct) is idempotent under ∧ (∨): a witness for
  // the layout with one copy removed extends by copying its twin's base.
  for (int side = 0; side < 2; ++side) {
    const auto& rows = side == 0 ? g.pi : g.omega;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto twin = std::find(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(i), rows[i]);
      if (twin == rows.begin() + static_cast<std::ptrdiff_t>(i)) continue;
      auto pi = g.pi, omega = g.omega;
      auto& cut = side == 0 ? pi : omega;
      cut.erase(cut.begin() + static_cast<std::ptrdiff_t>(i));
      const LayoutGraph smaller = layout_from_counts(g.vars, pi, omega);
      const LiftVerdict sv = lift_check(smaller);
      if (sv.lifts || sv.undecided) continue;
      WitnessSearchReport sub = witness_search(smaller, nullptr, o);
      r.candidates += sub.candidates;
      if (!sub.package) continue;
      std::vector<Assertion> lhs, rhs;
      for (const auto& c : sub.package->impl.lhs) lhs.push_back(c.base);
      for (const auto& d : sub.package->impl.rhs) rhs.push_back(d.base);
      auto& grow = side == 0 ? lhs : rhs;
      grow.insert(grow.begin() + static_cast<std::ptrdiff_t>(i), grow[static_cast<std::size_t>(twin - rows.begin())]);
      CounterexamplePackage p = std::move(*sub.package);
      p.impl = with_bases(g, lhs, rhs);
      p.origin += ", repeated row restored";
      if (refuted(p) && attach_unary(p, o.unary_budget)) {
        r.package = std::move(p);
        return r;
      }
    }
  }

  const auto templates = witness_templates();
  const std::size_t slots = g.conjuncts() + g.disjuncts();
  const std::size_t kinds = templates.size();
  const std::size_t false_index = 4;
  bool stop = false;
  std::vector<std::size_t> cur;
  auto visit = [&](const std::vector<std::size_t>& pick) {
    for (std::size_t i = 0; i < g.conjuncts(); ++i)
      if (pick[i] == false_index) return true;
    if (r.candidates >= o.max_candidates) return false;
    ++r.candidates;
    std::vector<Assertion> lhs, rhs;
    for (std::size_t s = 0; s < slots; ++s) (s < g.conjuncts() ? lhs : rhs).push_back(templates[pick[s]]);
    if (auto p = refute(with_bases(g, lhs, rhs), no_eta, o, "template search")) {
      r.package = std::move(p);
      return false;
    }
    return true;
  };
  for (std::size_t sum = 0; sum <= slots * (kinds - 1) && !stop; ++sum) {
    tuples_with_sum(slots, kinds, sum, cur, visit, stop);
  }
  if (!r.package) r.note = "no witness within budget after " + std::to_string(r.candidates) + " candidates";
  return r;
}

}  // namespace liftsl

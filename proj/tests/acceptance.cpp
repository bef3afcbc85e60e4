// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "liftsl/hoare.hpp"
#include "liftsl/lifting.hpp"
#include "liftsl/normalize.hpp"
#include "liftsl/parametricity.hpp"
#include "liftsl/scenario.hpp"
#include "oracle_assert.hpp"

using namespace liftsl;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Collects failed expectations; the first few go into the detail line.
struct Tally {
  std::size_t checks = 0;
  std::vector<std::string> failures;

  void expect(bool cond, const std::string& what) {
    ++checks;
    if (!cond) failures.push_back(what);
  }
  Outcome outcome(const std::string& summary) const {
    if (failures.empty()) return {true, summary + " (" + std::to_string(checks) + " checks)"};
    std::string d = std::to_string(failures.size()) + " of " + std::to_string(checks) + " checks failed: ";
    for (std::size_t i = 0; i < failures.size() && i < 3; ++i) d += (i ? "; " : "") + failures[i];
    return {false, d};
  }
};

const std::set<std::string> kAvars{"a", "b", "c"};
Assertion P(const std::string& s) { return parse_assertion(s, kAvars); }
ImplicationForm form(const std::string& l, const std::string& r) { return as_implication_form(P(l), P(r)); }

LayoutGraph counts(std::vector<std::vector<int>> pi, std::vector<std::vector<int>> omega) {
  std::vector<std::string> vs;
  for (std::size_t v = 0; v < pi[0].size(); ++v) vs.push_back(std::string(1, static_cast<char>('a' + v)));
  return layout_from_counts(vs, std::move(pi), std::move(omega));
}

// Membership of a binary witness decided by explicit sets, independently of
// the generator algebra.
bool oracle_member(const Assertion& a, const AssertEnv& rho, const HeapTuple& w, const ValueDomain& dom) {
  const oracle::Universe u{2, dom.loc_bound, dom.values, static_cast<std::size_t>(dom.loc_bound)};
  oracle::SetEnv sets;
  for (const auto& [name, r] : rho.rels) sets[name] = oracle::closure(r, u);
  return oracle::denote(a, {}, sets, u, dom).count(w) > 0;
}

Outcome check_package(const ImplicationForm& f, const AssertEnv& rho_expected, const HeapTuple& witness_expected) {
  Tally t;
  const LayoutGraph g = compute_layout(f);
  t.expect(lift_check(g).label() == "NoGuarantee", "verdict is " + lift_check(g).label());
  const WitnessSearchReport r = witness_search(g, &f);
  t.expect(r.package.has_value(), "no package");
  if (!r.package) return t.outcome("");
  const CounterexamplePackage& p = *r.package;
  for (const auto& [name, rel] : rho_expected.rels)
    t.expect(equivalent(p.binary_rho.at(name), rel), "rho(" + name + ") = " + to_string(p.binary_rho.at(name)));
  t.expect(p.witness == witness_expected, "witness " + to_string(p.witness));
  const RecheckResult rc = recheck(p);
  t.expect(rc.witness_in_lhs, "witness not in LHS on recheck");
  t.expect(!rc.witness_in_rhs, "witness in RHS on recheck");
  t.expect(rc.unary_clear, "bounded unary search found a counterexample");
  t.expect(p.unary_budget.max_locs <= 3 && p.unary_budget.values == std::vector<Val>{0}, "unary budget");
  const ValueDomain dom{{0}, 3};
  t.expect(oracle_member(lhs_assertion(f), rho_expected, witness_expected, dom), "oracle: witness not in LHS");
  t.expect(!oracle_member(rhs_assertion(f), rho_expected, witness_expected, dom), "oracle: witness in RHS");
  return t.outcome("rho " + to_string(p.binary_rho) + ", witness " + to_string(p.witness) + ", " +
                   std::to_string(p.unary_candidates) + " unary environments clear");
}

Outcome fan() {
  AssertEnv rho{2, {}};
  rho.set("a", parse_relation("{([1],[])}", 2));
  rho.set("b", parse_relation("{([],[1])}", 2));
  return check_package(form("1|->_ /\\ a*b", "1|->_*a \\/ 1|->_*b"), rho, {parse_heap("[1]"), parse_heap("[1]")});
}

Outcome bridge() {
  AssertEnv rho{2, {}};
  rho.set("a", parse_relation("{([1],[]), ([2],[2])}", 2));
  rho.set("b", GenRel::top(2));
  return check_package(form("-*a*b /\\ a*a", "-*a*a \\/ -*-*b"), rho, {parse_heap("[1,2]"), parse_heap("[2]")});
}

Outcome reference_layouts() {
  Tally t;
  auto label = [](const ImplicationForm& f) { return lift_check(f).label(); };
  const std::vector<std::pair<ImplicationForm, std::string>> cases{
      {form("a*b /\\ a*b*b", "a*b*b \\/ b*b"), "Lifts(Shadow)"},
      {form("a /\\ a*b", "a*b \\/ true"), "Lifts(Balloon({b}))"},
      {form("a*a*b*b", "a*b \\/ true"), "Lifts(Lonely)"},
      {form("1|->_ /\\ a*b", "1|->_*a \\/ 1|->_*b"), "NoGuarantee"},
      {form("-*a*b /\\ a*a", "-*a*a \\/ -*-*b"), "NoGuarantee"},
  };
  std::string got;
  for (const auto& [f, want] : cases) {
    const std::string l = label(f);
    t.expect(l == want, to_string(f) + " gave " + l);
    got += (got.empty() ? "" : ", ") + l;
  }
  return t.outcome(got);
}

Outcome consequence_gate() {
  Tally t;
  const ChkReport good = chk(P("1|->_ /\\ a*b"), P("1|->_"));
  const ChkReport bad = chk(P("1|->_ /\\ a*b"), P("1|->_*a \\/ 1|->_*b"));
  t.expect(good.ok, "good side rejected: " + good.headline());
  t.expect(!bad.ok, "bad side accepted");
  return t.outcome("good: " + good.headline() + "; bad: " + bad.headline());
}

Outcome counter_module() {
  Tally t;
  const Scenario s = parse_scenario(builtin_scenario_text("counter"));
  const ProofVerdict v = prove_scenario(s);
  t.expect(v.accepted, "proof: " + v.summary());
  t.expect(s.input_vals == std::vector<Val>{-2, -1, 0, 1, 2}, "input values");
  t.expect(s.locs == 3, "frame locations");
  const ValidityReport r = scenario_validity(s);
  t.expect(!r.violated, "violation: " + r.summary(s.context));
  t.expect(r.frames_checked > 0, "no frames checked");
  const ModuleImpl u1 = module_from_commands(s.impl1), u2 = module_from_commands(s.impl2);
  for (Val x = -2; x <= 2; ++x) {
    const Heap in = Heap::cell(1, x);
    const auto o1 = exec(*s.client, s.env, u1, in), o2 = exec(*s.client, s.env, u2, in);
    t.expect(o1 && o2 && o1->at(1) == o2->at(1), "cell 1 differs from input " + std::to_string(x));
  }
  const DemoResult d = demo("counter");
  t.expect(d.ok, "demo checklist");
  return t.outcome(v.summary() + "; " + r.summary(s.context));
}

Outcome distinguishing_client() {
  Tally t;
  const Scenario s = parse_scenario(builtin_scenario_text("goodbad-right"));
  const ProofVerdict v = prove_scenario(s);
  t.expect(!v.accepted, "right proof accepted");
  t.expect(v.rule == Derivation::Rule::Consequence, "rejected at another rule: " + v.summary());
  const ValidityReport r = scenario_validity(s);
  t.expect(r.violated, "no violation");
  if (r.violation) {
    t.expect(r.violation->out_f == std::optional<Heap>(parse_heap("[1:1]")), "first output");
    t.expect(r.violation->out_g == std::optional<Heap>(parse_heap("[1:2]")), "second output");
  }
  t.expect(demo("goodbad").ok, "demo checklist");
  const std::string outs = r.violation && r.violation->out_f && r.violation->out_g
                               ? to_string(*r.violation->out_f) + " vs " + to_string(*r.violation->out_g)
                               : "none";
  return t.outcome(v.summary() + "; outputs " + outs);
}

Outcome arity_scaling() {
  Tally t;
  const Assertion lhs = P("1|->_ /\\ a*a*b"), rhs = P("1|->_*a \\/ 1|->_*b");
  const SearchBudget budget{3, {0}, 3, 1, 1};
  const ValueDomain dom{{0}, 3};
  const SearchReport two = find_counter_env(lhs, rhs, {}, 2, budget, dom);
  const SearchReport three = find_counter_env(lhs, rhs, {}, 3, budget, dom);
  t.expect(!two.found, "counterexample at arity 2");
  t.expect(three.found.has_value(), "none at arity 3");
  if (three.found) {
    t.expect(member(interpret(lhs, {}, three.found->rho, dom), three.found->witness), "arity-3 witness not in LHS");
    t.expect(!member(interpret(rhs, {}, three.found->rho, dom), three.found->witness), "arity-3 witness in RHS");
  }
  const PcVerdict pc = pc_check(as_implication_form(lhs, rhs), {}, SearchBudget{3, {0}, 1, 3, 1}, dom);
  t.expect(!pc.holds, "parametricity condition holds");
  return t.outcome("arity 2: none in " + std::to_string(two.candidates) + " environments; arity 3: found after " +
                   std::to_string(three.candidates) + "; parametricity condition fails");
}

Outcome diagonal_laws() {
  Tally t;
  std::mt19937 rng(20240);
  const oracle::Universe u1{1, 3, {0, 1}, 2};
  for (int round = 0; round < 200; ++round) {
    const int n = 2 + round % 2;
    const oracle::Universe un{n, 3, {0, 1}, 2};
    const GenRel p = oracle::random_rel(rng, 1, 3, u1);
    const GenRel q = oracle::random_rel(rng, 1, 3, u1);
    const std::string tag = "instance " + std::to_string(round);
    const GenRel dm = delta(n, meet(p, q)), du = delta(n, rel_union(p, q)), ds = delta(n, star(p, q));
    t.expect(included(dm, meet(delta(n, p), delta(n, q))) && included(meet(delta(n, p), delta(n, q)), dm),
             tag + " meet");
    t.expect(included(du, rel_union(delta(n, p), delta(n, q))) && included(rel_union(delta(n, p), delta(n, q)), du),
             tag + " union");
    t.expect(included(ds, star(delta(n, p), delta(n, q))) && included(star(delta(n, p), delta(n, q)), ds),
             tag + " star");
    if (round % 4 == 0) {
      const auto cp = oracle::closure(p, u1), cq = oracle::closure(q, u1);
      t.expect(oracle::closure(dm, un) == oracle::diagonal(oracle::set_meet(cp, cq), un), tag + " oracle meet");
      t.expect(oracle::closure(ds, un) == oracle::diagonal(oracle::set_star(cp, cq, u1), un), tag + " oracle star");
    }
  }
  const ValueDomain dom{{0, 1}, 2};
  const VarEnv eta{{"y", 1}};
  for (int round = 0; round < 100; ++round) {
    const int n = 2 + round % 2;
    const oracle::Universe small1{1, 2, {0, 1}, 2};
    const oracle::Universe smalln{n, 2, {0, 1}, 1};
    const Assertion phi = oracle::random_assertion(rng, 3, {"a", "b"});
    AssertEnv unary{1, {}}, nary{n, {}};
    oracle::SetEnv sets;
    for (const char* v : {"a", "b"}) {
      const GenRel r = oracle::random_rel(rng, 1, 2, small1);
      unary.set(v, r);
      nary.set(v, delta(n, r));
      sets[v] = oracle::closure(r, small1);
    }
    const GenRel lifted = interpret(phi, eta, nary, dom);
    const GenRel diag = delta(n, interpret(phi, eta, unary, dom));
    const std::string tag = "formula " + std::to_string(round) + " " + pretty(phi);
    t.expect(included(lifted, diag) && included(diag, lifted), tag);
    t.expect(oracle::closure(lifted, smalln) == oracle::diagonal(oracle::denote(phi, eta, sets, small1, dom), smalln),
             tag + " oracle");
  }
  return t.outcome("200 relation pairs at arity 2 and 3, 100 formulas under diagonal environments");
}

Outcome segregation() {
  Tally t;
  for (int rows = 1; rows <= 4; ++rows) {
    for (int cols = 1; cols <= 4; ++cols) {
      const std::string tag = std::to_string(rows) + "x" + std::to_string(cols);
      const SegregatingSets s = segregating_sets(rows, cols);
      t.expect(s.size() == static_cast<std::size_t>(rows), tag + " rows");
      std::vector<std::set<Loc>> unions;
      for (int i = 0; i < rows; ++i) {
        t.expect(s[i].size() == static_cast<std::size_t>(cols), tag + " cols");
        std::set<Loc> u;
        for (int j = 0; j < cols; ++j) {
          t.expect(!s[i][j].empty(), tag + " empty cell");
          for (int k = j + 1; k < cols; ++k) {
            std::set<Loc> a(s[i][j].begin(), s[i][j].end());
            bool meets = false;
            for (Loc l : s[i][k]) meets = meets || a.count(l);
            t.expect(!meets, tag + " cells in one row overlap");
          }
          u.insert(s[i][j].begin(), s[i][j].end());
        }
        unions.push_back(u);
      }
      for (int i = 1; i < rows; ++i) t.expect(unions[i] == unions[0], tag + " row unions differ");
      for (int i1 = 0; i1 < rows; ++i1)
        for (int i2 = 0; i2 < rows; ++i2) {
          if (i1 == i2) continue;
          for (int j1 = 0; j1 < cols; ++j1)
            for (int j2 = 0; j2 < cols; ++j2) {
              std::set<Loc> a(s[i1][j1].begin(), s[i1][j1].end());
              bool meets = false;
              for (Loc l : s[i2][j2]) meets = meets || a.count(l);
              t.expect(meets, tag + " cells of distinct rows are disjoint");
            }
        }
    }
  }
  return t.outcome("all 16 shapes up to 4x4");
}

struct SuiteEntry {
  const char* what;
  LayoutGraph g;
  const char* verdict;
};

std::vector<SuiteEntry> curated_suite() {
  return {
      {"shadow reference", counts({{1, 1}, {1, 2}}, {{1, 2}, {0, 2}}), "Lifts(Shadow)"},
      {"balloon reference", counts({{1, 0}, {1, 1}}, {{1, 1}, {0, 0}}), "Lifts(Balloon({b}))"},
      {"single conjunct, all solid, empty disjunct", counts({{2, 2}}, {{1, 1}, {0, 0}}), "Lifts(Lonely)"},
      {"single conjunct, repeated variable", counts({{2, 0}}, {{1, 0}}), "Lifts(Lonely)"},
      {"single conjunct, exact match", counts({{1, 0}}, {{1, 0}}), "Lifts(Shadow)"},
      {"variable-free conjunct beside an empty disjunct", counts({{0, 0}, {1, 1}}, {{0, 0}}), "Lifts(Balloon({}))"},
      {"one variable per conjunct and disjunct", counts({{1, 0}, {0, 1}}, {{1, 0}, {0, 1}}), "Lifts(Shadow)"},
      {"three variables, one each", counts({{1, 1, 0}, {0, 0, 1}}, {{1, 0, 0}, {0, 0, 1}}), "Lifts(Shadow)"},
      {"no variables at all", counts({{0, 0}, {0, 0}}, {{0, 0}}), "Lifts(Balloon({}))"},
      {"fan", counts({{0, 0}, {1, 1}}, {{1, 0}, {0, 1}}), "NoGuarantee"},
      {"bridge", counts({{1, 1}, {2, 0}}, {{2, 0}, {0, 1}}), "NoGuarantee"},
      {"single conjunct, dashed by a repeat, empty disjunct", counts({{1}}, {{2}, {0}}), "NoGuarantee"},
      {"single conjunct, dashed, with an empty disjunct", counts({{1, 1}}, {{2, 0}, {0, 0}}), "NoGuarantee"},
      {"repeats in a conjunct, empty disjunct", counts({{2, 1}, {1, 0}}, {{1, 0}, {0, 0}}), "NoGuarantee"},
      {"all solid, three occurrences in a conjunct", counts({{2, 1}, {2, 0}}, {{1, 0}}), "NoGuarantee"},
      {"fan with a doubled variable", counts({{0, 0}, {2, 1}}, {{1, 0}, {0, 1}}), "NoGuarantee"},
      {"all solid, four occurrences", counts({{2, 2}, {1, 2}}, {{1, 1}, {1, 2}}), "NoGuarantee"},
      {"dashed line whose label is also solid", counts({{1, 2}, {0, 2}}, {{0, 2}, {1, 2}}), "NoGuarantee"},
      {"three-way fan", counts({{0, 0, 0}, {1, 1, 1}}, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}), "NoGuarantee"},
      {"empty disjunct next to a dashed repeat", counts({{1, 0}, {1, 1}}, {{2, 0}, {0, 0}}), "NoGuarantee"},
      {"three conjuncts", counts({{1, 0}, {0, 1}, {1, 1}}, {{2, 0}, {0, 1}}), "NoGuarantee"},
      {"single conjunct, doubled pair, empty disjunct", counts({{2, 2}}, {{2, 2}, {1, 2}, {0, 0}}), "Lifts(Lonely)"},
  };
}

// Concrete instances of a lifting layout: template bases whose bounded
// unary search is clear.
std::vector<ImplicationForm> clear_instances(const LayoutGraph& g, std::size_t want) {
  const auto templates = witness_templates();
  std::vector<ImplicationForm> out;
  const std::size_t slots = g.conjuncts() + g.disjuncts();
  const std::size_t k = 4;  // true, 1|->_, 2|->_, -
  std::size_t total = 1;
  for (std::size_t s = 0; s < slots; ++s) total *= k;
  const SearchBudget unary{};
  for (std::size_t code = 0; code < total && out.size() < want; code += 7) {
    ImplicationForm f = implication_with_layout(g);
    std::size_t c = code;
    for (auto& cj : f.lhs) cj.base = templates[c % k], c /= k;
    for (auto& dj : f.rhs) dj.base = templates[c % k], c /= k;
    if (!find_counter_env(lhs_assertion(f), rhs_assertion(f), {}, 1, unary, {}).found) out.push_back(f);
  }
  return out;
}

Outcome curated() {
  Tally t;
  std::size_t lifts = 0, refuted = 0, instances = 0;
  for (const SuiteEntry& e : curated_suite()) {
    const std::string tag = std::string(e.what) + " [" + describe(e.g) + "]";
    t.expect(right_only_variables(e.g).empty(), tag + " is outside the implication form");
    const LiftVerdict v = lift_check(e.g);
    t.expect(v.label() == e.verdict, tag + " gave " + v.label());
    if (v.lifts) {
      ++lifts;
      const auto inst = clear_instances(e.g, 2);
      t.expect(!inst.empty(), tag + " has no unary-clear instance");
      for (const auto& f : inst) {
        ++instances;
        const auto r = find_counter_env(lhs_assertion(f), rhs_assertion(f), {}, 2, SearchBudget{}, {});
        t.expect(!r.found, tag + " binary counterexample for " + to_string(f));
      }
    } else {
      const auto r = witness_search(e.g);
      const bool ok = r.package && recheck(*r.package).ok();
      t.expect(ok, tag + " without a rechecked witness: " + r.note);
      refuted += ok;
    }
  }
  return t.outcome(std::to_string(curated_suite().size()) + " layouts: " + std::to_string(lifts) + " lift with " +
                   std::to_string(instances) + " instances clear at arity 2, " + std::to_string(refuted) +
                   " NoGuarantee with a rechecked witness");
}

Outcome reduction_equivalence() {
  Tally t;
  std::mt19937 rng(4242);
  const ValueDomain dom{{0}, 2};
  std::size_t families = 0;
  for (int round = 0; round < 50; ++round) {
    const int n = 1 + round % 2;
    const SimpleAssertion l = oracle::random_simple(rng, {"a", "b"});
    const SimpleAssertion r = oracle::random_simple(rng, {"a", "b"});
    const auto fam = reduce_implication(l, r);
    families += fam.size();
    // Variables dropped by some split are sampled empty: the per-environment
    // equality needs it, validity over all environments does not.
    std::set<std::string> dropped;
    for (const auto& d : l.disjuncts) {
      std::set<std::string> here;
      for (const auto& c : d) here.insert(c.vars.begin(), c.vars.end());
      for (const auto& rd : r.disjuncts)
        for (const auto& c : rd)
          for (const auto& v : c.vars)
            if (!here.count(v)) dropped.insert(v);
    }
    const oracle::Universe u{n, 2, {0}, 2};
    AssertEnv rho{n, {}};
    oracle::SetEnv sets;
    for (const char* v : {"a", "b"}) {
      const GenRel rel = dropped.count(v) ? GenRel::empty(n) : oracle::random_rel(rng, n, 2, u);
      rho.set(v, rel);
      sets[v] = oracle::closure(rel, u);
    }
    const Assertion whole_l = to_assertion(l), whole_r = to_assertion(r);
    const bool whole = oracle::subset(oracle::denote(whole_l, {}, sets, u, dom), oracle::denote(whole_r, {}, sets, u, dom));
    bool parts = true;
    for (const auto& f : fam) parts = parts && env_valid(lhs_assertion(f), rhs_assertion(f), {}, rho, dom);
    t.expect(whole == parts, to_string(l) + " |= " + to_string(r) + " at arity " + std::to_string(n));
    t.expect(whole == env_valid(whole_l, whole_r, {}, rho, dom), "oracle and library disagree on " + to_string(l));
  }
  return t.outcome("50 pairs, " + std::to_string(families) + " reduced implications");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"fan counterexample package", fan},
      {"bridge counterexample package", bridge},
      {"criteria on the reference layouts", reference_layouts},
      {"consequence gate on the good and bad clients", consequence_gate},
      {"counter module: proof and relational validity", counter_module},
      {"distinguishing client: rejected proof and diverging outputs", distinguishing_client},
      {"arity scaling: binary clear, ternary refuted", arity_scaling},
      {"diagonal embedding laws", diagonal_laws},
      {"segregating sets", segregation},
      {"curated layout suite: soundness and completeness", curated},
      {"implication reduction preserves validity", reduction_equivalence},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream time;
    time.precision(2);
    time << std::fixed << secs;
    std::cout << (o.ok ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << ": " << o.detail << " ["
              << time.str() << " s]" << std::endl;
    failed += !o.ok;
  }
  return failed ? 1 : 0;
}

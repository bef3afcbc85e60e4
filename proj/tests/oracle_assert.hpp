#pragma once

// Explicit-set interpretation of assertions over a bounded universe, built
// on the brute-force relation operations in oracle.hpp.

#include <functional>
#include <map>
#include <random>
#include <string>

#include "liftsl/assertion.hpp"
#include "liftsl/normalize.hpp"
#include "liftsl/semantics.hpp"
#include "oracle.hpp"

namespace oracle {

using liftsl::Assertion;
using liftsl::Node;
using liftsl::Prim;
using liftsl::ValueDomain;
using liftsl::VarEnv;

using SetEnv = std::map<std::string, TupleSet>;

inline TupleSet filter(const Universe& u, const std::function<bool(const HeapTuple&)>& keep) {
  TupleSet out;
  for (const auto& t : all_tuples(u))
    if (keep(t)) out.insert(t);
  return out;
}

inline bool has_cell(const Heap& h, Loc l, Val v) { return h.contains(l) && h.at(l) == v; }

inline TupleSet denote(const Assertion& a, const VarEnv& eta, const SetEnv& rho, const Universe& u,
                       const ValueDomain& dom) {
  switch (a->kind) {
    case Node::Kind::True: return filter(u, [](const HeapTuple&) { return true; });
    case Node::Kind::False: return {};
    case Node::Kind::AVar: return rho.at(a->name);
    case Node::Kind::Star: return set_star(denote(a->lhs, eta, rho, u, dom), denote(a->rhs, eta, rho, u, dom), u);
    case Node::Kind::And: return set_meet(denote(a->lhs, eta, rho, u, dom), denote(a->rhs, eta, rho, u, dom));
    case Node::Kind::Or: return set_union(denote(a->lhs, eta, rho, u, dom), denote(a->rhs, eta, rho, u, dom));
    case Node::Kind::Exists:
    case Node::Kind::Forall: {
      const bool ex = a->kind == Node::Kind::Exists;
      TupleSet acc = ex ? TupleSet{} : filter(u, [](const HeapTuple&) { return true; });
      for (Val v : dom.values) {
        VarEnv inner = eta;
        inner[a->name] = v;
        const TupleSet s = denote(a->lhs, inner, rho, u, dom);
        acc = ex ? set_union(acc, s) : set_meet(acc, s);
      }
      return acc;
    }
    case Node::Kind::Prim: break;
  }
  const Prim& p = a->prim;
  switch (p.kind) {
    case Prim::Kind::PointsTo: {
      const Loc l = liftsl::eval(*p.lhs, eta);
      const Val v = liftsl::eval(*p.rhs, eta);
      if (l <= 0) return {};
      return filter(u, [&](const HeapTuple& t) {
        for (const auto& h : t)
          if (!has_cell(h, l, v)) return false;
        return true;
      });
    }
    case Prim::Kind::NonEmpty:
      return filter(u, [&](const HeapTuple& t) {
        for (Loc l = 1; l <= dom.loc_bound; ++l) {
          for (Val v : dom.values) {
            bool all = true;
            for (const auto& h : t) all = all && has_cell(h, l, v);
            if (all) return true;
          }
        }
        return false;
      });
    case Prim::Kind::Compare: {
      const bool holds = liftsl::compare(p.op, liftsl::eval(*p.lhs, eta), liftsl::eval(*p.rhs, eta));
      return holds ? filter(u, [](const HeapTuple&) { return true; }) : TupleSet{};
    }
  }
  return {};
}

/// Tuples of the universe lying above some diagonal (h, ..., h), h ∈ unary.
inline TupleSet diagonal(const TupleSet& unary, const Universe& u) {
  return filter(u, [&](const HeapTuple& t) {
    for (const auto& h : unary) {
      bool all = true;
      for (const auto& c : t) all = all && sub_heap(h[0], c);
      if (all) return true;
    }
    return false;
  });
}

/// Random assertion over small locations and values, using the assertion
/// variables `avars`, the free variable y and the binder x.
inline Assertion random_assertion(std::mt19937& rng, int depth, const std::vector<std::string>& avars,
                                  bool quantifiers = true) {
  using namespace liftsl;
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 5 : (quantifiers ? 11 : 9));
  auto small = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto loc = [&]() -> ExprPtr {
    switch (small(0, 3)) {
      case 0: return add(var("y"), lit(1));
      case 1: return lit(small(0, 2));
      default: return lit(small(1, 2));
    }
  };
  auto value = [&]() -> ExprPtr { return small(0, 3) == 0 ? var("y") : lit(small(0, 1)); };
  switch (pick(rng)) {
    case 0: return mk_points_to(loc(), value());
    case 1: return mk_nonempty();
    case 2:
    case 3:
      if (!avars.empty()) return mk_avar(avars[static_cast<std::size_t>(small(0, static_cast<int>(avars.size()) - 1))]);
      return small(0, 1) ? mk_true() : mk_false();
    case 4: return small(0, 2) ? mk_true() : mk_compare(CmpOp::Lt, var("y"), lit(small(-1, 1)));
    case 5: return mk_points_to_any(loc(), "_w");
    case 6:
    case 7: return mk_star(random_assertion(rng, depth - 1, avars, quantifiers), random_assertion(rng, depth - 1, avars, quantifiers));
    case 8: return mk_and(random_assertion(rng, depth - 1, avars, quantifiers), random_assertion(rng, depth - 1, avars, quantifiers));
    case 9: return mk_or(random_assertion(rng, depth - 1, avars, quantifiers), random_assertion(rng, depth - 1, avars, quantifiers));
    case 10: return mk_exists("x", mk_points_to(lit(small(1, 2)), var("x")));
    default: return mk_exists("x", random_assertion(rng, depth - 1, avars, quantifiers));
  }
}

}  // namespace oracle

namespace oracle {

/// Random simple assertion: up to two disjuncts of up to two conjuncts, each
/// a small variable-free base starred with up to two variables from `avars`.
inline liftsl::SimpleAssertion random_simple(std::mt19937& rng, const std::vector<std::string>& avars) {
  using namespace liftsl;
  auto small = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const std::vector<Assertion> bases{mk_true(), mk_points_to_any(lit(1)), mk_nonempty(),
                                     mk_points_to(lit(2), lit(0)), mk_or(mk_points_to(lit(1), lit(0)), mk_points_to(lit(2), lit(0)))};
  SimpleAssertion s;
  const int disjuncts = small(1, 2);
  for (int d = 0; d < disjuncts; ++d) {
    std::vector<Conjunct> conj;
    const int m = small(1, 2);
    for (int i = 0; i < m; ++i) {
      std::vector<std::string> vs;
      const int k = small(0, 2);
      for (int j = 0; j < k; ++j) vs.push_back(avars[static_cast<std::size_t>(small(0, static_cast<int>(avars.size()) - 1))]);
      conj.push_back(make_conjunct(bases[static_cast<std::size_t>(small(0, static_cast<int>(bases.size()) - 1))], vs));
    }
    s.disjuncts.push_back(std::move(conj));
  }
  return s;
}

}  // namespace oracle

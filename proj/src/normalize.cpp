#include "liftsl/normalize.hpp"

#include <algorithm>
#include <set>

#include "liftsl/error.hpp"

namespace liftsl {

Conjunct make_conjunct(Assertion base, std::vector<std::string> vars) {
  std::sort(vars.begin(), vars.end());
  if (has_avars(base)) throw ShapeError("conjunct base must not contain assertion variables");
  return Conjunct{std::move(base), std::move(vars)};
}

Assertion to_assertion(const Conjunct& c) {
  std::vector<Assertion> parts;
  if (c.base->kind != Node::Kind::True || c.vars.empty()) parts.push_back(c.base);
  for (const auto& v : c.vars) parts.push_back(mk_avar(v));
  return fold_star(parts, mk_true());
}

namespace {

Assertion conjunction(const std::vector<Conjunct>& cs) {
  std::vector<Assertion> parts;
  for (const auto& c : cs) parts.push_back(to_assertion(c));
  return fold_and(parts, mk_true());
}

}  // namespace

Assertion to_assertion(const SimpleAssertion& s) {
  std::vector<Assertion> parts;
  for (const auto& d : s.disjuncts) parts.push_back(conjunction(d));
  return fold_or(parts, mk_false());
}

Assertion lhs_assertion(const ImplicationForm& f) { return conjunction(f.lhs); }

Assertion rhs_assertion(const ImplicationForm& f) {
  std::vector<Assertion> parts;
  for (const auto& c : f.rhs) parts.push_back(to_assertion(c));
  return fold_or(parts, mk_false());
}

std::string to_string(const Conjunct& c) { return pretty(to_assertion(c)); }
std::string to_string(const SimpleAssertion& s) { return pretty(to_assertion(s)); }

std::string to_string(const ImplicationForm& f) {
  return pretty(lhs_assertion(f)) + " |= " + pretty(rhs_assertion(f));
}

namespace {

using Disjunct = std::vector<Conjunct>;
using Dnf = std::vector<Disjunct>;

bool is_true(const Assertion& a) { return a->kind == Node::Kind::True; }

bool var_free(const Conjunct& c) { return c.vars.empty(); }

Assertion star_base(const Assertion& a, const Assertion& b) {
  if (is_true(a)) return b;
  if (is_true(b)) return a;
  return mk_star(a, b);
}

std::vector<std::string> concat_vars(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  return out;
}

// A disjunct viewed as one conjunct: either it has exactly one, or all of
// its conjuncts are variable-free and fold into one base with ∧.
std::optional<Conjunct> collapse(const Disjunct& d) {
  if (d.size() == 1) return d.front();
  if (!std::all_of(d.begin(), d.end(), var_free)) return std::nullopt;
  std::vector<Assertion> bases;
  for (const auto& c : d) bases.push_back(c.base);
  return Conjunct{fold_and(bases, mk_true()), {}};
}

bool is_unit(const Disjunct& d) { return d.size() == 1 && is_true(d[0].base) && d[0].vars.empty(); }

class Simplifier {
 public:
  explicit Simplifier(std::size_t limit) : limit_(limit) {}

  std::optional<Dnf> run(const Assertion& a) {
    if (!has_avars(a)) return Dnf{{Conjunct{a, {}}}};
    switch (a->kind) {
      case Node::Kind::AVar:
        return Dnf{{Conjunct{mk_true(), {a->name}}}};
      case Node::Kind::Or: {
        auto l = run(a->lhs);
        auto r = run(a->rhs);
        if (!l || !r) return std::nullopt;
        l->insert(l->end(), r->begin(), r->end());
        return check(std::move(*l));
      }
      case Node::Kind::And: {
        auto l = run(a->lhs);
        auto r = run(a->rhs);
        if (!l || !r) return std::nullopt;
        Dnf out;
        for (const auto& x : *l) {
          for (const auto& y : *r) {
            Disjunct d = x;
            d.insert(d.end(), y.begin(), y.end());
            out.push_back(std::move(d));
          }
        }
        return check(std::move(out));
      }
      case Node::Kind::Star: {
        auto l = run(a->lhs);
        auto r = run(a->rhs);
        if (!l || !r) return std::nullopt;
        Dnf out;
        for (const auto& x : *l) {
          for (const auto& y : *r) {
            auto d = star(x, y);
            if (!d) return std::nullopt;
            out.push_back(std::move(*d));
          }
        }
        return check(std::move(out));
      }
      case Node::Kind::Exists:
        return exists(a->name, a->lhs);
      case Node::Kind::Forall:
        // ∀ only commutes with the shapes above when it binds nothing.
        if (!free_in(a->name, a->lhs)) return run(a->lhs);
        return std::nullopt;
      default:
        return Dnf{{Conjunct{a, {}}}};
    }
  }

 private:
  std::optional<Dnf> check(Dnf d) {
    std::size_t n = 0;
    for (const auto& x : d) n += x.size();
    if (n > limit_) return std::nullopt;
    return d;
  }

  static std::optional<Disjunct> star(const Disjunct& x, const Disjunct& y) {
    if (is_unit(x)) return y;
    if (is_unit(y)) return x;
    auto cx = collapse(x);
    auto cy = collapse(y);
    if (!cx || !cy) return std::nullopt;
    return Disjunct{Conjunct{star_base(cx->base, cy->base), concat_vars(cx->vars, cy->vars)}};
  }

  std::optional<Dnf> exists(const std::string& x, const Assertion& body) {
    auto inner = run(body);
    if (!inner) return std::nullopt;
    Dnf out;
    for (auto& d : *inner) {
      std::vector<std::size_t> binding;
      for (std::size_t k = 0; k < d.size(); ++k) {
        if (free_in(x, d[k].base)) binding.push_back(k);
      }
      if (binding.empty()) {
        out.push_back(std::move(d));
      } else if (binding.size() == 1) {
        d[binding[0]].base = mk_exists(x, d[binding[0]].base);
        out.push_back(std::move(d));
      } else if (auto c = collapse(d)) {
        out.push_back(Disjunct{Conjunct{mk_exists(x, c->base), c->vars}});
      } else {
        return std::nullopt;
      }
    }
    return check(std::move(out));
  }

  std::size_t limit_;
};

std::set<std::string> vars_of(const Disjunct& d) {
  std::set<std::string> out;
  for (const auto& c : d) out.insert(c.vars.begin(), c.vars.end());
  return out;
}

}  // namespace

std::optional<SimpleAssertion> to_simple(const Assertion& phi, std::size_t max_conjuncts) {
  Simplifier s(max_conjuncts);
  auto dnf = s.run(phi);
  if (!dnf) return std::nullopt;
  return SimpleAssertion{std::move(*dnf)};
}

std::vector<ImplicationForm> reduce_implication(const SimpleAssertion& lhs, const SimpleAssertion& rhs,
                                                std::size_t max_forms) {
  // Clauses of the right side's CNF: one conjunct chosen from each disjunct.
  std::vector<std::vector<Conjunct>> clauses;
  std::size_t count = 1;
  for (const auto& d : rhs.disjuncts) {
    if (d.empty()) throw ShapeError("empty conjunction in right-hand side");
    count *= d.size();
    if (count * std::max<std::size_t>(lhs.disjuncts.size(), 1) > max_forms) {
      throw ShapeError("implication reduction exceeds " + std::to_string(max_forms) + " forms");
    }
  }
  std::vector<std::size_t> choice(rhs.disjuncts.size(), 0);
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<Conjunct> clause;
    for (std::size_t d = 0; d < rhs.disjuncts.size(); ++d) clause.push_back(rhs.disjuncts[d][choice[d]]);
    clauses.push_back(std::move(clause));
    for (std::size_t d = rhs.disjuncts.size(); d-- > 0;) {
      if (++choice[d] < rhs.disjuncts[d].size()) break;
      choice[d] = 0;
    }
  }

  std::vector<ImplicationForm> out;
  for (const auto& left : lhs.disjuncts) {
    const auto available = vars_of(left);
    for (const auto& clause : clauses) {
      ImplicationForm f;
      f.lhs = left;
      for (const auto& c : clause) {
        const bool keep = std::all_of(c.vars.begin(), c.vars.end(),
                                      [&](const std::string& v) { return available.count(v) > 0; });
        if (keep) f.rhs.push_back(c);
      }
      if (f.rhs.empty()) f.rhs.push_back(Conjunct{mk_false(), {}});
      out.push_back(std::move(f));
    }
  }
  return out;
}

ImplicationForm as_implication_form(const Assertion& lhs, const Assertion& rhs) {
  auto l = to_simple(lhs);
  auto r = to_simple(rhs);
  if (!l || !r) throw ShapeError("implication is not simple");
  if (l->disjuncts.size() != 1) throw ShapeError("left-hand side must be a conjunction of conjuncts");
  ImplicationForm f;
  f.lhs = l->disjuncts.front();
  for (const auto& d : r->disjuncts) {
    auto c = collapse(d);
    if (!c) throw ShapeError("right-hand side must be a disjunction of single conjuncts");
    f.rhs.push_back(*c);
  }
  return f;
}

}  // namespace liftsl

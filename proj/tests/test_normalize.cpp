#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "liftsl/error.hpp"
#include "liftsl/normalize.hpp"
#include "liftsl/semantics.hpp"
#include "oracle_assert.hpp"

using namespace liftsl;

namespace {

const std::set<std::string> kAvars{"a", "b", "c"};
Assertion P(const char* s) { return parse_assertion(s, kAvars); }

SimpleAssertion S(const char* s) {
  auto r = to_simple(P(s));
  REQUIRE(r);
  return *r;
}

std::vector<std::string> vars(std::initializer_list<const char*> xs) { return {xs.begin(), xs.end()}; }

const ValueDomain kDom{{0, 1}, 2};

}  // namespace

TEST_CASE("conjunction splits into a variable-free part and a variable part") {
  const SimpleAssertion s = S("1|->_ /\\ a*b");
  REQUIRE(s.disjuncts.size() == 1);
  REQUIRE(s.disjuncts[0].size() == 2);
  CHECK(s.disjuncts[0][0].vars.empty());
  CHECK(pretty(s.disjuncts[0][0].base) == "1 |-> _");
  CHECK(s.disjuncts[0][1].vars == vars({"a", "b"}));
  CHECK(s.disjuncts[0][1].base->kind == Node::Kind::True);
}

TEST_CASE("star distributes over disjunction") {
  const SimpleAssertion s = S("(a \\/ 1|->0) * b");
  REQUIRE(s.disjuncts.size() == 2);
  CHECK(s.disjuncts[0][0].vars == vars({"a", "b"}));
  CHECK(s.disjuncts[1][0].vars == vars({"b"}));
  CHECK(pretty(s.disjuncts[1][0].base) == "1 |-> 0");
}

TEST_CASE("conjunction distributes over disjunction") {
  const SimpleAssertion s = S("(a \\/ b) /\\ (c \\/ 1|->0)");
  CHECK(s.disjuncts.size() == 4);
}

TEST_CASE("variable multisets are sorted") {
  CHECK(S("b * a * b").disjuncts[0][0].vars == vars({"a", "b", "b"}));
}

TEST_CASE("existentials move inward to the one base that uses them") {
  const SimpleAssertion s = S("EX x. x |-> 0 * a");
  REQUIRE(s.disjuncts.size() == 1);
  REQUIRE(s.disjuncts[0].size() == 1);
  CHECK(s.disjuncts[0][0].base->kind == Node::Kind::Exists);
  CHECK(s.disjuncts[0][0].vars == vars({"a"}));
  CHECK(to_simple(P("EX x. a * b")));
}

TEST_CASE("shapes without a simple form") {
  CHECK_FALSE(to_simple(P("a * (b /\\ c)")));
  CHECK_FALSE(to_simple(P("ALL x. x |-> 0 * a")));
  CHECK_FALSE(to_simple(P("EX x. x |-> 0 * a /\\ x |-> 0 * b")));
  CHECK_FALSE(to_simple(P("1|->0 * (b /\\ 2|->0)")));
  CHECK(to_simple(P("1|->0 * (b /\\ c)")) == std::nullopt);
  CHECK(to_simple(P("(1|->0 /\\ 2|->0) * b")));
}

TEST_CASE("the conjunct limit is respected") {
  CHECK_FALSE(to_simple(P("(a \\/ b) /\\ (a \\/ b) /\\ (a \\/ b)"), 4));
  CHECK(to_simple(P("(a \\/ b) /\\ (a \\/ b) /\\ (a \\/ b)"), 100));
}

TEST_CASE("simple forms denote the original assertion") {
  std::mt19937 rng(3);
  int simple = 0;
  for (int round = 0; round < 300; ++round) {
    const int n = 1 + round % 2;
    const Assertion phi = oracle::random_assertion(rng, 3, {"a", "b"});
    const auto s = to_simple(phi);
    if (!s) continue;
    ++simple;
    const oracle::Universe u{n, 2, {0, 1}, 2};
    AssertEnv rho{n, {}};
    for (const char* v : {"a", "b"}) rho.set(v, oracle::random_rel(rng, n, 2, u));
    const VarEnv eta{{"y", 0}};
    INFO(pretty(phi), "  ~>  ", to_string(*s));
    CHECK(equivalent(interpret(phi, eta, rho, kDom), interpret(to_assertion(*s), eta, rho, kDom)));
  }
  CHECK(simple > 150);
}

TEST_CASE("reduction: one implication per left disjunct and right clause") {
  const auto fam = reduce_implication(S("a /\\ b"), S("a \\/ b"));
  REQUIRE(fam.size() == 1);
  CHECK(to_string(fam[0]) == "a /\\ b |= a \\/ b");

  const auto two = reduce_implication(S("a \\/ b"), S("a"));
  REQUIRE(two.size() == 2);
  CHECK(to_string(two[0]) == "a |= a");
  CHECK(to_string(two[1]) == "b |= false");

  const auto cnf = reduce_implication(S("a * c"), S("(a /\\ b) \\/ c"));
  REQUIRE(cnf.size() == 2);
  CHECK(to_string(cnf[0]) == "a * c |= a \\/ c");
  CHECK(to_string(cnf[1]) == "a * c |= c");
}

TEST_CASE("the fig. 2 right-hand consequence reduces to itself") {
  const auto fam = reduce_implication(S("1|->_ /\\ a*b"), S("1|->_*a \\/ 1|->_*b"));
  REQUIRE(fam.size() == 1);
  CHECK(fam[0].lhs.size() == 2);
  CHECK(fam[0].rhs.size() == 2);
}

TEST_CASE("reduction preserves validity when dropped variables are empty") {
  std::mt19937 rng(17);
  for (int round = 0; round < 60; ++round) {
    const int n = 1 + round % 2;
    const SimpleAssertion l = oracle::random_simple(rng, {"a", "b"});
    const SimpleAssertion r = oracle::random_simple(rng, {"a", "b"});
    const auto fam = reduce_implication(l, r);
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
    for (const char* v : {"a", "b"}) rho.set(v, dropped.count(v) ? GenRel::empty(n) : oracle::random_rel(rng, n, 2, u));
    const bool whole = env_valid(to_assertion(l), to_assertion(r), {}, rho, kDom);
    bool parts = true;
    for (const auto& f : fam) parts = parts && env_valid(lhs_assertion(f), rhs_assertion(f), {}, rho, kDom);
    INFO(to_string(l), " |= ", to_string(r));
    CHECK(whole == parts);
  }
}

TEST_CASE("canonical implications are read directly") {
  const ImplicationForm f = as_implication_form(P("1|->_ /\\ a*b"), P("1|->_*a \\/ 1|->_*b"));
  CHECK(f.lhs.size() == 2);
  CHECK(f.rhs.size() == 2);
  CHECK_THROWS_AS(as_implication_form(P("a \\/ b"), P("a")), ShapeError);
}

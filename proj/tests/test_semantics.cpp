#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "liftsl/error.hpp"
#include "liftsl/semantics.hpp"
#include "oracle_assert.hpp"

using namespace liftsl;

namespace {

const std::set<std::string> kAvars{"a", "b"};
Assertion P(const char* s) { return parse_assertion(s, kAvars); }
GenRel R(const char* s, int n = 0) { return parse_relation(s, n); }

const ValueDomain kDom{{0, 1}, 2};
const VarEnv kEta{{"y", 1}};

oracle::Universe universe(int n) { return {n, 2, {0, 1}, 2}; }

}  // namespace

TEST_CASE("unary meaning of primitives") {
  const ValueDomain dom;
  CHECK(interpret_unary(P("1 |-> 0"), {}, dom) == R("{[1:0]}"));
  CHECK(interpret_unary(P("0 |-> 0"), {}, dom).is_empty());
  CHECK(interpret_unary(P("1 |-> _"), {}, dom) == R("{[1:0], [1:1]}"));
  CHECK(interpret_unary(P("true"), {}, dom).is_top());
  CHECK(interpret_unary(P("false"), {}, dom).is_empty());
  CHECK(interpret_unary(P("-"), {}, dom).generators().size() == 6);
  CHECK(interpret_unary(P("1 < 2"), {}, dom).is_top());
  CHECK(interpret_unary(P("x |-> 1"), {{"x", 2}}, dom) == R("{[2:1]}"));
  CHECK_THROWS_AS(interpret_unary(P("x |-> 1"), {}, dom), ShapeError);
}

TEST_CASE("binary meaning is diagonal on variable-free assertions") {
  const ValueDomain dom;
  AssertEnv rho{2, {}};
  CHECK(interpret(P("1 |-> 0"), {}, rho, dom) == R("{([1:0],[1:0])}"));
  CHECK(interpret(P("1|->0 * 2|->0"), {}, rho, dom) == R("{([1:0,2:0],[1:0,2:0])}"));
}

TEST_CASE("assertion variables take their relation") {
  AssertEnv rho{2, {}};
  rho.set("a", R("{([1],[])}"));
  rho.set("b", R("{([],[1])}"));
  const ValueDomain dom;
  CHECK(interpret(P("a * b"), {}, rho, dom) == R("{([1],[1])}"));
  CHECK(interpret(P("a /\\ b"), {}, rho, dom) == R("{([1],[1])}"));
  CHECK(interpret(P("a \\/ b"), {}, rho, dom).generators().size() == 2);
  CHECK_THROWS_AS(rho.set("c", GenRel::top(1)), ShapeError);
  CHECK_THROWS_AS(interpret(parse_assertion("a * c", {"a", "c"}), {}, rho, dom), ShapeError);
  CHECK_THROWS_AS((void)AssertEnv{}.at("a"), ShapeError);
}

TEST_CASE("interpretation agrees with the explicit-set oracle") {
  std::mt19937 rng(11);
  for (int round = 0; round < 120; ++round) {
    const int n = 1 + round % 2;
    const auto u = universe(n);
    const Assertion phi = oracle::random_assertion(rng, 3, {"a", "b"});
    AssertEnv rho{n, {}};
    oracle::SetEnv sets;
    for (const char* v : {"a", "b"}) {
      const GenRel r = oracle::random_rel(rng, n, 2, u);
      rho.set(v, r);
      sets[v] = oracle::closure(r, u);
    }
    INFO(pretty(phi), " under ", to_string(rho));
    CHECK(oracle::closure(interpret(phi, kEta, rho, kDom), u) == oracle::denote(phi, kEta, sets, u, kDom));
  }
}

TEST_CASE("n-ary meaning under diagonal environments is the diagonal of the unary meaning") {
  std::mt19937 rng(5);
  for (int round = 0; round < 40; ++round) {
    const int n = 2 + round % 2;
    const auto u1 = universe(1);
    const auto un = oracle::Universe{n, 2, {0, 1}, 1};
    const Assertion phi = oracle::random_assertion(rng, 3, {"a"});
    const GenRel p = oracle::random_rel(rng, 1, 2, u1);
    AssertEnv unary{1, {{"a", p}}};
    AssertEnv nary{n, {{"a", delta(n, p)}}};
    const GenRel lifted = interpret(phi, kEta, nary, kDom);
    CHECK(equivalent(lifted, delta(n, interpret(phi, kEta, unary, kDom))));
    const auto expected = oracle::diagonal(oracle::denote(phi, kEta, {{"a", oracle::closure(p, u1)}}, u1, kDom), un);
    CHECK(oracle::closure(lifted, un) == expected);
  }
}

TEST_CASE("env_valid") {
  AssertEnv rho{2, {{"a", R("{([1],[])}")}, {"b", R("{([],[1])}")}}};
  const ValueDomain dom;
  CHECK(env_valid(P("a * b"), P("a"), {}, rho, dom));
  CHECK_FALSE(env_valid(P("1|->_ /\\ a*b"), P("1|->_*a \\/ 1|->_*b"), {}, rho, dom));
}

TEST_CASE("candidate relations come smallest first") {
  const SearchBudget b{2, {0}, 2, 1, 1};
  const auto c = candidate_relations(1, b);
  REQUIRE(c.size() >= 2);
  CHECK(c[0].is_empty());
  CHECK(c[1].is_top());
  for (const auto& r : c) CHECK(r.generators().size() <= 2);
}

TEST_CASE("counter-environment search") {
  const SearchBudget budget{2, {0}, 1, 1, 1};
  const ValueDomain dom;
  const Assertion lhs = P("1|->_ /\\ a*b");
  const Assertion rhs = P("1|->_*a \\/ 1|->_*b");
  CHECK_FALSE(find_counter_env(lhs, rhs, {}, 1, budget, dom).found);
  const auto two = find_counter_env(lhs, rhs, {}, 2, budget, dom);
  REQUIRE(two.found);
  CHECK(member(interpret(lhs, {}, two.found->rho, dom), two.found->witness));
  CHECK_FALSE(member(interpret(rhs, {}, two.found->rho, dom), two.found->witness));

  CHECK_FALSE(find_counter_env(P("a * b"), P("b * a"), {}, 2, budget, dom).found);
  CHECK(find_counter_env(P("a"), P("b"), {}, 1, budget, dom).found);
  CHECK(find_counter_env(P("true"), P("false"), {}, 1, budget, dom).found);
  CHECK_THROWS_AS(find_counter_env(lhs, rhs, {}, 0, budget, dom), std::invalid_argument);
}

TEST_CASE("search result does not depend on the thread count") {
  const ValueDomain dom;
  const Assertion lhs = P("- * a * b /\\ a * a");
  const Assertion rhs = P("- * a * a \\/ - * - * b");
  SearchBudget one{2, {0}, 2, 2, 1};
  SearchBudget four = one;
  four.threads = 4;
  const auto r1 = find_counter_env(lhs, rhs, {}, 2, one, dom);
  const auto r4 = find_counter_env(lhs, rhs, {}, 2, four, dom);
  REQUIRE(r1.found);
  REQUIRE(r4.found);
  CHECK(to_string(r1.found->rho) == to_string(r4.found->rho));
  CHECK(r1.found->witness == r4.found->witness);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "liftsl/error.hpp"
#include "liftsl/hoare.hpp"
#include "liftsl/scenario.hpp"

using namespace liftsl;

namespace {

const std::set<std::string> kAvars{"a", "b"};
Assertion P(const char* s) { return parse_assertion(s, kAvars); }
Heap H(const char* s) { return parse_heap(s); }
CommandPtr C(const char* s) { return parse_command(s); }

std::optional<Heap> run(const char* c, const char* h, const ModuleImpl& u = {}) { return exec(*C(c), {}, u, H(h)); }

Scenario builtin(const char* name) { return parse_scenario(builtin_scenario_text(name)); }

}  // namespace

TEST_CASE("command parsing") {
  CHECK(to_string(*C("[1] := 5")) == "[1] := 5");
  CHECK(to_string(*C("[1] := [1] + 1")) == "let _r1 = [1] in [1] := _r1 + 1");
  CHECK(to_string(*C("a; b; c")) == "a; b; c");
  CHECK(C("a; b; c")->second->kind == Command::Kind::Seq);
  CHECK(to_string(*C("let x = [1] in [2] := x; k")) == "let x = [1] in [2] := x; k");
  CHECK(to_string(*C("if (x < 1 || x = 3) && !(x = 0) then skip else k")) ==
        "if ((x < 1 || x = 3) && !(x = 0)) then skip else k");
  CHECK(to_string(*C("if (x + 1) < 2 then skip else (a; b)")) == "if x + 1 < 2 then skip else (a; b)");
  CHECK_THROWS_AS(C("[1] :="), ParseError);
  CHECK_THROWS_AS(C("if [1] = 0 then a else b"), ParseError);
  CHECK_THROWS_AS(C("a b"), ParseError);
}

TEST_CASE("printing round-trips") {
  for (const char* s : {"[1] := [1] + 1; k", "let x = [2] in (if x = 0 then a else b); c", "skip; [x + 1] := -y"}) {
    const CommandPtr c = C(s);
    CHECK(same_command(*c, *C(to_string(*c).c_str())));
  }
}

TEST_CASE("execution") {
  CHECK(*run("[1] := 5", "[1:0]") == H("[1:5]"));
  CHECK_FALSE(run("[2] := 5", "[1:0]"));
  CHECK_FALSE(run("let x = [3] in skip", "[1:0]"));
  CHECK(*run("[1] := [1] + [2]", "[1:2, 2:3]") == H("[1:5, 2:3]"));
  CHECK(*run("let x = [1] in if x > 0 then [1] := 0 else [1] := 1", "[1:4]") == H("[1:0]"));
  CHECK(*run("let x = [1] in if x > 0 then [1] := 0 else [1] := 1", "[1:-4]") == H("[1:1]"));
  CHECK_FALSE(run("[1] := 1; [5] := 0", "[1:0]"));
  CHECK_THROWS_AS(run("k", "[]"), ShapeError);
  CHECK_THROWS_AS(run("[x] := 0", "[1:0]"), ShapeError);
}

TEST_CASE("the counter client returns the cell unchanged under both implementations") {
  const Scenario s = builtin("counter");
  const ModuleImpl u1 = module_from_commands(s.impl1);
  const ModuleImpl u2 = module_from_commands(s.impl2);
  CHECK(*exec(*s.client, {}, u2, H("[1:0]")) == H("[1:0]"));
  for (Val v = -2; v <= 2; ++v) {
    const Heap h = Heap::from_cells({{1, v}, {2, 7}});
    CHECK(exec(*s.client, {}, u1, h) == exec(*s.client, {}, u2, h));
  }
}

TEST_CASE("commands do not touch cells outside the footprint they read and write") {
  std::mt19937 rng(9);
  const std::vector<const char*> progs{"[1] := [1] + 1", "let x = [1] in [2] := x", "[2] := 3; [1] := [2]",
                                       "let x = [1] in if x = 0 then [1] := 1 else skip"};
  const std::vector<Val> vals{0, 1, 2};
  for (const char* p : progs) {
    const CommandPtr c = C(p);
    for (const Heap& h : enumerate_heaps(3, vals, 3)) {
      const auto out = exec(*c, {}, {}, h);
      const Heap frame = Heap::from_cells({{4, static_cast<Val>(rng() % 3)}});
      const auto framed = exec(*c, {}, {}, compose(h, frame).value());
      if (out) {
        REQUIRE(framed);
        CHECK(*framed == compose(*out, frame).value());
      }
    }
  }
}

TEST_CASE("free variables of commands") {
  CHECK(free_vars(*C("let x = [y] in [x] := z")) == std::set<std::string>{"y", "z"});
  CHECK(free_vars(*C("if w = 0 then k else skip")) == std::set<std::string>{"w"});
}

TEST_CASE("proofs of the good and bad clients") {
  const Scenario left = builtin("goodbad-left");
  const ProofVerdict l = check_proof(left.context, build_derivation(left.context, *left.proof, left.avars));
  CHECK(l.accepted);
  CHECK(l.consequences == 1);
  CHECK(l.summary() == "Accepted (bounded)");

  const Scenario right = builtin("goodbad-right");
  const Derivation d = build_derivation(right.context, *right.proof, right.avars);
  const ProofVerdict r = check_proof(right.context, d);
  CHECK_FALSE(r.accepted);
  CHECK(r.rule == Derivation::Rule::Consequence);
  CHECK(r.node == std::vector<std::size_t>{1});
  CHECK(r.reason.rfind("chk = false", 0) == 0);
}

TEST_CASE("the counter proof needs no consequence step") {
  const Scenario s = builtin("counter");
  const Derivation d = build_derivation(s.context, *s.proof, s.avars);
  CHECK(same_command(*d.cmd, *s.client));
  const ProofVerdict v = check_proof(s.context, d);
  CHECK(v.accepted);
  CHECK(v.consequences == 0);
}

TEST_CASE("rule side conditions") {
  const TripleCtx gamma{{P("1|->_"), "k", P("a")}};
  SUBCASE("call must match the context") {
    const ProofVerdict v = check_proof(gamma, build_derivation(gamma, "{1|->_} k {b}", kAvars));
    CHECK_FALSE(v.accepted);
    CHECK(v.rule == Derivation::Rule::Call);
  }
  SUBCASE("frame") {
    const Derivation d = build_derivation(gamma, "{1|->_ * 2|->0} k {a * 2|->0}", kAvars);
    CHECK(d.rule == Derivation::Rule::Frame);
    CHECK(check_proof(gamma, d).accepted);
  }
  SUBCASE("write axiom") {
    CHECK(check_proof(gamma, build_derivation(gamma, "{2|->_} [2] := 4 {2|->4}", kAvars)).accepted);
    CHECK_FALSE(check_proof(gamma, build_derivation(gamma, "{2|->_} [2] := 4 {2|->3}", kAvars)).accepted);
  }
  SUBCASE("unsound unary consequence") {
    const ProofVerdict v = check_proof(gamma, build_derivation(gamma, "{true} {1|->_} k {a}", kAvars));
    CHECK_FALSE(v.accepted);
    CHECK(v.reason.find("unary counterexample") != std::string::npos);
  }
  SUBCASE("exists rejects a variable free in the command") {
    Derivation inner;
    inner.rule = Derivation::Rule::Write;
    inner.cmd = C("[x] := 0");
    inner.pre = P("x |-> _");
    inner.post = P("x |-> 0");
    Derivation d;
    d.rule = Derivation::Rule::Exists;
    d.var = "x";
    d.cmd = inner.cmd;
    d.pre = mk_exists("x", inner.pre);
    d.post = mk_exists("x", inner.post);
    d.premises.push_back(inner);
    const ProofVerdict v = check_proof(gamma, d);
    CHECK_FALSE(v.accepted);
    CHECK(v.reason == "x is free in the command");
  }
  SUBCASE("read rule") {
    Derivation inner;
    inner.rule = Derivation::Rule::Write;
    inner.cmd = C("[1] := 0");
    inner.pre = P("1 |-> _");
    inner.post = P("1 |-> 0");
    Derivation framed;
    framed.rule = Derivation::Rule::Frame;
    framed.cmd = inner.cmd;
    framed.frame = P("2 |-> x");
    framed.pre = mk_star(inner.pre, framed.frame);
    framed.post = mk_star(inner.post, framed.frame);
    framed.premises.push_back(inner);
    Derivation d;
    d.rule = Derivation::Rule::Read;
    d.cmd = c_read("x", lit(2), inner.cmd);
    d.pre = mk_exists("x", framed.pre);
    d.post = framed.post;
    d.premises.push_back(framed);
    const ProofVerdict v = check_proof(gamma, d);
    CHECK_FALSE(v.accepted);
    CHECK(v.reason == "x is free in the postcondition");
  }
}

TEST_CASE("relational validity of the scenarios") {
  const ScenarioReport counter = run_scenario(builtin("counter"));
  CHECK_FALSE(counter.validity.violated);
  CHECK(counter.validity.frames_checked > 0);

  CHECK_FALSE(run_scenario(builtin("goodbad-left")).validity.violated);

  const Scenario right = builtin("goodbad-right");
  const ScenarioReport r = run_scenario(right);
  REQUIRE(r.validity.violated);
  const Violation& v = *r.validity.violation;
  CHECK(v.triple == -1);
  CHECK(v.out_f->at(1) == 1);
  CHECK(v.out_g->at(1) == 2);
}

TEST_CASE("identical implementations never violate a diagonal specification") {
  Scenario s = builtin("counter");
  s.impl2 = s.impl1;
  s.coupling["b"] = s.coupling["a"];
  CHECK_FALSE(run_scenario(s).validity.violated);
}

TEST_CASE("a broken context triple is reported against the context") {
  Scenario s = builtin("counter");
  s.impl2["dec"] = C("[1] := [1] - 1");
  const ScenarioReport r = run_scenario(s);
  REQUIRE(r.validity.violated);
  CHECK(s.context[static_cast<std::size_t>(r.validity.violation->triple)].op == "dec");
}

TEST_CASE("scenario parse errors carry line numbers") {
  try {
    parse_scenario("avars: a\nvals: 0..1\ncontext:\n  {1|->_} k {a\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  CHECK_THROWS_AS(parse_scenario("bogus: 1\n"), ParseError);
  CHECK_THROWS_AS(parse_coupling("{ ([1:x],[]) | }", {0}), ParseError);
  CHECK(parse_coupling("{ ([1:x],[1:-x]) | x }", {-1, 0, 1}).generators().size() == 3);
}

TEST_CASE("demos") {
  for (const auto& n : demo_names()) {
    const DemoResult r = demo(n);
    INFO(r.report);
    CHECK(r.ok);
  }
  CHECK_THROWS_AS(demo("nope"), std::invalid_argument);
}

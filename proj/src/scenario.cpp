#include "liftsl/scenario.hpp"

#include <algorithm>
#include <sstream>

#include "lexer.hpp"
#include "liftsl/error.hpp"
#include "liftsl/lifting.hpp"
#include "parser.hpp"

namespace liftsl {

namespace {

using detail::Cursor;
using detail::Tok;

const std::vector<std::string> kSections{"avars", "vals",   "input-vals", "locs", "cells", "env",  "context",
                                         "impl1", "impl2", "coupling",   "client", "pre",  "post", "proof", "name"};

struct Line {
  int no;
  std::string text;
};

struct Section {
  int header_line = 0;
  std::vector<Line> lines;  // non-blank, comments removed; header remainder first

  std::string joined() const {
    // Keep line breaks so token positions map back to the file.
    std::string out;
    int at = header_line;
    for (const auto& l : lines) {
      while (at < l.no) {
        out += '\n';
        ++at;
      }
      out += l.text;
    }
    return out;
  }
};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail_at(int line, const std::string& msg) { throw ParseError(msg, line, 1); }

long parse_int(const Line& l, const std::string& s) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail_at(l.no, "expected an integer, got '" + s + "'");
}

std::vector<Val> parse_values(const Section& sec) {
  std::vector<Val> out;
  for (const auto& l : sec.lines) {
    std::string t = l.text;
    std::replace(t.begin(), t.end(), ',', ' ');
    std::istringstream in(t);
    std::string w;
    while (in >> w) {
      const auto dots = w.find("..");
      if (dots == std::string::npos) {
        out.push_back(parse_int(l, w));
        continue;
      }
      const long lo = parse_int(l, w.substr(0, dots));
      const long hi = parse_int(l, w.substr(dots + 2));
      if (lo > hi) fail_at(l.no, "empty range " + w);
      for (long v = lo; v <= hi; ++v) out.push_back(v);
    }
  }
  if (out.empty()) fail_at(sec.header_line, "no values given");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

long single_int(const Section& sec) {
  if (sec.lines.size() != 1) fail_at(sec.header_line, "expected one integer");
  return parse_int(sec.lines[0], sec.lines[0].text);
}

Assertion assertion_at(Cursor& cur, const std::set<std::string>& avars) {
  detail::AssertionParser p(cur, avars);
  return p.assertion();
}

Assertion parse_assertion_at(const Section& sec, const std::set<std::string>& avars) {
  Cursor cur(detail::tokenize(sec.joined(), sec.header_line));
  Assertion a = assertion_at(cur, avars);
  if (!cur.at(Tok::End)) cur.fail("unexpected input after assertion");
  return a;
}

std::pair<std::string, std::string> split_def(const Line& l) {
  const auto eq = l.text.find('=');
  if (eq == std::string::npos) fail_at(l.no, "expected 'name = ...'");
  std::string name = trim(l.text.substr(0, eq));
  if (name.empty()) fail_at(l.no, "missing name before '='");
  return {name, trim(l.text.substr(eq + 1))};
}

const std::set<std::string> kNoAvars;

Heap heap_literal(Cursor& cur, const VarEnv& eta) {
  cur.expect(Tok::LBracket, "'['");
  std::vector<std::pair<Loc, Val>> cells;
  if (!cur.at(Tok::RBracket)) {
    do {
      detail::AssertionParser p(cur, kNoAvars);
      const Loc l = eval(*p.expr(), eta);
      Val v = 0;
      if (cur.accept(Tok::Colon)) {
        detail::AssertionParser q(cur, kNoAvars);
        v = eval(*q.expr(), eta);
      }
      cells.emplace_back(l, v);
    } while (cur.accept(Tok::Comma));
  }
  cur.expect(Tok::RBracket, "']'");
  try {
    return Heap::from_cells(cells);
  } catch (const std::exception& e) {
    cur.fail(e.what());
  }
}

}  // namespace

GenRel parse_coupling(std::string_view text, const std::vector<Val>& vals, int first_line) {
  // A comprehension ends in "| x }"; find the last bar that is not part of
  // another token.
  std::size_t bar = std::string_view::npos;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '|') continue;
    const bool joined = (i + 1 < text.size() && (text[i + 1] == '|' || text[i + 1] == '-')) ||
                        (i > 0 && text[i - 1] == '|');
    if (!joined) bar = i;
  }
  if (bar == std::string_view::npos) {
    try {
      return parse_relation(text, 2);
    } catch (const ParseError& e) {
      throw ParseError(std::string("bad relation: ") + e.what(), first_line, 1);
    }
  }
  Cursor tail(detail::tokenize(text.substr(bar + 1), first_line));
  const std::string x = tail.expect(Tok::Ident, "comprehension variable").text;
  tail.expect(Tok::RBrace, "'}'");
  if (!tail.at(Tok::End)) tail.fail("unexpected input after comprehension");

  const auto toks = detail::tokenize(text.substr(0, bar), first_line);
  std::vector<HeapTuple> gens;
  for (Val v : vals) {
    Cursor cur(toks);
    const VarEnv eta{{x, v}};
    cur.expect(Tok::LBrace, "'{'");
    do {
      cur.expect(Tok::LParen, "'('");
      HeapTuple t;
      t.push_back(heap_literal(cur, eta));
      cur.expect(Tok::Comma, "','");
      t.push_back(heap_literal(cur, eta));
      cur.expect(Tok::RParen, "')'");
      gens.push_back(std::move(t));
    } while (cur.accept(Tok::Comma));
    if (!cur.at(Tok::End)) cur.fail("expected '| var }'");
  }
  return GenRel(2, std::move(gens));
}

Scenario parse_scenario(std::string_view text) {
  std::map<std::string, Section> secs;
  Section* cur = nullptr;
  std::istringstream in{std::string(text)};
  std::string raw;
  int no = 0;
  while (std::getline(in, raw)) {
    ++no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string header;
    if (!raw.empty() && raw[0] != ' ' && raw[0] != '\t') {
      const auto colon = raw.find(':');
      if (colon == std::string::npos) fail_at(no, "expected a section header 'name:'");
      header = trim(raw.substr(0, colon));
      if (std::find(kSections.begin(), kSections.end(), header) == kSections.end())
        fail_at(no, "unknown section '" + header + "'");
      if (secs.count(header)) fail_at(no, "section '" + header + "' appears twice");
      cur = &secs[header];
      cur->header_line = no;
      raw = raw.substr(colon + 1);
    } else if (!trim(raw).empty() && !cur) {
      fail_at(no, "text before the first section header");
    }
    if (!trim(raw).empty()) cur->lines.push_back({no, trim(raw)});
  }

  auto need = [&](const char* name) -> const Section& {
    auto it = secs.find(name);
    if (it == secs.end() || it->second.lines.empty())
      throw ParseError(std::string("missing section '") + name + "'", it == secs.end() ? 0 : it->second.header_line, 0);
    return it->second;
  };

  Scenario s;
  if (secs.count("name")) s.name = secs["name"].joined().empty() ? "" : trim(secs["name"].joined());
  if (secs.count("avars")) {
    for (const auto& l : secs["avars"].lines) {
      std::string t = l.text;
      std::replace(t.begin(), t.end(), ',', ' ');
      std::istringstream words(t);
      std::string w;
      while (words >> w) s.avars.insert(w);
    }
  }
  if (secs.count("env")) {
    const Section& e = secs["env"];
    try {
      s.env = parse_var_env(e.joined());
    } catch (const ParseError& err) {
      throw ParseError(std::string("bad env: ") + err.what(), e.header_line, 1);
    }
  }
  if (secs.count("vals")) s.vals = parse_values(secs["vals"]);
  if (secs.count("input-vals")) s.input_vals = parse_values(secs["input-vals"]);
  if (secs.count("locs")) {
    const long v = single_int(secs["locs"]);
    if (v < 1) fail_at(secs["locs"].header_line, "locs must be positive");
    s.locs = v;
  }
  if (secs.count("cells")) {
    const long v = single_int(secs["cells"]);
    if (v < 0) fail_at(secs["cells"].header_line, "cells must not be negative");
    s.cells = static_cast<std::size_t>(v);
  }

  for (const auto& l : need("context").lines) {
    Cursor c(detail::tokenize(l.text, l.no));
    Triple t;
    c.expect(Tok::LBrace, "'{'");
    t.pre = assertion_at(c, s.avars);
    c.expect(Tok::RBrace, "'}'");
    const auto& op = c.expect(Tok::Ident, "operation name");
    t.op = op.text;
    c.expect(Tok::LBrace, "'{'");
    t.post = assertion_at(c, s.avars);
    c.expect(Tok::RBrace, "'}'");
    if (!c.at(Tok::End)) c.fail("unexpected input after triple");
    if (std::any_of(s.context.begin(), s.context.end(), [&](const Triple& u) { return u.op == t.op; }))
      fail_at(l.no, "operation '" + t.op + "' has two context triples");
    s.context.push_back(std::move(t));
  }

  for (auto [key, target] : {std::pair{"impl1", &s.impl1}, std::pair{"impl2", &s.impl2}}) {
    const Section& sec = need(key);
    for (const auto& l : sec.lines) {
      auto [name, body] = split_def(l);
      if (target->count(name)) fail_at(l.no, "operation '" + name + "' defined twice");
      (*target)[name] = parse_command(body, l.no);
    }
    for (const auto& t : s.context)
      if (!target->count(t.op)) fail_at(sec.header_line, std::string(key) + " does not define '" + t.op + "'");
  }

  if (secs.count("coupling")) {
    for (const auto& l : secs["coupling"].lines) {
      auto [name, body] = split_def(l);
      if (!s.avars.count(name)) fail_at(l.no, "'" + name + "' is not an assertion variable");
      s.coupling[name] = parse_coupling(body, s.vals, l.no);
    }
  }
  for (const auto& a : s.avars)
    if (!s.coupling.count(a)) throw ParseError("no coupling for assertion variable '" + a + "'", 0, 0);

  const Section& client = need("client");
  s.client = parse_command(client.joined(), client.header_line);
  s.pre = parse_assertion_at(need("pre"), s.avars);
  s.post = parse_assertion_at(need("post"), s.avars);
  if (secs.count("proof") && !secs["proof"].lines.empty()) s.proof = secs["proof"].joined();
  return s;
}

std::string ScenarioReport::text(const Scenario& s) const {
  std::string out;
  if (!s.name.empty()) out += "scenario " + s.name + "\n";
  if (proof) {
    out += "proof: " + proof->summary();
    if (proof->accepted) out += ", " + std::to_string(proof->consequences) + " consequence step(s)";
    out += "\n";
  }
  out += "validity: " + validity.summary(s.context) + "\n";
  return out;
}

ProofVerdict prove_scenario(const Scenario& s, const ProofOptions& opts) {
  if (!s.proof) throw ShapeError("the scenario has no proof section");
  const Derivation d = build_derivation(s.context, *s.proof, s.avars);
  if (same_command(*d.cmd, *s.client)) return check_proof(s.context, d, opts);
  ProofVerdict v;
  v.rule = d.rule;
  v.reason = "the annotated program is " + to_string(*d.cmd) + ", not the client";
  return v;
}

ValidityReport scenario_validity(const Scenario& s) {
  const AssertEnv rho{2, s.coupling};
  const ValueDomain dom{s.vals, s.locs};
  const ValidityBudget budget{s.locs, s.input_vals, s.cells};
  return two_validity_test(s.context, module_from_commands(s.impl1), module_from_commands(s.impl2), rho, s.env,
                           s.pre, *s.client, s.post, budget, dom);
}

ScenarioReport run_scenario(const Scenario& s, const ProofOptions& opts) {
  ScenarioReport rep;
  if (s.proof) rep.proof = prove_scenario(s, opts);
  rep.validity = scenario_validity(s);
  return rep;
}

namespace {

const std::map<std::string, std::string>& builtins() {
  static const std::map<std::string, std::string> m{
      {"counter", R"(name: counter
# A counter kept as x by one implementation and as -x between nxt and fin
# by the other.
avars: a b
vals: -4..4
input-vals: -2..2
locs: 3
cells: 3
context:
  {1|->_} init {a}
  {a} inc {a}
  {a} nxt {b}
  {b} dec {b}
  {b} fin {1|->_}
impl1:
  init = [1] := 0
  inc = [1] := [1] + 1
  nxt = skip
  dec = [1] := [1] - 1
  fin = skip
impl2:
  init = [1] := 0
  inc = [1] := [1] + 1
  nxt = [1] := -[1]
  dec = [1] := [1] + 1
  fin = [1] := -[1]
coupling:
  a = { ([1:x],[1:x]) | x }
  b = { ([1:x],[1:-x]) | x }
client: init; inc; nxt; dec; fin
pre: 1|->_
post: 1|->_
proof: {1|->_} init {a} inc {a} nxt {b} dec {b} fin {1|->_}
)"},
      {"goodbad-left", R"(name: goodbad-left
# The split into a and b is only used under 1|->_, which forgets it.
avars: a b
vals: -4..4
input-vals: -2..2
locs: 3
cells: 3
context:
  {1|->_} init {1|->_ /\ a*b}
  {1|->_} fin {1|->_}
  {1|->_*a \/ 1|->_*b} badfin {1|->_}
impl1:
  init = skip
  fin = skip
  badfin = [1] := 1
impl2:
  init = skip
  fin = skip
  badfin = [1] := 2
coupling:
  a = { ([1:x],[]) | x }
  b = { ([],[1:x]) | x }
client: init; fin
pre: 1|->_
post: 1|->_
proof: {1|->_} init {1|->_ /\ a*b} {1|->_} fin {1|->_}
)"},
      {"goodbad-right", R"(name: goodbad-right
# The consequence into badfin's precondition holds for every unary meaning
# of a and b but not for this coupling.
avars: a b
vals: -4..4
input-vals: -2..2
locs: 3
cells: 3
context:
  {1|->_} init {1|->_ /\ a*b}
  {1|->_} fin {1|->_}
  {1|->_*a \/ 1|->_*b} badfin {1|->_}
impl1:
  init = skip
  fin = skip
  badfin = [1] := 1
impl2:
  init = skip
  fin = skip
  badfin = [1] := 2
coupling:
  a = { ([1:x],[]) | x }
  b = { ([],[1:x]) | x }
client: init; badfin
pre: 1|->_
post: 1|->_
proof: {1|->_} init {1|->_ /\ a*b} {1|->_*a \/ 1|->_*b} badfin {1|->_}
)"},
  };
  return m;
}

struct Checklist {
  std::string out;
  bool ok = true;

  void step(bool good, const std::string& line) {
    out += (good ? "  ok    " : "  FAIL  ") + line + "\n";
    ok = ok && good;
  }
};

DemoResult counter_demo() {
  Checklist c;
  const Scenario s = parse_scenario(builtin_scenario_text("counter"));
  c.out += "counter: two implementations of init; inc; nxt; dec; fin\n";
  const ScenarioReport r = run_scenario(s);
  c.step(r.proof && r.proof->accepted, "proof " + r.proof->summary());
  c.step(!r.validity.violated, "validity " + r.validity.summary(s.context));
  const ModuleImpl u1 = module_from_commands(s.impl1);
  const ModuleImpl u2 = module_from_commands(s.impl2);
  for (Val v = -2; v <= 2; ++v) {
    const Heap h = Heap::from_cells({{1, v}});
    const auto o1 = exec(*s.client, {}, u1, h);
    const auto o2 = exec(*s.client, {}, u2, h);
    const bool same = o1 && o2 && o1->at(1) == o2->at(1);
    c.step(same, "from " + to_string(h) + ": " + (o1 ? to_string(*o1) : "err") + " and " +
                     (o2 ? to_string(*o2) : "err"));
  }
  return {c.out, c.ok};
}

DemoResult goodbad_demo() {
  Checklist c;
  const Scenario left = parse_scenario(builtin_scenario_text("goodbad-left"));
  const Scenario right = parse_scenario(builtin_scenario_text("goodbad-right"));
  c.out += "goodbad: init; fin is sound, init; badfin is not\n";

  const ChkReport fine = chk(parse_assertion("1|->_ /\\ a*b", left.avars), parse_assertion("1|->_", left.avars));
  c.step(fine.ok, "chk(1|->_ /\\ a*b, 1|->_): " + fine.headline());
  const ScenarioReport l = run_scenario(left);
  c.step(l.proof && l.proof->accepted, "left proof " + l.proof->summary());
  c.step(!l.validity.violated, "left validity " + l.validity.summary(left.context));

  const ChkReport bad =
      chk(parse_assertion("1|->_ /\\ a*b", right.avars), parse_assertion("1|->_*a \\/ 1|->_*b", right.avars));
  c.step(!bad.ok, "chk(1|->_ /\\ a*b, 1|->_*a \\/ 1|->_*b): " + bad.headline());
  const ScenarioReport r = run_scenario(right);
  c.step(r.proof && !r.proof->accepted && r.proof->rule == Derivation::Rule::Consequence &&
             r.proof->reason.rfind("chk = false", 0) == 0,
         "right proof " + r.proof->summary());
  const bool split = r.validity.violated && r.validity.violation->out_f && r.validity.violation->out_g &&
                     r.validity.violation->out_f->at(1) == 1 && r.validity.violation->out_g->at(1) == 2;
  c.step(split, "right validity " + r.validity.summary(right.context));
  return {c.out, c.ok};
}

}  // namespace

std::vector<std::string> builtin_scenarios() {
  std::vector<std::string> out;
  for (const auto& [k, v] : builtins()) out.push_back(k);
  return out;
}

const std::string& builtin_scenario_text(const std::string& name) { return builtins().at(name); }

std::vector<std::string> demo_names() { return {"counter", "goodbad"}; }

DemoResult demo(const std::string& name) {
  if (name == "counter") return counter_demo();
  if (name == "goodbad") return goodbad_demo();
  std::string names;
  for (const auto& n : demo_names()) names += (names.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown demo '" + name + "'; choose one of: " + names);
}

}  // namespace liftsl

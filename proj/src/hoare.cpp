#include "liftsl/hoare.hpp"

#include <algorithm>
#include <set>

#include "lexer.hpp"
#include "liftsl/error.hpp"
#include "liftsl/lifting.hpp"
#include "parser.hpp"

namespace liftsl {

// ---------------------------------------------------------------------------
// Guards

GuardPtr g_cmp(CmpOp op, ExprPtr l, ExprPtr r) {
  auto g = std::make_shared<Guard>();
  g->kind = Guard::Kind::Cmp;
  g->op = op;
  g->lhs = std::move(l);
  g->rhs = std::move(r);
  return g;
}

namespace {

GuardPtr g_bin(Guard::Kind k, GuardPtr a, GuardPtr b) {
  auto g = std::make_shared<Guard>();
  g->kind = k;
  g->a = std::move(a);
  g->b = std::move(b);
  return g;
}

}  // namespace

GuardPtr g_and(GuardPtr a, GuardPtr b) { return g_bin(Guard::Kind::And, std::move(a), std::move(b)); }
GuardPtr g_or(GuardPtr a, GuardPtr b) { return g_bin(Guard::Kind::Or, std::move(a), std::move(b)); }
GuardPtr g_not(GuardPtr a) { return g_bin(Guard::Kind::Not, std::move(a), nullptr); }

GuardPtr g_const(bool v) {
  auto g = std::make_shared<Guard>();
  g->kind = v ? Guard::Kind::True : Guard::Kind::False;
  return g;
}

bool eval(const Guard& g, const VarEnv& eta) {
  switch (g.kind) {
    case Guard::Kind::Cmp: return compare(g.op, eval(*g.lhs, eta), eval(*g.rhs, eta));
    case Guard::Kind::And: return eval(*g.a, eta) && eval(*g.b, eta);
    case Guard::Kind::Or: return eval(*g.a, eta) || eval(*g.b, eta);
    case Guard::Kind::Not: return !eval(*g.a, eta);
    case Guard::Kind::True: return true;
    case Guard::Kind::False: return false;
  }
  return false;
}

Assertion guard_assertion(const Guard& g, bool negated) {
  switch (g.kind) {
    case Guard::Kind::Cmp: return mk_compare(negated ? negate(g.op) : g.op, g.lhs, g.rhs);
    case Guard::Kind::And:
    case Guard::Kind::Or: {
      const bool conj = (g.kind == Guard::Kind::And) != negated;
      Assertion l = guard_assertion(*g.a, negated);
      Assertion r = guard_assertion(*g.b, negated);
      return conj ? mk_and(l, r) : mk_or(l, r);
    }
    case Guard::Kind::Not: return guard_assertion(*g.a, !negated);
    case Guard::Kind::True: return negated ? mk_false() : mk_true();
    case Guard::Kind::False: return negated ? mk_true() : mk_false();
  }
  return mk_true();
}

std::string to_string(const Guard& g) {
  switch (g.kind) {
    case Guard::Kind::Cmp: return to_string(*g.lhs) + " " + to_string(g.op) + " " + to_string(*g.rhs);
    case Guard::Kind::And: return "(" + to_string(*g.a) + " && " + to_string(*g.b) + ")";
    case Guard::Kind::Or: return "(" + to_string(*g.a) + " || " + to_string(*g.b) + ")";
    case Guard::Kind::Not: return "!(" + to_string(*g.a) + ")";
    case Guard::Kind::True: return "true";
    case Guard::Kind::False: return "false";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Commands

namespace {

std::shared_ptr<Command> node(Command::Kind k) {
  auto c = std::make_shared<Command>();
  c->kind = k;
  return c;
}

bool same_guard(const Guard& a, const Guard& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Guard::Kind::Cmp: return a.op == b.op && same_expr(*a.lhs, *b.lhs) && same_expr(*a.rhs, *b.rhs);
    case Guard::Kind::And:
    case Guard::Kind::Or: return same_guard(*a.a, *b.a) && same_guard(*a.b, *b.b);
    case Guard::Kind::Not: return same_guard(*a.a, *b.a);
    default: return true;
  }
}

void guard_vars(const Guard& g, std::set<std::string>& out) {
  if (g.lhs) free_vars(*g.lhs, out);
  if (g.rhs) free_vars(*g.rhs, out);
  if (g.a) guard_vars(*g.a, out);
  if (g.b) guard_vars(*g.b, out);
}

}  // namespace

CommandPtr c_call(std::string k) {
  auto c = node(Command::Kind::Call);
  c->name = std::move(k);
  return c;
}

CommandPtr c_write(ExprPtr loc, ExprPtr value) {
  auto c = node(Command::Kind::Write);
  c->loc = std::move(loc);
  c->value = std::move(value);
  return c;
}

CommandPtr c_read(std::string y, ExprPtr loc, CommandPtr body) {
  auto c = node(Command::Kind::Read);
  c->name = std::move(y);
  c->loc = std::move(loc);
  c->first = std::move(body);
  return c;
}

CommandPtr c_seq(CommandPtr a, CommandPtr b) {
  auto c = node(Command::Kind::Seq);
  c->first = std::move(a);
  c->second = std::move(b);
  return c;
}

CommandPtr c_if(GuardPtr b, CommandPtr then_c, CommandPtr else_c) {
  auto c = node(Command::Kind::If);
  c->guard = std::move(b);
  c->first = std::move(then_c);
  c->second = std::move(else_c);
  return c;
}

CommandPtr c_skip() { return node(Command::Kind::Skip); }

bool same_command(const Command& a, const Command& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Command::Kind::Call: return a.name == b.name;
    case Command::Kind::Write: return same_expr(*a.loc, *b.loc) && same_expr(*a.value, *b.value);
    case Command::Kind::Read:
      return a.name == b.name && same_expr(*a.loc, *b.loc) && same_command(*a.first, *b.first);
    case Command::Kind::Seq: return same_command(*a.first, *b.first) && same_command(*a.second, *b.second);
    case Command::Kind::If:
      return same_guard(*a.guard, *b.guard) && same_command(*a.first, *b.first) &&
             same_command(*a.second, *b.second);
    case Command::Kind::Skip: return true;
  }
  return false;
}

std::set<std::string> free_vars(const Command& c) {
  std::set<std::string> out;
  switch (c.kind) {
    case Command::Kind::Write:
      free_vars(*c.loc, out);
      free_vars(*c.value, out);
      break;
    case Command::Kind::Read: {
      auto body = free_vars(*c.first);
      body.erase(c.name);
      out = std::move(body);
      free_vars(*c.loc, out);
      break;
    }
    case Command::Kind::Seq:
    case Command::Kind::If: {
      out = free_vars(*c.first);
      auto more = free_vars(*c.second);
      out.insert(more.begin(), more.end());
      if (c.guard) guard_vars(*c.guard, out);
      break;
    }
    default: break;
  }
  return out;
}

namespace {

bool atomic(const Command& c) {
  return c.kind == Command::Kind::Call || c.kind == Command::Kind::Write || c.kind == Command::Kind::Skip;
}

}  // namespace

std::string to_string(const Command& c) {
  switch (c.kind) {
    case Command::Kind::Call: return c.name;
    case Command::Kind::Write: return "[" + to_string(*c.loc) + "] := " + to_string(*c.value);
    case Command::Kind::Read: return "let " + c.name + " = [" + to_string(*c.loc) + "] in " + to_string(*c.first);
    case Command::Kind::Seq: {
      const std::string l = to_string(*c.first);
      return (c.first->kind == Command::Kind::Read || c.first->kind == Command::Kind::Seq ? "(" + l + ")" : l) +
             "; " + to_string(*c.second);
    }
    case Command::Kind::If: {
      auto branch = [](const Command& b) { return atomic(b) ? to_string(b) : "(" + to_string(b) + ")"; };
      return "if " + to_string(*c.guard) + " then " + branch(*c.first) + " else " + branch(*c.second);
    }
    case Command::Kind::Skip: return "skip";
  }
  return "?";
}

namespace {

using detail::Cursor;
using detail::Tok;

class CommandParser {
 public:
  explicit CommandParser(Cursor& cur) : cur_(cur) {}

  CommandPtr seq() {
    CommandPtr c = stmt();
    if (cur_.accept(Tok::Semi)) {
      if (at_stmt_start()) return c_seq(c, seq());
    }
    return c;
  }

  bool at_stmt_start() const {
    if (cur_.at(Tok::LBracket) || cur_.at(Tok::LParen)) return true;
    if (!cur_.at(Tok::Ident)) return false;
    const std::string& t = cur_.peek().text;
    return t == "let" || t == "if" || t == "skip" || !detail::is_keyword(t);
  }

  /// One statement without a trailing sequence; `let` still extends right.
  CommandPtr stmt() {
    if (cur_.accept_keyword("let")) {
      const std::string y = name();
      cur_.expect(Tok::Eq, "'='");
      cur_.expect(Tok::LBracket, "'['");
      std::vector<Read> reads;
      ExprPtr loc = hexpr(reads);
      cur_.expect(Tok::RBracket, "']'");
      cur_.expect_keyword("in");
      return wrap(reads, c_read(y, loc, seq()));
    }
    if (cur_.accept_keyword("if")) {
      GuardPtr b = guard();
      cur_.expect_keyword("then");
      CommandPtr t = atom();
      cur_.expect_keyword("else");
      CommandPtr e = atom();
      return c_if(b, t, e);
    }
    return atom();
  }

  CommandPtr atom() {
    if (cur_.accept(Tok::LParen)) {
      CommandPtr c = seq();
      cur_.expect(Tok::RParen, "')'");
      return c;
    }
    if (cur_.accept_keyword("skip")) return c_skip();
    if (cur_.at_keyword("let") || cur_.at_keyword("if")) return stmt();
    if (cur_.accept(Tok::LBracket)) {
      std::vector<Read> reads;
      ExprPtr loc = hexpr(reads);
      cur_.expect(Tok::RBracket, "']'");
      cur_.expect(Tok::Assign, "':='");
      ExprPtr value = hexpr(reads);
      return wrap(reads, c_write(loc, value));
    }
    if (cur_.at(Tok::Ident) && !detail::is_keyword(cur_.peek().text)) return c_call(cur_.next().text);
    cur_.fail("expected command");
  }

 private:
  struct Read {
    std::string var;
    ExprPtr loc;
  };

  static CommandPtr wrap(const std::vector<Read>& reads, CommandPtr c) {
    for (auto it = reads.rbegin(); it != reads.rend(); ++it) c = c_read(it->var, it->loc, c);
    return c;
  }

  std::string name() {
    const auto& t = cur_.expect(Tok::Ident, "variable name");
    if (detail::is_keyword(t.text)) cur_.fail("bad variable name");
    return t.text;
  }

  // Expression whose heap reads [E] are collected into `reads`.
  ExprPtr hexpr(std::vector<Read>& reads) {
    ExprPtr e = hatom(reads);
    for (;;) {
      if (cur_.accept(Tok::Plus)) {
        e = add(e, hatom(reads));
      } else if (cur_.accept(Tok::Minus)) {
        e = sub(e, hatom(reads));
      } else {
        return e;
      }
    }
  }

  ExprPtr hatom(std::vector<Read>& reads) {
    if (cur_.at(Tok::Int)) return lit(cur_.next().value);
    if (cur_.accept(Tok::Minus)) {
      if (cur_.at(Tok::Int)) return lit(-cur_.next().value);
      return neg(hatom(reads));
    }
    if (cur_.accept(Tok::LParen)) {
      ExprPtr e = hexpr(reads);
      cur_.expect(Tok::RParen, "')'");
      return e;
    }
    if (cur_.accept(Tok::LBracket)) {
      if (!reads_allowed_) cur_.fail("heap read in a guard");
      ExprPtr loc = hexpr(reads);
      cur_.expect(Tok::RBracket, "']'");
      std::string v = "_r" + std::to_string(++fresh_);
      reads.push_back({v, loc});
      return var(v);
    }
    return var(name());
  }

  ExprPtr pure_expr() {
    std::vector<Read> none;
    reads_allowed_ = false;
    ExprPtr e = hexpr(none);
    reads_allowed_ = true;
    return e;
  }

  GuardPtr guard() {
    GuardPtr g = guard_and();
    while (cur_.accept(Tok::OrOr)) g = g_or(g, guard_and());
    return g;
  }

  GuardPtr guard_and() {
    GuardPtr g = guard_not();
    while (cur_.accept(Tok::AndAnd)) g = g_and(g, guard_not());
    return g;
  }

  GuardPtr guard_not() {
    if (cur_.accept(Tok::Bang)) return g_not(guard_not());
    if (cur_.accept_keyword("true")) return g_const(true);
    if (cur_.accept_keyword("false")) return g_const(false);
    if (cur_.at(Tok::LParen)) {
      const auto mark = cur_.save();
      cur_.next();
      try {
        GuardPtr g = guard();
        if (cur_.accept(Tok::RParen)) return g;
      } catch (const ParseError&) {
      }
      cur_.restore(mark);
    }
    ExprPtr l = pure_expr();
    CmpOp op;
    switch (cur_.peek().kind) {
      case Tok::Eq: op = CmpOp::Eq; break;
      case Tok::Ne: op = CmpOp::Ne; break;
      case Tok::Lt: op = CmpOp::Lt; break;
      case Tok::Le: op = CmpOp::Le; break;
      case Tok::Gt: op = CmpOp::Gt; break;
      case Tok::Ge: op = CmpOp::Ge; break;
      default: cur_.fail("expected comparison");
    }
    cur_.next();
    return g_cmp(op, l, pure_expr());
  }

  Cursor& cur_;
  int fresh_ = 0;
  bool reads_allowed_ = true;
};

}  // namespace

CommandPtr parse_command(std::string_view text, int first_line) {
  Cursor cur(detail::tokenize(text, first_line));
  CommandParser p(cur);
  CommandPtr c = p.seq();
  if (!cur.at(Tok::End)) cur.fail("unexpected input after command");
  return c;
}

// ---------------------------------------------------------------------------
// Execution

ModuleImpl module_from_commands(const std::map<std::string, CommandPtr>& ops) {
  ModuleImpl u;
  for (const auto& [k, c] : ops) {
    u.ops[k] = [c](const Heap& h) { return exec(*c, {}, ModuleImpl{}, h); };
  }
  return u;
}

std::optional<Heap> exec(const Command& c, const VarEnv& eta, const ModuleImpl& u, const Heap& h) {
  switch (c.kind) {
    case Command::Kind::Call: {
      auto it = u.ops.find(c.name);
      if (it == u.ops.end()) throw ShapeError("unknown module operation '" + c.name + "'");
      return it->second(h);
    }
    case Command::Kind::Write: {
      const Loc l = eval(*c.loc, eta);
      if (!h.contains(l)) return std::nullopt;
      return h.with(l, eval(*c.value, eta));
    }
    case Command::Kind::Read: {
      const Loc l = eval(*c.loc, eta);
      const auto v = h.at(l);
      if (!v) return std::nullopt;
      VarEnv inner = eta;
      inner[c.name] = *v;
      return exec(*c.first, inner, u, h);
    }
    case Command::Kind::Seq: {
      auto mid = exec(*c.first, eta, u, h);
      if (!mid) return std::nullopt;
      return exec(*c.second, eta, u, *mid);
    }
    case Command::Kind::If: return exec(eval(*c.guard, eta) ? *c.first : *c.second, eta, u, h);
    case Command::Kind::Skip: return h;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Proof checking

void validate_context(const TripleCtx& gamma) {
  std::set<std::string> seen;
  for (const auto& t : gamma) {
    if (!seen.insert(t.op).second) throw ShapeError("operation '" + t.op + "' has two context triples");
  }
}

const char* to_string(Derivation::Rule r) {
  switch (r) {
    case Derivation::Rule::Consequence: return "consequence";
    case Derivation::Rule::Frame: return "frame";
    case Derivation::Rule::Exists: return "exists";
    case Derivation::Rule::Call: return "call";
    case Derivation::Rule::Write: return "write";
    case Derivation::Rule::Read: return "read";
    case Derivation::Rule::Seq: return "sequence";
    case Derivation::Rule::If: return "conditional";
  }
  return "?";
}

std::string ProofVerdict::summary() const {
  if (accepted) return "Accepted (bounded)";
  std::string path = "root";
  for (std::size_t i : node) path += "." + std::to_string(i + 1);
  return std::string("Rejected at ") + to_string(rule) + " node " + path + ": " + reason;
}

namespace {

class ProofChecker {
 public:
  ProofChecker(const TripleCtx& gamma, const ProofOptions& opts) : gamma_(gamma), opts_(opts) {}

  ProofVerdict run(const Derivation& d) {
    validate_context(gamma_);
    std::vector<std::size_t> path;
    v_.accepted = check(d, path);
    return v_;
  }

 private:
  bool reject(const Derivation& d, const std::vector<std::size_t>& path, std::string why) {
    v_.node = path;
    v_.rule = d.rule;
    v_.reason = std::move(why);
    return false;
  }

  bool premises(const Derivation& d, const std::vector<std::size_t>& path, std::size_t n) {
    if (d.premises.size() == n) return true;
    return reject(d, path, "expected " + std::to_string(n) + " premise(s), found " + std::to_string(d.premises.size()));
  }

  static bool same(const CommandPtr& a, const CommandPtr& b) { return a && b && same_command(*a, *b); }

  // Bounded search for a unary counterexample to lhs ⊨¹ rhs over small
  // assignments of the free normal variables.
  std::optional<std::string> unary_counterexample(const Assertion& lhs, const Assertion& rhs) {
    std::set<std::string> fv = free_vars(lhs);
    auto more = free_vars(rhs);
    fv.insert(more.begin(), more.end());
    const std::vector<std::string> names(fv.begin(), fv.end());
    std::vector<std::size_t> idx(names.size(), 0);
    for (;;) {
      VarEnv eta;
      for (std::size_t i = 0; i < names.size(); ++i) eta[names[i]] = opts_.var_values[idx[i]];
      const auto r = find_counter_env(lhs, rhs, eta, 1, opts_.budget, opts_.dom);
      if (r.found) {
        std::string s = "unary counterexample " + to_string(r.found->witness);
        if (!r.found->rho.rels.empty()) s += " under " + to_string(r.found->rho);
        if (!eta.empty()) s += " with " + to_string(eta);
        return s;
      }
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == opts_.var_values.size()) idx[k++] = 0;
      if (k == idx.size()) return std::nullopt;
    }
  }

  bool check(const Derivation& d, std::vector<std::size_t>& path) {
    if (!d.pre || !d.post || !d.cmd) return reject(d, path, "incomplete node");
    const Command& c = *d.cmd;
    switch (d.rule) {
      case Derivation::Rule::Call: {
        if (!premises(d, path, 0)) return false;
        if (c.kind != Command::Kind::Call) return reject(d, path, "command is not a module call");
        auto it = std::find_if(gamma_.begin(), gamma_.end(), [&](const Triple& t) { return t.op == c.name; });
        if (it == gamma_.end()) return reject(d, path, "no context triple for '" + c.name + "'");
        if (!alpha_equal(it->pre, d.pre) || !alpha_equal(it->post, d.post))
          return reject(d, path, "triple differs from the context entry for '" + c.name + "'");
        return true;
      }
      case Derivation::Rule::Write: {
        if (!premises(d, path, 0)) return false;
        if (c.kind != Command::Kind::Write) return reject(d, path, "command is not a heap write");
        if (!alpha_equal(d.pre, mk_points_to_any(c.loc)) || !alpha_equal(d.post, mk_points_to(c.loc, c.value)))
          return reject(d, path, "write axiom needs {E |-> _} [E] := F {E |-> F}");
        return true;
      }
      case Derivation::Rule::Read: {
        if (!premises(d, path, 1)) return false;
        if (c.kind != Command::Kind::Read) return reject(d, path, "command is not a heap read");
        const Derivation& p = d.premises[0];
        const Assertion cell = mk_points_to(c.loc, var(c.name));
        const bool shaped = alpha_equal(p.pre, cell) ||
                            (p.pre->kind == Node::Kind::Star && alpha_equal(p.pre->rhs, cell));
        if (!shaped) return reject(d, path, "premise precondition must end in * " + pretty(cell));
        if (!alpha_equal(d.pre, mk_exists(c.name, p.pre))) return reject(d, path, "precondition must be EX " + c.name + ". <premise precondition>");
        if (!alpha_equal(d.post, p.post)) return reject(d, path, "postcondition differs from the premise");
        if (free_in(c.name, d.post)) return reject(d, path, c.name + " is free in the postcondition");
        if (!same(p.cmd, c.first)) return reject(d, path, "premise command is not the let body");
        break;
      }
      case Derivation::Rule::Seq: {
        if (!premises(d, path, 2)) return false;
        if (c.kind != Command::Kind::Seq) return reject(d, path, "command is not a sequence");
        const Derivation& a = d.premises[0];
        const Derivation& b = d.premises[1];
        if (!same(a.cmd, c.first) || !same(b.cmd, c.second)) return reject(d, path, "premise commands do not match");
        if (!alpha_equal(a.pre, d.pre) || !alpha_equal(b.post, d.post))
          return reject(d, path, "outer assertions do not match the premises");
        if (!alpha_equal(a.post, b.pre))
          return reject(d, path, "midpoint " + pretty(a.post) + " differs from " + pretty(b.pre));
        break;
      }
      case Derivation::Rule::If: {
        if (!premises(d, path, 2)) return false;
        if (c.kind != Command::Kind::If) return reject(d, path, "command is not a conditional");
        const Derivation& a = d.premises[0];
        const Derivation& b = d.premises[1];
        if (!same(a.cmd, c.first) || !same(b.cmd, c.second)) return reject(d, path, "premise commands do not match");
        if (!alpha_equal(a.pre, mk_and(d.pre, guard_assertion(*c.guard))) ||
            !alpha_equal(b.pre, mk_and(d.pre, guard_assertion(*c.guard, true))))
          return reject(d, path, "branch preconditions must be P /\\ B and P /\\ !B");
        if (!alpha_equal(a.post, d.post) || !alpha_equal(b.post, d.post))
          return reject(d, path, "branch postconditions differ");
        break;
      }
      case Derivation::Rule::Frame: {
        if (!premises(d, path, 1)) return false;
        const Derivation& p = d.premises[0];
        if (!d.frame) return reject(d, path, "missing frame");
        if (!same(p.cmd, d.cmd)) return reject(d, path, "premise command differs");
        if (!alpha_equal(d.pre, mk_star(p.pre, d.frame)) || !alpha_equal(d.post, mk_star(p.post, d.frame)))
          return reject(d, path, "assertions are not the premise's starred with " + pretty(d.frame));
        break;
      }
      case Derivation::Rule::Exists: {
        if (!premises(d, path, 1)) return false;
        const Derivation& p = d.premises[0];
        if (!same(p.cmd, d.cmd)) return reject(d, path, "premise command differs");
        if (free_vars(c).count(d.var)) return reject(d, path, d.var + " is free in the command");
        if (!alpha_equal(d.pre, mk_exists(d.var, p.pre)) || !alpha_equal(d.post, mk_exists(d.var, p.post)))
          return reject(d, path, "assertions are not the premise's under EX " + d.var);
        break;
      }
      case Derivation::Rule::Consequence: {
        if (!premises(d, path, 1)) return false;
        const Derivation& p = d.premises[0];
        if (!same(p.cmd, d.cmd)) return reject(d, path, "premise command differs");
        ++v_.consequences;
        for (const auto& [from, to] : {std::pair{d.pre, p.pre}, std::pair{p.post, d.post}}) {
          const ChkReport r = chk(from, to);
          if (!r.ok)
            return reject(d, path, "chk = false for " + pretty(from) + " => " + pretty(to) + " (" + r.reason + ")");
          if (auto cex = unary_counterexample(from, to))
            return reject(d, path, pretty(from) + " |= " + pretty(to) + " fails: " + *cex);
        }
        break;
      }
    }
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
      path.push_back(i);
      if (!check(d.premises[i], path)) return false;
      path.pop_back();
    }
    return true;
  }

  const TripleCtx& gamma_;
  const ProofOptions& opts_;
  ProofVerdict v_;
};

}  // namespace

ProofVerdict check_proof(const TripleCtx& gamma, const Derivation& d, const ProofOptions& opts) {
  return ProofChecker(gamma, opts).run(d);
}

namespace {

Derivation leaf(Derivation::Rule r, Assertion pre, CommandPtr c, Assertion post) {
  Derivation d;
  d.rule = r;
  d.pre = std::move(pre);
  d.cmd = std::move(c);
  d.post = std::move(post);
  return d;
}

// Axiom instance for one command, framed on the right when needed.
Derivation axiom(const TripleCtx& gamma, const CommandPtr& c, const Assertion& pre, const Assertion& post) {
  Assertion want_pre, want_post;
  Derivation::Rule rule;
  if (c->kind == Command::Kind::Call) {
    auto it = std::find_if(gamma.begin(), gamma.end(), [&](const Triple& t) { return t.op == c->name; });
    if (it == gamma.end()) throw ShapeError("no context triple for '" + c->name + "'");
    want_pre = it->pre;
    want_post = it->post;
    rule = Derivation::Rule::Call;
  } else if (c->kind == Command::Kind::Write) {
    want_pre = mk_points_to_any(c->loc);
    want_post = mk_points_to(c->loc, c->value);
    rule = Derivation::Rule::Write;
  } else {
    throw ShapeError("annotated programs support module calls and heap writes; got " + to_string(*c));
  }
  if (alpha_equal(pre, want_pre) && alpha_equal(post, want_post)) return leaf(rule, pre, c, post);
  if (pre->kind == Node::Kind::Star && post->kind == Node::Kind::Star && alpha_equal(pre->rhs, post->rhs)) {
    Derivation inner = axiom(gamma, c, pre->lhs, post->lhs);
    Derivation d = leaf(Derivation::Rule::Frame, pre, c, post);
    d.frame = pre->rhs;
    d.premises.push_back(std::move(inner));
    return d;
  }
  // Leave the mismatch for the checker to report.
  return leaf(rule, pre, c, post);
}

Derivation consequence(Assertion pre, Derivation inner, Assertion post) {
  Derivation d = leaf(Derivation::Rule::Consequence, std::move(pre), inner.cmd, std::move(post));
  d.premises.push_back(std::move(inner));
  return d;
}

}  // namespace

Derivation build_derivation(const TripleCtx& gamma, std::string_view annotated, const std::set<std::string>& avars) {
  Cursor cur(detail::tokenize(annotated));
  std::vector<std::vector<Assertion>> groups(1);
  std::vector<CommandPtr> cmds;
  while (!cur.at(Tok::End)) {
    if (cur.accept(Tok::Semi)) continue;
    if (cur.accept(Tok::LBrace)) {
      detail::AssertionParser ap(cur, avars);
      groups.back().push_back(ap.assertion());
      cur.expect(Tok::RBrace, "'}'");
      continue;
    }
    if (groups.back().empty()) cur.fail("expected an assertion before the command");
    CommandParser cp(cur);
    cmds.push_back(cp.atom());
    groups.emplace_back();
  }
  if (cmds.empty()) throw ShapeError("annotated program has no commands");
  if (groups.back().empty()) throw ShapeError("annotated program must end with an assertion");

  std::vector<Derivation> steps;
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    const auto& before = groups[i];
    const auto& after = groups[i + 1];
    Derivation d = axiom(gamma, cmds[i], before.back(), after.front());
    // Extra assertions before the command are consequence steps into it.
    for (std::size_t k = before.size() - 1; k > 0; --k) {
      Assertion post = d.post;
      d = consequence(before[k - 1], std::move(d), post);
    }
    if (i + 1 == cmds.size()) {
      for (std::size_t k = 1; k < after.size(); ++k) {
        Assertion pre = d.pre;
        d = consequence(pre, std::move(d), after[k]);
      }
    }
    steps.push_back(std::move(d));
  }
  Derivation root = std::move(steps.back());
  for (std::size_t i = steps.size() - 1; i-- > 0;) {
    Derivation s = leaf(Derivation::Rule::Seq, steps[i].pre, c_seq(steps[i].cmd, root.cmd), root.post);
    s.premises.push_back(std::move(steps[i]));
    s.premises.push_back(std::move(root));
    root = std::move(s);
  }
  return root;
}

// ---------------------------------------------------------------------------
// Relational validity

std::string ValidityReport::summary(const TripleCtx& gamma) const {
  const std::string counts =
      std::to_string(pairs_checked) + " input pairs, " + std::to_string(frames_checked) + " frames";
  if (!violated) return "NoViolation (bounded: " + counts + ")";
  const Violation& v = *violation;
  auto out = [](const std::optional<Heap>& h) { return h ? to_string(*h) : std::string("err"); };
  std::string where = v.triple < 0 ? std::string("client triple")
                                   : "context triple {" + pretty(gamma[static_cast<std::size_t>(v.triple)].pre) + "} " +
                                         gamma[static_cast<std::size_t>(v.triple)].op + " {" +
                                         pretty(gamma[static_cast<std::size_t>(v.triple)].post) + "}";
  return "Violation in " + where + ": inputs (" + to_string(v.f) + ", " + to_string(v.g) + "), frame residue (" +
         to_string(v.frame_f) + ", " + to_string(v.frame_g) + "), outputs (" + out(v.out_f) + ", " + out(v.out_g) + ")";
}

ValidityReport triple_validity(const ModuleImpl& u1, const ModuleImpl& u2, const AssertEnv& rho, const VarEnv& eta,
                               const Assertion& pre, const Command& c, const Assertion& post,
                               const ValidityBudget& budget, const ValueDomain& dom) {
  if (rho.arity != 2) throw ShapeError("relational validity needs a binary environment");
  ValidityReport rep;
  const GenRel pre_r = interpret(pre, eta, rho, dom);
  const GenRel post_r = interpret(post, eta, rho, dom);
  const auto heaps = enumerate_heaps(budget.max_locs, budget.values, budget.max_cells);
  for (const Heap& f : heaps) {
    const auto f_parts = subheaps(f);
    for (const Heap& g : heaps) {
      ++rep.pairs_checked;
      const auto g_parts = subheaps(g);
      std::optional<std::pair<std::optional<Heap>, std::optional<Heap>>> outs;
      for (const Heap& p : f_parts) {
        for (const Heap& q : g_parts) {
          if (!member(pre_r, HeapTuple{p, q})) continue;
          ++rep.frames_checked;
          if (!outs) outs.emplace(exec(c, eta, u1, f), exec(c, eta, u2, g));
          const Heap rf = subtract(f, p);
          const Heap rg = subtract(g, q);
          const auto& [of, og] = *outs;
          const bool ok = of && og && extends(rf, *of) && extends(rg, *og) &&
                          member(post_r, HeapTuple{subtract(*of, rf), subtract(*og, rg)});
          if (!ok) {
            rep.violated = true;
            rep.violation = Violation{-1, f, g, rf, rg, of, og};
            return rep;
          }
        }
      }
    }
  }
  return rep;
}

ValidityReport two_validity_test(const TripleCtx& gamma, const ModuleImpl& u1, const ModuleImpl& u2,
                                 const AssertEnv& rho, const VarEnv& eta, const Assertion& pre, const Command& c,
                                 const Assertion& post, const ValidityBudget& budget, const ValueDomain& dom) {
  validate_context(gamma);
  ValidityReport total;
  auto absorb = [&](const ValidityReport& r) {
    total.pairs_checked += r.pairs_checked;
    total.frames_checked += r.frames_checked;
  };
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const Command call{Command::Kind::Call, gamma[i].op, nullptr, nullptr, nullptr, nullptr, nullptr};
    ValidityReport r = triple_validity(u1, u2, rho, eta, gamma[i].pre, call, gamma[i].post, budget, dom);
    absorb(r);
    if (r.violated) {
      total.violated = true;
      total.violation = r.violation;
      total.violation->triple = static_cast<int>(i);
      return total;
    }
  }
  ValidityReport r = triple_validity(u1, u2, rho, eta, pre, c, post, budget, dom);
  absorb(r);
  total.violated = r.violated;
  total.violation = r.violation;
  return total;
}

}  // namespace liftsl

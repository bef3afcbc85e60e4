#include "liftsl/assertion.hpp"

#include <functional>
#include <utility>

#include "liftsl/error.hpp"
#include "parser.hpp"

namespace liftsl {

// ---------------------------------------------------------------------------
// Expressions

ExprPtr lit(Val v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Lit;
  e->value = v;
  return e;
}

ExprPtr var(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Var;
  e->name = std::move(name);
  return e;
}

namespace {

ExprPtr binary(Expr::Kind k, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

}  // namespace

ExprPtr add(ExprPtr a, ExprPtr b) { return binary(Expr::Kind::Add, std::move(a), std::move(b)); }
ExprPtr sub(ExprPtr a, ExprPtr b) { return binary(Expr::Kind::Sub, std::move(a), std::move(b)); }
ExprPtr neg(ExprPtr a) { return binary(Expr::Kind::Neg, std::move(a), nullptr); }

Val eval(const Expr& e, const VarEnv& eta) {
  switch (e.kind) {
    case Expr::Kind::Lit:
      return e.value;
    case Expr::Kind::Var: {
      auto it = eta.find(e.name);
      if (it == eta.end()) throw ShapeError("unbound variable '" + e.name + "'");
      return it->second;
    }
    case Expr::Kind::Add:
      return eval(*e.lhs, eta) + eval(*e.rhs, eta);
    case Expr::Kind::Sub:
      return eval(*e.lhs, eta) - eval(*e.rhs, eta);
    case Expr::Kind::Neg:
      return -eval(*e.lhs, eta);
  }
  return 0;
}

void free_vars(const Expr& e, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::Var) out.insert(e.name);
  if (e.lhs) free_vars(*e.lhs, out);
  if (e.rhs) free_vars(*e.rhs, out);
}

bool same_expr(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Lit:
      return a.value == b.value;
    case Expr::Kind::Var:
      return a.name == b.name;
    case Expr::Kind::Neg:
      return same_expr(*a.lhs, *b.lhs);
    default:
      return same_expr(*a.lhs, *b.lhs) && same_expr(*a.rhs, *b.rhs);
  }
}

ExprPtr rename_var(const ExprPtr& e, const std::string& from, const std::string& to) {
  switch (e->kind) {
    case Expr::Kind::Lit:
      return e;
    case Expr::Kind::Var:
      return e->name == from ? var(to) : e;
    case Expr::Kind::Neg:
      return neg(rename_var(e->lhs, from, to));
    default:
      return binary(e->kind, rename_var(e->lhs, from, to), rename_var(e->rhs, from, to));
  }
}

namespace {

std::string expr_string(const Expr& e, int ctx) {
  switch (e.kind) {
    case Expr::Kind::Lit:
      return std::to_string(e.value);
    case Expr::Kind::Var:
      return e.name;
    case Expr::Kind::Neg: {
      // A plain literal is wrapped so it does not re-read as a negative literal.
      const Expr& inner = *e.lhs;
      if (inner.kind == Expr::Kind::Lit && inner.value >= 0) return "-(" + expr_string(inner, 0) + ")";
      return "-" + expr_string(inner, 2);
    }
    default: {
      std::string s = expr_string(*e.lhs, 1) + (e.kind == Expr::Kind::Add ? " + " : " - ") +
                      expr_string(*e.rhs, 2);
      return ctx > 1 ? "(" + s + ")" : s;
    }
  }
}

}  // namespace

std::string to_string(const Expr& e) { return expr_string(e, 0); }

bool compare(CmpOp op, Val a, Val b) {
  switch (op) {
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return a != b;
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Gt: return a > b;
    case CmpOp::Ge: return a >= b;
  }
  return false;
}

CmpOp negate(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return CmpOp::Ne;
    case CmpOp::Ne: return CmpOp::Eq;
    case CmpOp::Lt: return CmpOp::Ge;
    case CmpOp::Le: return CmpOp::Gt;
    case CmpOp::Gt: return CmpOp::Le;
    case CmpOp::Ge: return CmpOp::Lt;
  }
  return op;
}

const char* to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Assertion constructors

namespace {

Assertion make(Node::Kind k, std::string name = {}, Assertion l = nullptr, Assertion r = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->name = std::move(name);
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

}  // namespace

Assertion mk_prim(Prim p) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Prim;
  n->prim = std::move(p);
  return n;
}

Assertion mk_points_to(ExprPtr loc, ExprPtr value) {
  Prim p;
  p.kind = Prim::Kind::PointsTo;
  p.lhs = std::move(loc);
  p.rhs = std::move(value);
  return mk_prim(std::move(p));
}

Assertion mk_points_to_any(ExprPtr loc, std::string bound) {
  auto body = mk_points_to(std::move(loc), var(bound));
  return mk_exists(std::move(bound), std::move(body));
}

Assertion mk_nonempty() {
  Prim p;
  p.kind = Prim::Kind::NonEmpty;
  return mk_prim(std::move(p));
}

Assertion mk_compare(CmpOp op, ExprPtr a, ExprPtr b) {
  Prim p;
  p.kind = Prim::Kind::Compare;
  p.op = op;
  p.lhs = std::move(a);
  p.rhs = std::move(b);
  return mk_prim(std::move(p));
}

Assertion mk_avar(std::string name) { return make(Node::Kind::AVar, std::move(name)); }
Assertion mk_star(Assertion a, Assertion b) { return make(Node::Kind::Star, {}, std::move(a), std::move(b)); }
Assertion mk_and(Assertion a, Assertion b) { return make(Node::Kind::And, {}, std::move(a), std::move(b)); }
Assertion mk_or(Assertion a, Assertion b) { return make(Node::Kind::Or, {}, std::move(a), std::move(b)); }

Assertion mk_true() {
  static const Assertion t = make(Node::Kind::True);
  return t;
}

Assertion mk_false() {
  static const Assertion f = make(Node::Kind::False);
  return f;
}

Assertion mk_forall(std::string x, Assertion body) {
  return make(Node::Kind::Forall, std::move(x), std::move(body));
}

Assertion mk_exists(std::string x, Assertion body) {
  return make(Node::Kind::Exists, std::move(x), std::move(body));
}

namespace {

Assertion fold(const std::vector<Assertion>& parts, Assertion unit,
               Assertion (*join)(Assertion, Assertion)) {
  if (parts.empty()) return unit;
  Assertion acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = join(acc, parts[i]);
  return acc;
}

}  // namespace

Assertion fold_star(const std::vector<Assertion>& parts, Assertion unit) { return fold(parts, std::move(unit), mk_star); }
Assertion fold_and(const std::vector<Assertion>& parts, Assertion unit) { return fold(parts, std::move(unit), mk_and); }
Assertion fold_or(const std::vector<Assertion>& parts, Assertion unit) { return fold(parts, std::move(unit), mk_or); }

// ---------------------------------------------------------------------------
// Traversals

namespace {

void collect_free(const Node& n, std::set<std::string>& out, std::multiset<std::string>& bound) {
  switch (n.kind) {
    case Node::Kind::Prim: {
      std::set<std::string> vs;
      if (n.prim.lhs) free_vars(*n.prim.lhs, vs);
      if (n.prim.rhs) free_vars(*n.prim.rhs, vs);
      for (const auto& v : vs) {
        if (!bound.count(v)) out.insert(v);
      }
      return;
    }
    case Node::Kind::Forall:
    case Node::Kind::Exists: {
      auto it = bound.insert(n.name);
      collect_free(*n.lhs, out, bound);
      bound.erase(it);
      return;
    }
    default:
      if (n.lhs) collect_free(*n.lhs, out, bound);
      if (n.rhs) collect_free(*n.rhs, out, bound);
  }
}

void collect_avars(const Node& n, std::set<std::string>& out) {
  if (n.kind == Node::Kind::AVar) out.insert(n.name);
  if (n.lhs) collect_avars(*n.lhs, out);
  if (n.rhs) collect_avars(*n.rhs, out);
}

}  // namespace

std::set<std::string> free_vars(const Assertion& a) {
  std::set<std::string> out;
  std::multiset<std::string> bound;
  collect_free(*a, out, bound);
  return out;
}

bool free_in(const std::string& x, const Assertion& a) { return free_vars(a).count(x) > 0; }

std::set<std::string> avars_of(const Assertion& a) {
  std::set<std::string> out;
  collect_avars(*a, out);
  return out;
}

bool has_avars(const Assertion& a) {
  if (a->kind == Node::Kind::AVar) return true;
  return (a->lhs && has_avars(a->lhs)) || (a->rhs && has_avars(a->rhs));
}

Assertion rename_free(const Assertion& a, const std::string& from, const std::string& to) {
  switch (a->kind) {
    case Node::Kind::Prim: {
      Prim p = a->prim;
      if (p.lhs) p.lhs = rename_var(p.lhs, from, to);
      if (p.rhs) p.rhs = rename_var(p.rhs, from, to);
      return mk_prim(std::move(p));
    }
    case Node::Kind::Forall:
    case Node::Kind::Exists:
      if (a->name == from) return a;
      return make(a->kind, a->name, rename_free(a->lhs, from, to));
    case Node::Kind::Star:
    case Node::Kind::And:
    case Node::Kind::Or:
      return make(a->kind, {}, rename_free(a->lhs, from, to), rename_free(a->rhs, from, to));
    default:
      return a;
  }
}

namespace {

using Binding = std::vector<std::pair<std::string, std::string>>;

bool alpha_expr(const Expr& a, const Expr& b, const Binding& env) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Lit:
      return a.value == b.value;
    case Expr::Kind::Var:
      for (auto it = env.rbegin(); it != env.rend(); ++it) {
        const bool l = it->first == a.name, r = it->second == b.name;
        if (l || r) return l && r;
      }
      return a.name == b.name;
    case Expr::Kind::Neg:
      return alpha_expr(*a.lhs, *b.lhs, env);
    default:
      return alpha_expr(*a.lhs, *b.lhs, env) && alpha_expr(*a.rhs, *b.rhs, env);
  }
}

bool alpha(const Node& a, const Node& b, Binding& env) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Node::Kind::Prim: {
      const Prim &p = a.prim, &q = b.prim;
      if (p.kind != q.kind || p.op != q.op) return false;
      if (p.kind == Prim::Kind::NonEmpty) return true;
      return alpha_expr(*p.lhs, *q.lhs, env) && alpha_expr(*p.rhs, *q.rhs, env);
    }
    case Node::Kind::AVar:
      return a.name == b.name;
    case Node::Kind::True:
    case Node::Kind::False:
      return true;
    case Node::Kind::Forall:
    case Node::Kind::Exists: {
      env.emplace_back(a.name, b.name);
      const bool ok = alpha(*a.lhs, *b.lhs, env);
      env.pop_back();
      return ok;
    }
    default:
      return alpha(*a.lhs, *b.lhs, env) && alpha(*a.rhs, *b.rhs, env);
  }
}

}  // namespace

bool alpha_equal(const Assertion& a, const Assertion& b) {
  Binding env;
  return alpha(*a, *b, env);
}

std::size_t node_count(const Assertion& a) {
  std::size_t n = 1;
  if (a->lhs) n += node_count(a->lhs);
  if (a->rhs) n += node_count(a->rhs);
  return n;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

constexpr int kPrecOr = 1, kPrecAnd = 2, kPrecStar = 3;

// ∃y. E ↪ y with a generated name prints back as the wildcard form.
bool is_wildcard(const Node& n) {
  if (n.kind != Node::Kind::Exists || n.name.empty() || n.name[0] != '_') return false;
  const Node& body = *n.lhs;
  if (body.kind != Node::Kind::Prim || body.prim.kind != Prim::Kind::PointsTo) return false;
  const Expr& v = *body.prim.rhs;
  if (v.kind != Expr::Kind::Var || v.name != n.name) return false;
  std::set<std::string> loc_vars;
  free_vars(*body.prim.lhs, loc_vars);
  return !loc_vars.count(n.name);
}

std::string prim_string(const Prim& p) {
  switch (p.kind) {
    case Prim::Kind::NonEmpty:
      return "-";
    case Prim::Kind::PointsTo:
      return to_string(*p.lhs) + " |-> " + to_string(*p.rhs);
    case Prim::Kind::Compare:
      return to_string(*p.lhs) + " " + to_string(p.op) + " " + to_string(*p.rhs);
  }
  return "?";
}

std::string print(const Node& n, int ctx, bool rightmost) {
  switch (n.kind) {
    case Node::Kind::Prim:
      return prim_string(n.prim);
    case Node::Kind::AVar:
      return n.name;
    case Node::Kind::True:
      return "true";
    case Node::Kind::False:
      return "false";
    case Node::Kind::Forall:
    case Node::Kind::Exists: {
      if (is_wildcard(n)) return to_string(*n.lhs->prim.lhs) + " |-> _";
      const bool paren = ctx > 0 && !rightmost;
      std::string s = (n.kind == Node::Kind::Forall ? "ALL " : "EX ") + n.name + ". " +
                      print(*n.lhs, 0, true);
      return paren ? "(" + s + ")" : s;
    }
    case Node::Kind::Star:
    case Node::Kind::And:
    case Node::Kind::Or: {
      const int p = n.kind == Node::Kind::Or ? kPrecOr : n.kind == Node::Kind::And ? kPrecAnd : kPrecStar;
      const char* op = n.kind == Node::Kind::Or ? " \\/ " : n.kind == Node::Kind::And ? " /\\ " : " * ";
      const bool paren = p < ctx;
      std::string s = print(*n.lhs, p, false) + op + print(*n.rhs, p + 1, paren || rightmost);
      return paren ? "(" + s + ")" : s;
    }
  }
  return "?";
}

}  // namespace

std::string pretty(const Assertion& a) { return print(*a, 0, true); }

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

std::string AssertionParser::bound_name() {
  const Token& t = cur_.expect(Tok::Ident, "bound variable");
  if (is_keyword(t.text) || avars_.count(t.text) || t.text[0] == '_') {
    throw ParseError("'" + t.text + "' cannot be bound", t.line, t.col);
  }
  return t.text;
}

Assertion AssertionParser::assertion() {
  Assertion a = conj();
  while (cur_.accept(Tok::Vee)) a = mk_or(a, conj());
  return a;
}

Assertion AssertionParser::conj() {
  Assertion a = sep();
  while (cur_.accept(Tok::Wedge)) a = mk_and(a, sep());
  return a;
}

Assertion AssertionParser::sep() {
  Assertion a = unit();
  while (cur_.accept(Tok::Star)) a = mk_star(a, unit());
  return a;
}

Assertion AssertionParser::unit() {
  if (cur_.at_keyword("ALL") || cur_.at_keyword("EX")) {
    const bool all = cur_.next().text == "ALL";
    std::string x = bound_name();
    cur_.expect(Tok::Dot, "'.' after bound variable");
    Assertion body = assertion();
    return all ? mk_forall(std::move(x), body) : mk_exists(std::move(x), body);
  }
  if (cur_.accept_keyword("true")) return mk_true();
  if (cur_.accept_keyword("false")) return mk_false();
  if (cur_.at(Tok::Ident) && avars_.count(cur_.peek().text)) return mk_avar(cur_.next().text);
  if (cur_.at(Tok::LParen)) {
    const auto mark = cur_.save();
    try {
      cur_.next();
      Assertion a = assertion();
      cur_.expect(Tok::RParen, "')'");
      if (!cur_.at(Tok::PointsTo) && !at_comparison_op()) return a;
    } catch (const ParseError&) {
    }
    cur_.restore(mark);
  }
  if (Assertion a = try_expr_prim()) return a;
  if (cur_.accept(Tok::Minus)) return mk_nonempty();
  cur_.fail("expected assertion");
}

bool AssertionParser::at_comparison_op() const {
  switch (cur_.peek().kind) {
    case Tok::Eq: case Tok::Ne: case Tok::Lt: case Tok::Le: case Tok::Gt: case Tok::Ge:
      return true;
    default:
      return false;
  }
}

Prim AssertionParser::comparison() {
  Prim p;
  p.kind = Prim::Kind::Compare;
  p.lhs = expr();
  if (!at_comparison_op()) cur_.fail("expected comparison operator");
  switch (cur_.next().kind) {
    case Tok::Eq: p.op = CmpOp::Eq; break;
    case Tok::Ne: p.op = CmpOp::Ne; break;
    case Tok::Lt: p.op = CmpOp::Lt; break;
    case Tok::Le: p.op = CmpOp::Le; break;
    case Tok::Gt: p.op = CmpOp::Gt; break;
    default: p.op = CmpOp::Ge; break;
  }
  p.rhs = expr();
  return p;
}

Assertion AssertionParser::try_expr_prim() {
  const auto mark = cur_.save();
  ExprPtr e;
  try {
    e = expr();
  } catch (const ParseError&) {
    cur_.restore(mark);
    return nullptr;
  }
  if (cur_.accept(Tok::PointsTo)) {
    if (cur_.accept(Tok::Underscore)) return mk_points_to_any(e, "_" + std::to_string(++wildcards_));
    return mk_points_to(e, expr());
  }
  if (at_comparison_op()) {
    cur_.restore(mark);
    return mk_prim(comparison());
  }
  cur_.restore(mark);
  return nullptr;
}

ExprPtr AssertionParser::expr() {
  ExprPtr e = expr_atom();
  for (;;) {
    if (cur_.accept(Tok::Plus)) {
      e = add(e, expr_atom());
    } else if (cur_.accept(Tok::Minus)) {
      e = sub(e, expr_atom());
    } else {
      return e;
    }
  }
}

ExprPtr AssertionParser::expr_atom() {
  if (cur_.at(Tok::Int)) return lit(cur_.next().value);
  if (cur_.accept(Tok::Minus)) {
    if (cur_.at(Tok::Int)) return lit(-cur_.next().value);
    return neg(expr_atom());
  }
  if (cur_.accept(Tok::LParen)) {
    ExprPtr e = expr();
    cur_.expect(Tok::RParen, "')'");
    return e;
  }
  if (cur_.at(Tok::Ident)) {
    const Token& t = cur_.peek();
    if (is_keyword(t.text) || avars_.count(t.text) || t.text[0] == '_') cur_.fail("expected expression");
    return var(cur_.next().text);
  }
  cur_.fail("expected expression");
}

}  // namespace detail

Assertion parse_assertion(std::string_view text, const std::set<std::string>& avars) {
  detail::Cursor cur(detail::tokenize(text));
  detail::AssertionParser p(cur, avars);
  Assertion a = p.assertion();
  if (!cur.at(detail::Tok::End)) cur.fail("unexpected input after assertion");
  return a;
}

VarEnv parse_var_env(std::string_view text) {
  detail::Cursor cur(detail::tokenize(text));
  VarEnv eta;
  if (cur.at(detail::Tok::End)) return eta;
  do {
    const auto& name = cur.expect(detail::Tok::Ident, "variable name");
    std::string x = name.text;
    cur.expect(detail::Tok::Eq, "'='");
    const bool minus = cur.accept(detail::Tok::Minus);
    const Val v = cur.expect(detail::Tok::Int, "integer").value;
    eta[x] = minus ? -v : v;
  } while (cur.accept(detail::Tok::Comma));
  if (!cur.at(detail::Tok::End)) cur.fail("unexpected input in variable environment");
  return eta;
}

std::string to_string(const VarEnv& eta) {
  std::string out;
  for (const auto& [x, v] : eta) {
    if (!out.empty()) out += ", ";
    out += x + "=" + std::to_string(v);
  }
  return out;
}

}  // namespace liftsl

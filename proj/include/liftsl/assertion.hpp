#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "liftsl/heap.hpp"

namespace liftsl {

// ---------------------------------------------------------------------------
// Expressions

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Lit, Var, Add, Sub, Neg };
  Kind kind = Kind::Lit;
  Val value = 0;
  std::string name;
  ExprPtr lhs, rhs;
};

ExprPtr lit(Val v);
ExprPtr var(std::string name);
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr neg(ExprPtr a);

using VarEnv = std::map<std::string, Val>;

/// Throws ShapeError on an unbound variable.
Val eval(const Expr& e, const VarEnv& eta);
void free_vars(const Expr& e, std::set<std::string>& out);
bool same_expr(const Expr& a, const Expr& b);
ExprPtr rename_var(const ExprPtr& e, const std::string& from, const std::string& to);
std::string to_string(const Expr& e);

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };
bool compare(CmpOp op, Val a, Val b);
CmpOp negate(CmpOp op);
const char* to_string(CmpOp op);

// ---------------------------------------------------------------------------
// Assertions

/// Heap-level primitive. Points-to and the nonempty-heap atom are the core
/// forms; Compare is a heap-independent comparison (true everywhere or
/// nowhere), added as an extension kind.
struct Prim {
  enum class Kind { PointsTo, NonEmpty, Compare };
  Kind kind = Kind::NonEmpty;
  ExprPtr lhs, rhs;
  CmpOp op = CmpOp::Eq;
};

struct Node;
using Assertion = std::shared_ptr<const Node>;

struct Node {
  enum class Kind { Prim, AVar, Star, And, Or, True, False, Forall, Exists };
  Kind kind = Kind::True;
  Prim prim;
  /// Assertion-variable name, or the bound variable of a quantifier.
  std::string name;
  Assertion lhs, rhs;  // quantifier body lives in lhs
};

Assertion mk_prim(Prim p);
Assertion mk_points_to(ExprPtr loc, ExprPtr value);
/// E ↪ _ , i.e. ∃y. E ↪ y for a fresh y named `bound`.
Assertion mk_points_to_any(ExprPtr loc, std::string bound = "_0");
Assertion mk_nonempty();
Assertion mk_compare(CmpOp op, ExprPtr a, ExprPtr b);
Assertion mk_avar(std::string name);
Assertion mk_star(Assertion a, Assertion b);
Assertion mk_and(Assertion a, Assertion b);
Assertion mk_or(Assertion a, Assertion b);
Assertion mk_true();
Assertion mk_false();
Assertion mk_forall(std::string x, Assertion body);
Assertion mk_exists(std::string x, Assertion body);

/// Left-nested fold; an empty list yields `unit`.
Assertion fold_star(const std::vector<Assertion>& parts, Assertion unit);
Assertion fold_and(const std::vector<Assertion>& parts, Assertion unit);
Assertion fold_or(const std::vector<Assertion>& parts, Assertion unit);

std::set<std::string> free_vars(const Assertion& a);
bool free_in(const std::string& x, const Assertion& a);
/// Assertion variables occurring in `a`, as a sorted set.
std::set<std::string> avars_of(const Assertion& a);
bool has_avars(const Assertion& a);
/// Renames free occurrences of normal variable `from`; `to` must be fresh.
Assertion rename_free(const Assertion& a, const std::string& from, const std::string& to);
/// Equality up to renaming of bound normal variables.
bool alpha_equal(const Assertion& a, const Assertion& b);
std::size_t node_count(const Assertion& a);

std::string pretty(const Assertion& a);

/// Parses one assertion. Identifiers listed in `avars` are assertion
/// variables; every other identifier is a normal variable. Throws ParseError.
Assertion parse_assertion(std::string_view text, const std::set<std::string>& avars);

/// Parses "x=3, y=-1".
VarEnv parse_var_env(std::string_view text);
std::string to_string(const VarEnv& eta);

}  // namespace liftsl

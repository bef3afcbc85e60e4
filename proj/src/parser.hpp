#pragma once

// Recursive-descent parser for expressions and assertions over a token
// Cursor. Reused by the command and file parsers.

#include <set>
#include <string>

#include "lexer.hpp"
#include "liftsl/assertion.hpp"

namespace liftsl::detail {

class AssertionParser {
 public:
  AssertionParser(Cursor& cur, const std::set<std::string>& avars) : cur_(cur), avars_(avars) {}

  Assertion assertion();
  ExprPtr expr();
  /// One comparison E op F.
  Prim comparison();
  bool at_comparison_op() const;

 private:
  Assertion conj();
  Assertion sep();
  Assertion unit();
  /// Points-to or comparison starting with an expression; nullptr (with the
  /// cursor restored) when the input does not have that shape.
  Assertion try_expr_prim();
  ExprPtr expr_atom();
  std::string bound_name();

  Cursor& cur_;
  const std::set<std::string>& avars_;
  int wildcards_ = 0;
};

}  // namespace liftsl::detail

#pragma once

#include <set>
#include <string>
#include <string_view>

#include "liftsl/assertion.hpp"

namespace liftsl {

/// An implication read from a file:
///
///   avars: a b
///   env: x=1          (optional)
///   1|->_ /\ a*b |= 1|->_*a \/ 1|->_*b
///
/// The implication may also be given as two assertions on separate lines.
/// `#` starts a comment.
struct ImplicationInput {
  std::set<std::string> avars;
  VarEnv env;
  Assertion lhs, rhs;
};

/// Throws ParseError with line numbers of the original text.
ImplicationInput parse_implication_input(std::string_view text);

}  // namespace liftsl

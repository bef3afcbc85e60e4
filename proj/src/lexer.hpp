#pragma once

// Tokenizer shared by the assertion, command and file-format parsers.

#include <string>
#include <string_view>
#include <vector>

#include "liftsl/error.hpp"
#include "liftsl/heap.hpp"

namespace liftsl::detail {

enum class Tok {
  Ident, Int, PointsTo, Underscore, Wedge, Vee, Star, LParen, RParen, LBrace, RBrace,
  LBracket, RBracket, Dot, Comma, Plus, Minus, Eq, Ne, Lt, Le, Gt, Ge, Assign, Semi,
  AndAnd, OrOr, Bang, Entails, Arrow, Colon, End
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  Val value = 0;
  int line = 1;
  int col = 1;
};

std::vector<Token> tokenize(std::string_view src, int first_line = 1);

/// Token stream with save/restore for the few places the grammar needs
/// backtracking ('(' and '-' can start either an assertion or an expression).
class Cursor {
 public:
  explicit Cursor(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_keyword(std::string_view kw) const { return at(Tok::Ident) && peek().text == kw; }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool accept(Tok k) {
    if (!at(k)) return false;
    next();
    return true;
  }
  bool accept_keyword(std::string_view kw) {
    if (!at_keyword(kw)) return false;
    next();
    return true;
  }
  const Token& expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what);
    return next();
  }
  void expect_keyword(std::string_view kw) {
    if (!accept_keyword(kw)) fail("expected '" + std::string(kw) + "'");
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    const std::string near = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + " near " + near, t.line, t.col);
  }

  std::size_t save() const { return pos_; }
  void restore(std::size_t p) { pos_ = p; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

bool is_keyword(std::string_view word);

}  // namespace liftsl::detail

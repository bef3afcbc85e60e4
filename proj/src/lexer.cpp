#include "lexer.hpp"

#include <array>
#include <cctype>
#include <utility>

namespace liftsl::detail {

namespace {

struct Spelling {
  std::string_view text;
  Tok kind;
};

// Longest spellings first so that "|->" wins over "|=" and "<=" over "<".
constexpr std::array kSpellings{
    Spelling{"|->", Tok::PointsTo}, Spelling{"↪", Tok::PointsTo}, Spelling{"↦", Tok::PointsTo},
    Spelling{"/\\", Tok::Wedge},    Spelling{"∧", Tok::Wedge},    Spelling{"\\/", Tok::Vee},
    Spelling{"∨", Tok::Vee},        Spelling{"∗", Tok::Star},     Spelling{"−", Tok::Minus},
    Spelling{":=", Tok::Assign},    Spelling{"&&", Tok::AndAnd},  Spelling{"||", Tok::OrOr},
    Spelling{"|=", Tok::Entails},   Spelling{"⊨", Tok::Entails},  Spelling{"=>", Tok::Arrow},
    Spelling{"==", Tok::Eq},        Spelling{"!=", Tok::Ne},      Spelling{"<=", Tok::Le},
    Spelling{">=", Tok::Ge},        Spelling{"*", Tok::Star},     Spelling{"(", Tok::LParen},
    Spelling{")", Tok::RParen},     Spelling{"{", Tok::LBrace},   Spelling{"}", Tok::RBrace},
    Spelling{"[", Tok::LBracket},   Spelling{"]", Tok::RBracket}, Spelling{".", Tok::Dot},
    Spelling{",", Tok::Comma},      Spelling{"+", Tok::Plus},     Spelling{"-", Tok::Minus},
    Spelling{"=", Tok::Eq},         Spelling{"<", Tok::Lt},       Spelling{">", Tok::Gt},
    Spelling{";", Tok::Semi},       Spelling{"!", Tok::Bang},     Spelling{":", Tok::Colon},
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

}  // namespace

bool is_keyword(std::string_view w) {
  static constexpr std::array kKeywords{"ALL", "EX",   "true", "false", "let",
                                        "in",  "if",   "then", "else",  "skip"};
  for (const char* k : kKeywords) {
    if (w == k) return true;
  }
  return false;
}

std::vector<Token> tokenize(std::string_view src, int first_line) {
  std::vector<Token> out;
  int line = first_line;
  std::size_t line_start = 0;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      ++line;
      line_start = ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    Token t;
    t.line = line;
    t.col = static_cast<int>(i - line_start) + 1;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Int;
      t.text = std::string(src.substr(i, j - i));
      if (t.text.size() > 15) throw ParseError("integer literal too large", t.line, t.col);
      t.value = std::stoll(t.text);
      i = j;
    } else if (ident_char(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      t.text = std::string(src.substr(i, j - i));
      t.kind = t.text == "_" ? Tok::Underscore : Tok::Ident;
      i = j;
    } else {
      bool matched = false;
      for (const auto& s : kSpellings) {
        if (src.substr(i, s.text.size()) == s.text) {
          t.kind = s.kind;
          t.text = std::string(s.text);
          i += s.text.size();
          matched = true;
          break;
        }
      }
      if (!matched) {
        throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.col);
      }
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.col = static_cast<int>(i - line_start) + 1;
  out.push_back(end);
  return out;
}

}  // namespace liftsl::detail

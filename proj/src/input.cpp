#include "liftsl/input.hpp"

#include <sstream>

#include "lexer.hpp"
#include "parser.hpp"

namespace liftsl {

namespace {

std::string strip_comment(std::string line) {
  if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
  return line;
}

bool header(const std::string& line, const char* name, std::string& rest) {
  const std::string key = std::string(name) + ":";
  const auto start = line.find_first_not_of(" \t");
  if (start == std::string::npos || line.compare(start, key.size(), key) != 0) return false;
  rest = line.substr(start + key.size());
  return true;
}

}  // namespace

ImplicationInput parse_implication_input(std::string_view text) {
  ImplicationInput out;
  std::istringstream in{std::string(text)};
  std::string line, rest, body;
  int no = 0;
  bool body_started = false;
  while (std::getline(in, line)) {
    ++no;
    line = strip_comment(line);
    if (!body_started && header(line, "avars", rest)) {
      for (char& c : rest)
        if (c == ',') c = ' ';
      std::istringstream words(rest);
      std::string w;
      while (words >> w) out.avars.insert(w);
      body += '\n';
      continue;
    }
    if (!body_started && header(line, "env", rest)) {
      try {
        out.env = parse_var_env(rest);
      } catch (const ParseError& e) {
        throw ParseError(std::string("bad env: ") + e.what(), no, 1);
      }
      body += '\n';
      continue;
    }
    if (line.find_first_not_of(" \t\r") != std::string::npos) body_started = true;
    body += line + '\n';
  }

  detail::Cursor cur(detail::tokenize(body));
  if (cur.at(detail::Tok::End)) cur.fail("expected an implication");
  detail::AssertionParser p(cur, out.avars);
  out.lhs = p.assertion();
  cur.accept(detail::Tok::Entails);
  if (cur.at(detail::Tok::End)) cur.fail("expected the right-hand side");
  out.rhs = p.assertion();
  if (!cur.at(detail::Tok::End)) cur.fail("unexpected input after the implication");
  return out;
}

}  // namespace liftsl

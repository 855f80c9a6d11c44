#include "lexer.hpp"

#include <array>
#include <cctype>

#include "invh/error.hpp"

namespace invh::detail {

namespace {

// Longest match first.
constexpr std::array<std::string_view, 32> kPuncts = {
    "&&", "||", "==", "!=", "<=", ">=", "+=", "-=", "*=", "/=", "%=",
    "++", "--", "(",  ")",  "{",  "}",  ";",  ":",  "@",  ",",  "=",
    "<",  ">",  "+",  "-",  "*",  "/",  "%",  "!",  "&",  "|",
};

}  // namespace

bool is_keyword(std::string_view word) {
  static constexpr std::array<std::string_view, 10> kWords = {
      "int", "if", "else", "while", "assert", "assume", "skip", "nondet", "true", "false"};
  for (auto w : kWords) {
    if (w == word) return true;
  }
  return false;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  int column = 1;
  std::size_t i = 0;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };

  while (i < text.size()) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (text.substr(i, 2) == "//") {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }

    Token tok;
    tok.line = line;
    tok.column = column;

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
        ++j;
      }
      tok.kind = Token::Kind::Ident;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      tok.kind = Token::Kind::Int;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }

    bool matched = false;
    for (auto p : kPuncts) {
      if (text.substr(i, p.size()) == p) {
        tok.kind = Token::Kind::Punct;
        tok.text = std::string(p);
        advance(p.size());
        out.push_back(std::move(tok));
        matched = true;
        break;
      }
    }
    if (!matched) {
      throw SyntaxError(line, column, std::string("unexpected character '") + c + "'");
    }
  }

  Token end;
  end.kind = Token::Kind::End;
  end.line = line;
  end.column = column;
  out.push_back(end);
  return out;
}

}  // namespace invh::detail

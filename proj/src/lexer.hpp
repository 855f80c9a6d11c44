#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace invh::detail {

struct Token {
  enum class Kind { Ident, Int, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 1;
  int column = 1;

  bool is(std::string_view punct) const {
    return kind == Kind::Punct && text == punct;
  }
  bool is_word(std::string_view word) const {
    return kind == Kind::Ident && text == word;
  }
};

/// Splits MiniWhile text into tokens. `//` comments run to end of line.
/// Throws SyntaxError on characters outside the language.
std::vector<Token> tokenize(std::string_view text);

bool is_keyword(std::string_view word);

}  // namespace invh::detail

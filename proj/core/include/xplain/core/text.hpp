#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace xplain {

struct Token {
  std::string text;
  int position = 0;
  bool operator==(const Token&) const = default;
};

// Lowercased maximal runs of ASCII letters/digits; every other ASCII byte is a
// separator. Bytes >= 0x80 are kept inside tokens so UTF-8 words survive.
std::vector<Token> tokenize(std::string_view text);

// Unit identifier of a token occurrence, e.g. "late@3".
std::string token_unit_id(const Token& token);

// Tokens joined by single spaces; tokenize() of the result reproduces them.
std::string join_tokens(const std::vector<Token>& tokens);

}  // namespace xplain

#pragma once

#include "tmlcost/lang/ast.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace tmlcost::lang {

enum class Tok {
  Ident, Number, LParen, RParen, LBrace, RBrace, Semi, Comma, Assign, Bang, Dot,
  Lt, Gt, Le, Ge, Plus, Minus, Star, Slash, End
};

struct Token {
  Tok kind;
  std::string text;
  SourceLoc loc;
};

/// Splits `src` into tokens; `//` comments run to end of line.
std::vector<Token> tokenize(std::string_view src);

const char* tok_name(Tok t);

}  // namespace tmlcost::lang

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mondet/dsl.hpp"

namespace mondet::dsl_detail {

enum class Tok {
    Ident,
    Number,
    Quoted,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Bar,
    Slash,
    Define,  // :=
    If,      // :-
    Arrow,   // ->
    End,
};

const char* tokName(Tok t);

struct Token {
    Tok kind = Tok::End;
    std::string text;
    SourcePos pos;
};

// Skips whitespace and `#` comments. PARSE_ERROR on stray characters or
// unterminated quotes.
std::vector<Token> lex(std::string_view text);

bool isVariableName(std::string_view s);
bool isNullName(std::string_view s);
bool isConstantName(std::string_view s);
bool isIdentifier(std::string_view s);

} // namespace mondet::dsl_detail

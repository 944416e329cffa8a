#include "lexer.hpp"

#include <cctype>

namespace mondet::dsl_detail {

const char* tokName(Tok t) {
    switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::Quoted: return "quoted constant";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Bar: return "'|'";
    case Tok::Slash: return "'/'";
    case Tok::Define: return "':='";
    case Tok::If: return "':-'";
    case Tok::Arrow: return "'->'";
    case Tok::End: return "end of input";
    }
    return "?";
}

namespace {

bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool identChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

} // namespace

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    size_t i = 0, line = 1, col = 1;
    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        Token tok;
        tok.pos = {line, col};
        size_t start = i;
        if (identStart(c)) {
            size_t j = i;
            while (j < text.size() && identChar(text[j])) ++j;
            tok.kind = Tok::Ident;
            tok.text = std::string(text.substr(start, j - start));
            advance(j - start);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < text.size() && identChar(text[j])) ++j;
            tok.kind = Tok::Number;
            tok.text = std::string(text.substr(start, j - start));
            advance(j - start);
        } else if (c == '\'') {
            size_t j = i + 1;
            std::string value;
            while (j < text.size() && text[j] != '\'' && text[j] != '\n') {
                if (text[j] == '\\' && j + 1 < text.size()) ++j;
                value += text[j++];
            }
            if (j >= text.size() || text[j] != '\'')
                throw DslError(ErrorCode::ParseError, tok.pos, "expected closing quote");
            tok.kind = Tok::Quoted;
            tok.text = value;
            advance(j + 1 - start);
        } else {
            auto two = text.substr(i, 2);
            if (two == ":=") tok.kind = Tok::Define;
            else if (two == ":-") tok.kind = Tok::If;
            else if (two == "->") tok.kind = Tok::Arrow;
            if (tok.kind != Tok::End) {
                tok.text = std::string(two);
                advance(2);
            } else {
                switch (c) {
                case '(': tok.kind = Tok::LParen; break;
                case ')': tok.kind = Tok::RParen; break;
                case '{': tok.kind = Tok::LBrace; break;
                case '}': tok.kind = Tok::RBrace; break;
                case ',': tok.kind = Tok::Comma; break;
                case '.': tok.kind = Tok::Dot; break;
                case '|': tok.kind = Tok::Bar; break;
                case '/': tok.kind = Tok::Slash; break;
                default:
                    throw DslError(ErrorCode::ParseError, tok.pos,
                                   std::string("expected a token, found '") + c + "'");
                }
                tok.text = std::string(1, c);
                advance(1);
            }
        }
        out.push_back(std::move(tok));
    }
    Token end;
    end.pos = {line, col};
    out.push_back(end);
    return out;
}

bool isIdentifier(std::string_view s) {
    if (s.empty() || !identStart(s[0])) return false;
    for (char c : s)
        if (!identChar(c)) return false;
    return true;
}

bool isNullName(std::string_view s) {
    if (s.size() < 2 || s[0] != '_') return false;
    for (size_t i = 1; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

bool isVariableName(std::string_view s) {
    if (!isIdentifier(s) || isNullName(s)) return false;
    return std::isupper(static_cast<unsigned char>(s[0])) || s[0] == '_';
}

bool isConstantName(std::string_view s) {
    if (s.empty()) return false;
    if (std::isdigit(static_cast<unsigned char>(s[0]))) {
        for (char c : s)
            if (!identChar(c)) return false;
        return true;
    }
    return isIdentifier(s) && std::islower(static_cast<unsigned char>(s[0]));
}

} // namespace mondet::dsl_detail

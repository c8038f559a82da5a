// Lexer for the cascade toy language. Comments are pascal-style braces
// "{...}" and do not nest; keywords match case-insensitively.
#pragma once

#include <array>
#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "zeno/ast.hpp"

namespace zeno {

struct LexError : std::runtime_error {
    LexError(SourcePos p, const std::string& message)
        : std::runtime_error("lex error at " + std::to_string(p.line) + ":" +
                             std::to_string(p.column) + ": " + message),
          pos(p) {}
    SourcePos pos;
};

namespace detail {

inline const std::array<std::string_view, 10>& keywords() {
    static const std::array<std::string_view, 10> kw = {
        "PROGRAM", "END",   "COPY_PROGRAM_NEXT", "IDLE",  "VALUE",
        "VALUE_NEXT", "NOT", "REPEAT", "UNTIL", "FALSE",
    };
    return kw;
}

inline std::string to_upper(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace detail

inline std::vector<Token> tokenize(std::string_view source) {
    std::vector<Token> tokens;
    SourcePos pos;
    std::size_t i = 0;

    auto advance = [&](char c) {
        if (c == '\n') {
            ++pos.line;
            pos.column = 1;
        } else {
            ++pos.column;
        }
    };

    while (i < source.size()) {
        char c = source[i];
        SourcePos start = pos;

        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(c);
            ++i;
            continue;
        }

        if (c == '{') {
            advance(c);
            ++i;
            bool closed = false;
            while (i < source.size()) {
                char cc = source[i];
                advance(cc);
                ++i;
                if (cc == '}') {
                    closed = true;
                    break;
                }
            }
            if (!closed) throw LexError(start, "unterminated comment");
            continue;
        }

        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t begin = i;
            while (i < source.size() &&
                   (std::isalnum(static_cast<unsigned char>(source[i])) || source[i] == '_')) {
                advance(source[i]);
                ++i;
            }
            std::string word(source.substr(begin, i - begin));
            std::string upper = detail::to_upper(word);
            bool is_keyword = false;
            for (std::string_view kw : detail::keywords()) {
                if (upper == kw) {
                    is_keyword = true;
                    break;
                }
            }
            if (is_keyword) {
                tokens.push_back({TokenKind::Keyword, upper, start});
            } else {
                tokens.push_back({TokenKind::Identifier, word, start});
            }
            continue;
        }

        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t begin = i;
            while (i < source.size() && std::isdigit(static_cast<unsigned char>(source[i]))) {
                advance(source[i]);
                ++i;
            }
            tokens.push_back({TokenKind::IntegerLiteral,
                              std::string(source.substr(begin, i - begin)), start});
            continue;
        }

        if (c == ':') {
            if (i + 1 < source.size() && source[i + 1] == '=') {
                advance(':');
                advance('=');
                i += 2;
                tokens.push_back({TokenKind::AssignSymbol, ":=", start});
            } else {
                advance(':');
                ++i;
                tokens.push_back({TokenKind::Colon, ":", start});
            }
            continue;
        }

        if (c == ';') {
            advance(';');
            ++i;
            tokens.push_back({TokenKind::Semicolon, ";", start});
            continue;
        }

        throw LexError(start, std::string("illegal character '") + c + "'");
    }
    return tokens;
}

}  // namespace zeno

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace capp::minisl {

struct ParseError : std::runtime_error {
  ParseError(int line, int column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + message),
        line(line),
        column(column),
        message(message) {}
  int line;
  int column;
  std::string message;
};

enum class TokKind {
  Ident, Int,
  KwCall, KwIf, KwElse, KwFor, KwIn, KwRange, KwTrue, KwFalse,
  LParen, RParen, LBrace, RBrace, Comma, Arrow,
  Plus, Minus, Star, Slash, Gt, Ge, EqEq, AndAnd,
  End,
};

struct Token {
  TokKind kind;
  std::string text;
  long long int_value = 0;
  int line = 1;
  int column = 1;
};

struct Comment {
  std::string text;  // without the leading "//"
  int line;
};

struct LexResult {
  std::vector<Token> tokens;    // terminated by End
  std::vector<Comment> comments;
};

// Tokenizes a whole source. `//` line comments are collected separately so
// the parser can pick up a leading `// tag: <name>` annotation.
LexResult lex(const std::string& source);

}  // namespace capp::minisl

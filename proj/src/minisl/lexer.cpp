#include "capp/minisl/lexer.hpp"

#include <cctype>
#include <map>

namespace capp::minisl {

namespace {

const std::map<std::string, TokKind> kKeywords = {
    {"call", TokKind::KwCall}, {"if", TokKind::KwIf},     {"else", TokKind::KwElse},
    {"for", TokKind::KwFor},   {"in", TokKind::KwIn},     {"range", TokKind::KwRange},
    {"true", TokKind::KwTrue}, {"false", TokKind::KwFalse},
};

}  // namespace

LexResult lex(const std::string& src) {
  LexResult out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') { ++line; col = 1; } else { ++col; }
      ++i;
    }
  };
  auto push = [&](TokKind kind, std::string text, int l, int c) {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.line = l;
    t.column = c;
    out.tokens.push_back(std::move(t));
  };

  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      size_t start = i + 2;
      size_t end = src.find('\n', start);
      if (end == std::string::npos) end = src.size();
      out.comments.push_back({src.substr(start, end - start), line});
      advance(end - i);
      continue;
    }
    int tl = line, tc = col;
    if (std::isalpha((unsigned char)c) || c == '_') {
      size_t start = i;
      while (i < src.size() && (std::isalnum((unsigned char)src[i]) || src[i] == '_')) advance(1);
      std::string word = src.substr(start, i - start);
      auto kw = kKeywords.find(word);
      push(kw != kKeywords.end() ? kw->second : TokKind::Ident, word, tl, tc);
      continue;
    }
    if (std::isdigit((unsigned char)c)) {
      size_t start = i;
      while (i < src.size() && std::isdigit((unsigned char)src[i])) advance(1);
      std::string digits = src.substr(start, i - start);
      Token t;
      t.kind = TokKind::Int;
      t.text = digits;
      t.int_value = std::stoll(digits);
      t.line = tl;
      t.column = tc;
      out.tokens.push_back(std::move(t));
      continue;
    }
    auto two = [&](char a, char b) {
      return c == a && i + 1 < src.size() && src[i + 1] == b;
    };
    if (two('=', '>')) { push(TokKind::Arrow, "=>", tl, tc); advance(2); continue; }
    if (two('=', '=')) { push(TokKind::EqEq, "==", tl, tc); advance(2); continue; }
    if (two('>', '=')) { push(TokKind::Ge, ">=", tl, tc); advance(2); continue; }
    if (two('&', '&')) { push(TokKind::AndAnd, "&&", tl, tc); advance(2); continue; }
    switch (c) {
      case '(': push(TokKind::LParen, "(", tl, tc); advance(1); continue;
      case ')': push(TokKind::RParen, ")", tl, tc); advance(1); continue;
      case '{': push(TokKind::LBrace, "{", tl, tc); advance(1); continue;
      case '}': push(TokKind::RBrace, "}", tl, tc); advance(1); continue;
      case ',': push(TokKind::Comma, ",", tl, tc); advance(1); continue;
      case '+': push(TokKind::Plus, "+", tl, tc); advance(1); continue;
      case '-': push(TokKind::Minus, "-", tl, tc); advance(1); continue;
      case '*': push(TokKind::Star, "*", tl, tc); advance(1); continue;
      case '/': push(TokKind::Slash, "/", tl, tc); advance(1); continue;
      case '>': push(TokKind::Gt, ">", tl, tc); advance(1); continue;
      default:
        throw ParseError(tl, tc, std::string("unknown token '") + c + "'");
    }
  }
  push(TokKind::End, "", line, col);
  return out;
}

}  // namespace capp::minisl

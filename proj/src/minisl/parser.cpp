#include "capp/minisl/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace capp::minisl {

namespace {

class Parser {
 public:
  Parser(LexResult lexed, std::string source_name)
      : toks_(std::move(lexed.tokens)), comments_(std::move(lexed.comments)) {
    fn_.source_name = std::move(source_name);
  }

  FunctionDef parse() {
    fn_.tag = leading_tag();
    expect(TokKind::LParen, "expected '(' opening the parameter list");
    parse_params();
    expect(TokKind::Arrow, "expected '=>' after the parameter list");
    expect(TokKind::LBrace, "expected '{' starting the function body");
    fn_.body = parse_stmt_seq();
    expect(TokKind::RBrace, "expected '}' closing the function body");
    if (peek().kind != TokKind::End)
      fail("unexpected input after the function body");
    return std::move(fn_);
  }

 private:
  const Token& peek(int ahead = 0) const {
    size_t idx = pos_ + ahead;
    return idx < toks_.size() ? toks_[idx] : toks_.back();
  }
  const Token& take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  bool accept(TokKind k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  const Token& expect(TokKind k, const std::string& msg) {
    if (peek().kind != k) fail(msg);
    return toks_[pos_++];
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw ParseError(t.line, t.column, msg);
  }

  std::string leading_tag() const {
    // A `// tag: <identifier>` comment before the parameter list names the
    // scheduling policy this function belongs to.
    int first_line = toks_.empty() ? 1 : toks_.front().line;
    std::string tag;
    for (const auto& c : comments_) {
      if (c.line >= first_line) break;  // a comment cannot precede tokens on its own line
      std::string body = c.text;
      size_t p = body.find_first_not_of(" \t");
      if (p == std::string::npos || body.compare(p, 3, "tag") != 0) continue;
      p = body.find_first_not_of(" \t", p + 3);
      if (p == std::string::npos || body[p] != ':') continue;
      p = body.find_first_not_of(" \t", p + 1);
      if (p == std::string::npos) continue;
      size_t e = p;
      while (e < body.size() && (std::isalnum((unsigned char)body[e]) || body[e] == '_')) ++e;
      if (e > p) tag = body.substr(p, e - p);
    }
    return tag;
  }

  void parse_params() {
    std::set<std::string> seen;
    if (!accept(TokKind::RParen)) {
      while (true) {
        const Token& t = expect(TokKind::Ident, "expected a parameter name");
        if (!seen.insert(t.text).second)
          throw ParseError(t.line, t.column, "duplicate parameter name '" + t.text + "'");
        fn_.params.push_back(t.text);
        if (accept(TokKind::RParen)) break;
        expect(TokKind::Comma, "expected ',' or ')' in the parameter list");
      }
    }
  }

  StmtPtr parse_stmt_seq() {
    switch (peek().kind) {
      case TokKind::RBrace:
        return Stmt::empty();
      case TokKind::KwCall: {
        take();
        auto [service, args] = parse_call_head();
        StmtPtr cont = parse_stmt_seq();
        return Stmt::call(std::move(service), std::move(args), std::move(cont));
      }
      case TokKind::KwIf:
        return parse_if();
      case TokKind::KwFor:
        return parse_for();
      default:
        fail("expected a statement ('call', 'if', 'for') or '}'");
    }
  }

  std::pair<std::string, std::vector<ExprPtr>> parse_call_head() {
    const Token& name = expect(TokKind::Ident, "expected a service name after 'call'");
    expect(TokKind::LParen, "expected '(' starting the call arguments");
    std::vector<ExprPtr> args;
    if (!accept(TokKind::RParen)) {
      while (true) {
        args.push_back(parse_expr());
        if (accept(TokKind::RParen)) break;
        expect(TokKind::Comma, "expected ',' or ')' in the argument list");
      }
    }
    return {name.text, std::move(args)};
  }

  // The block of an if/for ends its statement sequence: nothing may follow
  // the closing brace except the brace of the enclosing block.
  StmtPtr parse_if() {
    const Token& kw = take();
    expect(TokKind::LParen, "expected '(' after 'if'");
    bool guarded_by_call = peek().kind == TokKind::KwCall;
    std::string service;
    std::vector<ExprPtr> args;
    ExprPtr guard;
    if (guarded_by_call) {
      take();
      std::tie(service, args) = parse_call_head();
    } else {
      guard = parse_expr();
    }
    expect(TokKind::RParen, "expected ')' closing the if guard");
    expect(TokKind::LBrace, "expected '{' starting the then branch");
    StmtPtr then_b = parse_stmt_seq();
    expect(TokKind::RBrace, "expected '}' closing the then branch");
    expect(TokKind::KwElse, "expected 'else'");
    expect(TokKind::LBrace, "expected '{' starting the else branch");
    StmtPtr else_b = parse_stmt_seq();
    expect(TokKind::RBrace, "expected '}' closing the else branch");
    require_block_end();
    if (guarded_by_call)
      return Stmt::if_call(std::move(service), std::move(args), std::move(then_b),
                           std::move(else_b), kw.line, kw.column);
    return Stmt::if_exp(std::move(guard), std::move(then_b), std::move(else_b), kw.line,
                        kw.column);
  }

  StmtPtr parse_for() {
    const Token& kw = take();
    expect(TokKind::LParen, "expected '(' after 'for'");
    const Token& counter = expect(TokKind::Ident, "expected a counter name");
    expect(TokKind::KwIn, "expected 'in'");
    expect(TokKind::KwRange, "expected 'range'");
    expect(TokKind::LParen, "expected '(' after 'range'");
    const Token& zero = expect(TokKind::Int, "expected the literal 0 as the range start");
    if (zero.int_value != 0)
      throw ParseError(zero.line, zero.column, "range must start at 0");
    expect(TokKind::Comma, "expected ',' in 'range(0, ...)'");
    ExprPtr bound = parse_expr();
    expect(TokKind::RParen, "expected ')' closing 'range'");
    expect(TokKind::RParen, "expected ')' closing the for header");
    expect(TokKind::LBrace, "expected '{' starting the loop body");
    counters_.push_back(counter.text);
    StmtPtr body = parse_stmt_seq();
    counters_.pop_back();
    expect(TokKind::RBrace, "expected '}' closing the loop body");
    require_block_end();
    return Stmt::for_loop(counter.text, std::move(bound), std::move(body), kw.line, kw.column);
  }

  void require_block_end() {
    if (peek().kind != TokKind::RBrace && peek().kind != TokKind::End)
      fail("expected '}' (statements cannot follow an if/for block)");
  }

  // Precedence: && < comparisons < additive < multiplicative.
  ExprPtr parse_expr() { return parse_conjunction(); }

  ExprPtr parse_conjunction() {
    ExprPtr e = parse_comparison();
    while (accept(TokKind::AndAnd)) e = Expr::bin_op(BinOp::And, e, parse_comparison());
    return e;
  }

  ExprPtr parse_comparison() {
    ExprPtr e = parse_additive();
    switch (peek().kind) {
      case TokKind::Gt: take(); return Expr::bin_op(BinOp::Gt, e, parse_additive());
      case TokKind::Ge: take(); return Expr::bin_op(BinOp::Ge, e, parse_additive());
      case TokKind::EqEq: take(); return Expr::bin_op(BinOp::Eq, e, parse_additive());
      default: return e;
    }
  }

  ExprPtr parse_additive() {
    ExprPtr e = parse_multiplicative();
    while (true) {
      if (accept(TokKind::Plus)) e = Expr::bin_op(BinOp::Add, e, parse_multiplicative());
      else if (accept(TokKind::Minus)) e = Expr::bin_op(BinOp::Sub, e, parse_multiplicative());
      else return e;
    }
  }

  ExprPtr parse_multiplicative() {
    ExprPtr e = parse_primary();
    while (true) {
      if (accept(TokKind::Star)) e = Expr::bin_op(BinOp::Mul, e, parse_primary());
      else if (accept(TokKind::Slash)) e = Expr::bin_op(BinOp::Div, e, parse_primary());
      else return e;
    }
  }

  ExprPtr parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokKind::Int:
        take();
        return Expr::int_lit(t.int_value);
      case TokKind::KwTrue:
        take();
        return Expr::int_lit(1);
      case TokKind::KwFalse:
        take();
        return Expr::int_lit(0);
      case TokKind::Ident:
        take();
        return resolve(t.text);
      case TokKind::LParen: {
        take();
        ExprPtr e = parse_expr();
        expect(TokKind::RParen, "expected ')'");
        return e;
      }
      case TokKind::KwCall:
        fail("service calls cannot appear inside expressions");
      default:
        fail("expected an expression");
    }
  }

  ExprPtr resolve(const std::string& name) const {
    // Innermost counter binding wins over a parameter of the same name.
    if (std::find(counters_.rbegin(), counters_.rend(), name) != counters_.rend())
      return Expr::counter_ref(name);
    if (std::find(fn_.params.begin(), fn_.params.end(), name) != fn_.params.end())
      return Expr::param_ref(name);
    return Expr::counter_ref(name);  // unbound; flagged by check_wellformed
  }

  std::vector<Token> toks_;
  std::vector<Comment> comments_;
  size_t pos_ = 0;
  FunctionDef fn_;
  std::vector<std::string> counters_;
};

}  // namespace

FunctionDef parse_function(const std::string& text, const std::string& source_name) {
  return Parser(lex(text), source_name).parse();
}

}  // namespace capp::minisl

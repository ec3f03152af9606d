#include "capp/cost/text_format.hpp"

#include <cctype>
#include <sstream>
#include <vector>

namespace capp::cost {

std::string to_text(const CostProgram& p) {
  std::ostringstream os;
  for (const auto& eq : p.equations) {
    os << eq.head << "(";
    for (size_t i = 0; i < eq.params.size(); ++i) {
      if (i) os << ",";
      os << eq.params[i];
    }
    os << ") = ";
    bool wrote_direct = !(eq.direct.is_zero() && !eq.calls.empty());
    if (wrote_direct) os << to_text(eq.direct);
    for (size_t i = 0; i < eq.calls.size(); ++i) {
      if (wrote_direct || i) os << " + ";
      os << eq.calls[i].callee << "(";
      for (size_t j = 0; j < eq.calls[i].args.size(); ++j) {
        if (j) os << ",";
        os << to_text(eq.calls[i].args[j], true);
      }
      os << ")";
    }
    os << " " << to_text(eq.guard) << "\n";
  }
  return os.str();
}

namespace {

enum class Tk { Ident, Number, LParen, RParen, LBracket, RBracket, Comma, Plus, Minus, Star, Ge, Eq, End };

struct Tok {
  Tk kind;
  std::string text;
};

std::vector<Tok> lex_line(const std::string& line, int lineno) {
  std::vector<Tok> out;
  size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == ' ' || c == '\t' || c == '\r') { ++i; continue; }
    if (std::isalpha((unsigned char)c) || c == '_') {
      size_t s = i;
      while (i < line.size() && (std::isalnum((unsigned char)line[i]) || line[i] == '_')) ++i;
      out.push_back({Tk::Ident, line.substr(s, i - s)});
      continue;
    }
    if (std::isdigit((unsigned char)c)) {
      size_t s = i;
      while (i < line.size() && std::isdigit((unsigned char)line[i])) ++i;
      // rational literal n/d
      if (i + 1 < line.size() && line[i] == '/' && std::isdigit((unsigned char)line[i + 1])) {
        ++i;
        while (i < line.size() && std::isdigit((unsigned char)line[i])) ++i;
      }
      out.push_back({Tk::Number, line.substr(s, i - s)});
      continue;
    }
    if (c == '>' && i + 1 < line.size() && line[i + 1] == '=') {
      out.push_back({Tk::Ge, ">="});
      i += 2;
      continue;
    }
    switch (c) {
      case '(': out.push_back({Tk::LParen, "("}); break;
      case ')': out.push_back({Tk::RParen, ")"}); break;
      case '[': out.push_back({Tk::LBracket, "["}); break;
      case ']': out.push_back({Tk::RBracket, "]"}); break;
      case ',': out.push_back({Tk::Comma, ","}); break;
      case '+': out.push_back({Tk::Plus, "+"}); break;
      case '-': out.push_back({Tk::Minus, "-"}); break;
      case '*': out.push_back({Tk::Star, "*"}); break;
      case '=': out.push_back({Tk::Eq, "="}); break;
      default:
        throw FormatError(lineno, std::string("unexpected character '") + c + "'");
    }
    ++i;
  }
  out.push_back({Tk::End, ""});
  return out;
}

class LineParser {
 public:
  LineParser(std::vector<Tok> toks, int lineno) : toks_(std::move(toks)), line_(lineno) {}

  CostEquation equation() {
    CostEquation eq;
    eq.head = expect(Tk::Ident, "equation head").text;
    expect(Tk::LParen, "'('");
    if (!accept(Tk::RParen)) {
      while (true) {
        eq.params.push_back(expect(Tk::Ident, "parameter name").text);
        if (accept(Tk::RParen)) break;
        expect(Tk::Comma, "','");
      }
    }
    expect(Tk::Eq, "'='");
    parse_terms(eq);
    parse_guard(eq.guard);
    expect(Tk::End, "end of line");
    return eq;
  }

  PExpr bare_expr() {
    PExpr e = expr();
    expect(Tk::End, "end of input");
    return e;
  }

 private:
  const Tok& peek() const { return toks_[pos_]; }
  bool accept(Tk k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  const Tok& expect(Tk k, const std::string& what) {
    if (peek().kind != k) throw FormatError(line_, "expected " + what);
    return toks_[pos_++];
  }

  // Right-hand side: '+'-separated mix of expression terms and calls; '-'
  // joins expression terms only. Calls may appear only at this level.
  void parse_terms(CostEquation& eq) {
    bool have_direct = false;
    PExpr direct = PExpr::constant(Rational(0));
    bool first = true;
    while (true) {
      bool subtract = false;
      if (!first) {
        if (accept(Tk::Plus)) {
        } else if (accept(Tk::Minus)) {
          subtract = true;
        } else {
          break;
        }
      }
      first = false;
      if (peek().kind == Tk::Ident && peek().text != "max" &&
          toks_[pos_ + 1].kind == Tk::LParen) {
        if (subtract) throw FormatError(line_, "cannot subtract a call");
        CostCall call;
        call.callee = toks_[pos_].text;
        pos_ += 2;
        if (!accept(Tk::RParen)) {
          while (true) {
            call.args.push_back(expr());
            if (accept(Tk::RParen)) break;
            expect(Tk::Comma, "','");
          }
        }
        eq.calls.push_back(std::move(call));
        continue;
      }
      PExpr term = product();
      direct = have_direct ? (subtract ? PExpr::sub(direct, term) : PExpr::add(direct, term))
                           : (subtract ? PExpr::sub(PExpr::constant(Rational(0)), term) : term);
      have_direct = true;
    }
    eq.direct = have_direct ? direct : PExpr::constant(Rational(0));
  }

  void parse_guard(Guard& g) {
    expect(Tk::LBracket, "'['");
    if (accept(Tk::RBracket)) return;
    while (true) {
      PExpr lhs = expr();
      Constraint::Rel rel;
      if (accept(Tk::Ge)) rel = Constraint::Rel::Ge;
      else if (accept(Tk::Eq)) rel = Constraint::Rel::Eq;
      else throw FormatError(line_, "expected '>=' or '=' in guard");
      g.conjuncts.push_back({rel, lhs, expr()});
      if (accept(Tk::RBracket)) break;
      expect(Tk::Comma, "','");
    }
  }

  PExpr expr() {
    PExpr e = product();
    while (true) {
      if (accept(Tk::Plus)) e = PExpr::add(e, product());
      else if (accept(Tk::Minus)) e = PExpr::sub(e, product());
      else return e;
    }
  }

  PExpr product() {
    PExpr e = atom();
    while (accept(Tk::Star)) e = PExpr::mul(e, atom());
    return e;
  }

  PExpr atom() {
    const Tok& t = peek();
    switch (t.kind) {
      case Tk::Number: {
        ++pos_;
        return PExpr::constant(Rational::from_string(t.text));
      }
      case Tk::Ident: {
        if (t.text == "max" && toks_[pos_ + 1].kind == Tk::LParen) {
          pos_ += 2;
          std::vector<PExpr> args;
          while (true) {
            args.push_back(expr());
            if (accept(Tk::RParen)) break;
            expect(Tk::Comma, "','");
          }
          return PExpr::max_of(std::move(args));
        }
        if (toks_[pos_ + 1].kind == Tk::LParen)
          throw FormatError(line_, "cost-function call not allowed inside an expression");
        ++pos_;
        return PExpr::var(t.text);
      }
      case Tk::LParen: {
        ++pos_;
        PExpr e = expr();
        expect(Tk::RParen, "')'");
        return e;
      }
      default:
        throw FormatError(line_, "expected an expression");
    }
  }

  std::vector<Tok> toks_;
  size_t pos_ = 0;
  int line_;
};

}  // namespace

CostProgram parse_program(const std::string& text) {
  CostProgram p;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    p.equations.push_back(LineParser(lex_line(line, lineno), lineno).equation());
  }
  if (p.equations.empty()) throw FormatError(lineno, "no equations found");
  return p;
}

PExpr parse_pexpr(const std::string& text) {
  return LineParser(lex_line(text, 1), 1).bare_expr();
}

}  // namespace capp::cost

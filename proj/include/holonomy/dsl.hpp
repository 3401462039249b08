#pragma once

// Small expression language for matrix entries: +, -, *, /, unary minus,
// parentheses, sin/cos/tan/exp/sqrt, numeric literals, the imaginary unit
// literal `i`, the constants `pi` and `e`, and declared parameters.
// Whitespace-insensitive; no comparison/boolean operators, no user functions.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdio>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "holonomy/errors.hpp"

namespace holonomy::dsl {

using Complex = std::complex<double>;

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable expression tree.  Shared subtrees are never mutated, so copies
// of a parsed matrix are cheap and thread-safe.
struct Expr {
  enum class Kind {
    Number,     // numeric literal
    Imaginary,  // the literal `i`
    Constant,   // pi, e
    Parameter,  // declared parameter, by index
    Negate,     // -child
    Add,
    Sub,
    Mul,
    Div,
    Call,  // sin/cos/tan/exp/sqrt applied to child
  };

  Kind kind;
  double number = 0.0;   // Kind::Number
  std::string name;      // Constant / Parameter / Call
  int param_index = -1;  // Kind::Parameter
  ExprPtr child;         // Negate, Call
  ExprPtr lhs, rhs;      // binary nodes
};

inline constexpr std::array<std::string_view, 5> kFunctions = {"sin", "cos", "tan",
                                                               "exp", "sqrt"};

inline bool is_function_name(std::string_view s) {
  return std::find(kFunctions.begin(), kFunctions.end(), s) != kFunctions.end();
}
inline bool is_reserved_name(std::string_view s) {
  return s == "i" || s == "pi" || s == "e" || is_function_name(s);
}

inline Complex eval(const Expr& e, std::span<const double> params) {
  switch (e.kind) {
    case Expr::Kind::Number:
      return Complex(e.number, 0.0);
    case Expr::Kind::Imaginary:
      return Complex(0.0, 1.0);
    case Expr::Kind::Constant:
      return Complex(e.name == "pi" ? std::numbers::pi : std::numbers::e, 0.0);
    case Expr::Kind::Parameter:
      return Complex(params[static_cast<std::size_t>(e.param_index)], 0.0);
    case Expr::Kind::Negate:
      return -eval(*e.child, params);
    case Expr::Kind::Add:
      return eval(*e.lhs, params) + eval(*e.rhs, params);
    case Expr::Kind::Sub:
      return eval(*e.lhs, params) - eval(*e.rhs, params);
    case Expr::Kind::Mul:
      return eval(*e.lhs, params) * eval(*e.rhs, params);
    case Expr::Kind::Div:
      return eval(*e.lhs, params) / eval(*e.rhs, params);
    case Expr::Kind::Call: {
      const Complex arg = eval(*e.child, params);
      if (e.name == "sin") return std::sin(arg);
      if (e.name == "cos") return std::cos(arg);
      if (e.name == "tan") return std::tan(arg);
      if (e.name == "exp") return std::exp(arg);
      return std::sqrt(arg);  // "sqrt"
    }
  }
  throw Error("dsl::eval: corrupt expression node");
}

namespace detail {

enum class TokKind {
  Number,
  Ident,
  Plus,
  Minus,
  Star,
  Slash,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  End
};

struct Token {
  TokKind kind;
  std::string text;
  double number = 0.0;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_whitespace();
    const int line = line_, col = col_;
    if (pos_ >= src_.size()) return {TokKind::End, "", 0.0, line, col};
    const char c = src_[pos_];
    switch (c) {
      case '+': return single(TokKind::Plus, line, col);
      case '-': return single(TokKind::Minus, line, col);
      case '*': return single(TokKind::Star, line, col);
      case '/': return single(TokKind::Slash, line, col);
      case '(': return single(TokKind::LParen, line, col);
      case ')': return single(TokKind::RParen, line, col);
      case '[': return single(TokKind::LBracket, line, col);
      case ']': return single(TokKind::RBracket, line, col);
      case ',': return single(TokKind::Comma, line, col);
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number(line, col);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_ident(line, col);
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }

 private:
  Token single(TokKind kind, int line, int col) {
    advance();
    return {kind, std::string(1, src_[pos_ - 1]), 0.0, line, col};
  }

  void skip_whitespace() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      advance();
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  Token lex_number(int line, int col) {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
      advance();
    // optional exponent
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_;
      int mark_line = line_, mark_col = col_;
      advance();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
          advance();
      } else {
        pos_ = mark;  // bare `e` after a number is the constant, not an exponent
        line_ = mark_line;
        col_ = mark_col;
      }
    }
    const std::string text(src_.substr(start, pos_ - start));
    try {
      std::size_t used = 0;
      const double value = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {TokKind::Number, text, value, line, col};
    } catch (const std::exception&) {
      throw ParseError("malformed numeric literal '" + text + "'", line, col);
    }
  }

  Token lex_ident(int line, int col) {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      advance();
    return {TokKind::Ident, std::string(src_.substr(start, pos_ - start)), 0.0, line, col};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// Recursive-descent parser.
//
//   matrix  := '[' row (',' row)* ']'
//   row     := '[' expr (',' expr)* ']'
//   expr    := term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := '-' factor | primary
//   primary := number | ident | ident '(' expr ')' | '(' expr ')'
class Parser {
 public:
  Parser(std::string_view src, std::span<const std::string> parameter_names)
      : lexer_(src), params_(parameter_names) {
    cur_ = lexer_.next();
  }

  ExprPtr parse_expression_only() {
    ExprPtr e = parse_expr();
    expect(TokKind::End, "end of input");
    return e;
  }

  std::vector<std::vector<ExprPtr>> parse_matrix_only() {
    auto rows = parse_matrix();
    expect(TokKind::End, "end of input");
    return rows;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, cur_.line, cur_.col);
  }

  void bump() { cur_ = lexer_.next(); }

  bool accept(TokKind kind) {
    if (cur_.kind != kind) return false;
    bump();
    return true;
  }

  void expect(TokKind kind, const std::string& what) {
    if (cur_.kind != kind) fail("expected " + what);
    bump();
  }

  std::vector<std::vector<ExprPtr>> parse_matrix() {
    expect(TokKind::LBracket, "'[' opening the matrix");
    if (cur_.kind == TokKind::RBracket) fail("empty matrix");
    std::vector<std::vector<ExprPtr>> rows;
    rows.push_back(parse_row());
    while (accept(TokKind::Comma)) rows.push_back(parse_row());
    expect(TokKind::RBracket, "']' closing the matrix");
    return rows;
  }

  std::vector<ExprPtr> parse_row() {
    expect(TokKind::LBracket, "'[' opening a row");
    if (cur_.kind == TokKind::RBracket) fail("empty row");
    std::vector<ExprPtr> row;
    row.push_back(parse_expr());
    while (accept(TokKind::Comma)) row.push_back(parse_expr());
    expect(TokKind::RBracket, "']' closing a row");
    return row;
  }

  ExprPtr parse_expr() {
    ExprPtr lhs = parse_term();
    for (;;) {
      if (accept(TokKind::Plus)) {
        lhs = binary(Expr::Kind::Add, lhs, parse_term());
      } else if (accept(TokKind::Minus)) {
        lhs = binary(Expr::Kind::Sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_factor();
    for (;;) {
      if (accept(TokKind::Star)) {
        lhs = binary(Expr::Kind::Mul, lhs, parse_factor());
      } else if (accept(TokKind::Slash)) {
        lhs = binary(Expr::Kind::Div, lhs, parse_factor());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_factor() {
    if (accept(TokKind::Minus)) {
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::Negate;
      node->child = parse_factor();
      return node;
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    if (cur_.kind == TokKind::Number) {
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::Number;
      node->number = cur_.number;
      bump();
      return node;
    }
    if (cur_.kind == TokKind::Ident) {
      const Token tok = cur_;
      bump();
      if (accept(TokKind::LParen)) {
        if (!is_function_name(tok.text))
          throw ParseError("unknown function '" + tok.text + "'", tok.line, tok.col);
        auto node = std::make_shared<Expr>();
        node->kind = Expr::Kind::Call;
        node->name = tok.text;
        node->child = parse_expr();
        expect(TokKind::RParen, "')' closing the argument of '" + tok.text + "'");
        return node;
      }
      return make_name(tok);
    }
    if (accept(TokKind::LParen)) {
      ExprPtr inner = parse_expr();
      expect(TokKind::RParen, "')'");
      return inner;
    }
    fail("expected a number, identifier, or '('");
  }

  ExprPtr make_name(const Token& tok) {
    auto node = std::make_shared<Expr>();
    if (tok.text == "i") {
      node->kind = Expr::Kind::Imaginary;
      return node;
    }
    if (tok.text == "pi" || tok.text == "e") {
      node->kind = Expr::Kind::Constant;
      node->name = tok.text;
      return node;
    }
    const auto it = std::find(params_.begin(), params_.end(), tok.text);
    if (it == params_.end())
      throw ParseError("undeclared identifier '" + tok.text + "'", tok.line, tok.col);
    node->kind = Expr::Kind::Parameter;
    node->name = tok.text;
    node->param_index = static_cast<int>(it - params_.begin());
    return node;
  }

  static ExprPtr binary(Expr::Kind kind, ExprPtr lhs, ExprPtr rhs) {
    auto node = std::make_shared<Expr>();
    node->kind = kind;
    node->lhs = std::move(lhs);
    node->rhs = std::move(rhs);
    return node;
  }

  Lexer lexer_;
  std::span<const std::string> params_;
  Token cur_;
};

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Precedence-aware printer; output reparses to an equivalent tree.
// Levels: additive 1, multiplicative 2, unary 3, atoms 4.
inline void print_expr(const Expr& e, int min_level, std::string& out) {
  const auto wrap = [&](int level, auto&& body) {
    const bool parens = level < min_level;
    if (parens) out += '(';
    body();
    if (parens) out += ')';
  };
  switch (e.kind) {
    case Expr::Kind::Number:
      if (e.number < 0) {
        wrap(3, [&] { out += format_number(e.number); });
      } else {
        out += format_number(e.number);
      }
      return;
    case Expr::Kind::Imaginary:
      out += 'i';
      return;
    case Expr::Kind::Constant:
    case Expr::Kind::Parameter:
      out += e.name;
      return;
    case Expr::Kind::Negate:
      wrap(3, [&] {
        out += '-';
        print_expr(*e.child, 3, out);
      });
      return;
    case Expr::Kind::Add:
      wrap(1, [&] {
        print_expr(*e.lhs, 1, out);
        out += " + ";
        print_expr(*e.rhs, 2, out);
      });
      return;
    case Expr::Kind::Sub:
      wrap(1, [&] {
        print_expr(*e.lhs, 1, out);
        out += " - ";
        print_expr(*e.rhs, 2, out);
      });
      return;
    case Expr::Kind::Mul:
      wrap(2, [&] {
        print_expr(*e.lhs, 2, out);
        out += "*";
        print_expr(*e.rhs, 3, out);
      });
      return;
    case Expr::Kind::Div:
      wrap(2, [&] {
        print_expr(*e.lhs, 2, out);
        out += "/";
        print_expr(*e.rhs, 3, out);
      });
      return;
    case Expr::Kind::Call:
      out += e.name;
      out += '(';
      print_expr(*e.child, 1, out);
      out += ')';
      return;
  }
}

}  // namespace detail

inline std::string to_text(const Expr& e) {
  std::string out;
  detail::print_expr(e, 1, out);
  return out;
}

// Parses a single scalar expression over the given parameters.
inline ExprPtr parse_expression(std::string_view text,
                                std::span<const std::string> parameter_names) {
  return detail::Parser(text, parameter_names).parse_expression_only();
}

}  // namespace holonomy::dsl

#include <cctype>
#include <charconv>
#include <string>

#include "tonelab/profiles.hpp"

namespace tonelab {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr parse() {
    skip_space();
    if (at_end()) throw ParseError("empty expression", pos_);
    Expr e = expr();
    skip_space();
    if (!at_end()) throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
    return e;
  }

 private:
  // The tree is built with raw nodes so the AST mirrors the source exactly.
  Expr expr() {
    Expr lhs = term();
    for (;;) {
      skip_space();
      if (accept('+')) {
        lhs = Expr::binary(NodeKind::add, lhs, term());
      } else if (accept('-')) {
        lhs = Expr::binary(NodeKind::sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = factor();
    for (;;) {
      skip_space();
      if (accept('*')) {
        lhs = Expr::binary(NodeKind::mul, lhs, factor());
      } else if (accept('/')) {
        lhs = Expr::binary(NodeKind::div, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  Expr factor() {
    skip_space();
    if (accept('-')) return Expr::neg(factor());
    Expr b = base();
    skip_space();
    if (accept('^')) return Expr::binary(NodeKind::pow, b, factor());
    return b;
  }

  Expr base() {
    skip_space();
    if (at_end()) throw ParseError("expected expression", pos_);
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (accept('(')) {
      Expr inner = expr();
      skip_space();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      std::string_view ident = src_.substr(start, pos_ - start);
      if (ident == "t") return Expr::variable();
      Function fn;
      if (!lookup(ident, fn)) throw ParseError("unknown identifier '" + std::string(ident) + "'", start);
      skip_space();
      if (!accept('(')) throw ParseError("expected '(' after " + std::string(ident), pos_);
      Expr arg = expr();
      skip_space();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return Expr::call(fn, arg);
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  Expr number() {
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (!at_end() && src_[pos_] == '.') {
      ++pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ - start == 1 && src_[start] == '.') throw ParseError("malformed number", start);
    if (!at_end() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_++;
      if (!at_end() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (at_end() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
        throw ParseError("malformed exponent", mark);
      while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc() || ptr != src_.data() + pos_) throw ParseError("malformed number", start);
    return Expr::constant(value);
  }

  static bool lookup(std::string_view name, Function& fn) {
    static constexpr Function all[] = {Function::exp,  Function::log,  Function::sqrt,
                                       Function::sin,  Function::cos,  Function::sinh,
                                       Function::cosh, Function::tanh, Function::coth};
    for (Function f : all) {
      if (function_name(f) == name) {
        fn = f;
        return true;
      }
    }
    return false;
  }

  bool at_end() const { return pos_ >= src_.size(); }
  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    if (!at_end() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view src) { return Parser(src).parse(); }

}  // namespace tonelab

#include "zsk/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "zsk/csv.hpp"
#include "zsk/error.hpp"

namespace zsk {

enum class Kind { number, constant_pi, constant_e, variable, neg, add, sub, mul, div, pow, call };
enum class Func { sin, cos, exp, log, abs, sqrt, frac, pow };

struct Expression::Node {
  Kind kind = Kind::number;
  double value = 0.0;
  Var var = Var::x;
  Func func = Func::sin;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using cplx = std::complex<double>;

struct FuncInfo {
  const char* name;
  Func func;
  std::size_t arity;
};

constexpr FuncInfo kFunctions[] = {
    {"sin", Func::sin, 1},   {"cos", Func::cos, 1},   {"exp", Func::exp, 1},   {"log", Func::log, 1},
    {"abs", Func::abs, 1},   {"sqrt", Func::sqrt, 1}, {"frac", Func::frac, 1}, {"pow", Func::pow, 2},
};

const char* func_name(Func f) {
  for (const FuncInfo& info : kFunctions) {
    if (info.func == f) return info.name;
  }
  return "?";
}

const char* var_name(Expression::Var v) {
  switch (v) {
    case Expression::Var::x: return "x";
    case Expression::Var::n1: return "n1";
    case Expression::Var::n2: return "n2";
    case Expression::Var::n3: return "n3";
    case Expression::Var::n4: return "n4";
    case Expression::Var::s: return "s";
  }
  return "?";
}

NodePtr make(Kind kind, std::vector<NodePtr> args = {}) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = kind;
  n->args = std::move(args);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw parse_error("expression: " + what + " at position " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr left = term();
    for (;;) {
      if (accept('+')) {
        left = make(Kind::add, {left, term()});
      } else if (accept('-')) {
        left = make(Kind::sub, {left, term()});
      } else {
        return left;
      }
    }
  }

  NodePtr term() {
    NodePtr left = unary();
    for (;;) {
      if (accept('*')) {
        left = make(Kind::mul, {left, unary()});
      } else if (accept('/')) {
        left = make(Kind::div, {left, unary()});
      } else {
        return left;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Kind::pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t count = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      count += digits();
    }
    if (count == 0) fail("malformed number");
    // An exponent only when digits follow; otherwise 'e' is left for the constant.
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        digits();
      }
    }
    const std::string literal(text_.substr(start, pos_ - start));
    const double v = std::strtod(literal.c_str(), nullptr);
    if (!std::isfinite(v)) fail("number out of range");
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::number;
    n->value = v;
    return n;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);

    for (const FuncInfo& info : kFunctions) {
      if (name != info.name) continue;
      if (!accept('(')) fail(std::string("expected '(' after ") + info.name);
      std::vector<NodePtr> args{expr()};
      while (accept(',')) args.push_back(expr());
      if (!accept(')')) fail("expected ')'");
      if (args.size() != info.arity) fail(std::string("wrong number of arguments to ") + info.name);
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::call;
      n->func = info.func;
      n->args = std::move(args);
      return n;
    }
    if (name == "pi") return make(Kind::constant_pi);
    if (name == "e") return make(Kind::constant_e);
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::variable;
    if (name == "x") {
      n->var = Var::x;
    } else if (name == "s") {
      n->var = Var::s;
    } else if (name == "n1") {
      n->var = Var::n1;
    } else if (name == "n2") {
      n->var = Var::n2;
    } else if (name == "n3") {
      n->var = Var::n3;
    } else if (name == "n4") {
      n->var = Var::n4;
    } else {
      pos_ = start;
      fail("unknown name '" + std::string(name) + "'");
    }
    return n;
  }

  using Var = Expression::Var;
  std::string_view text_;
  std::size_t pos_ = 0;
};

int precedence(const Expression::Node& n) {
  switch (n.kind) {
    case Kind::add:
    case Kind::sub: return 1;
    case Kind::mul:
    case Kind::div: return 2;
    case Kind::neg: return 3;
    case Kind::pow: return 4;
    default: return 5;
  }
}

void print(const Expression::Node& n, int min_prec, std::string& out) {
  const bool wrap = precedence(n) < min_prec;
  if (wrap) out += '(';
  switch (n.kind) {
    case Kind::number: out += format_number(n.value); break;
    case Kind::constant_pi: out += "pi"; break;
    case Kind::constant_e: out += "e"; break;
    case Kind::variable: out += var_name(n.var); break;
    case Kind::neg:
      out += '-';
      print(*n.args[0], 3, out);
      break;
    case Kind::add:
    case Kind::sub:
      print(*n.args[0], 1, out);
      out += n.kind == Kind::add ? " + " : " - ";
      print(*n.args[1], 2, out);
      break;
    case Kind::mul:
    case Kind::div:
      print(*n.args[0], 2, out);
      out += n.kind == Kind::mul ? "*" : "/";
      print(*n.args[1], 3, out);
      break;
    case Kind::pow:
      print(*n.args[0], 5, out);
      out += '^';
      print(*n.args[1], 3, out);
      break;
    case Kind::call:
      out += func_name(n.func);
      out += '(';
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ", ";
        print(*n.args[i], 0, out);
      }
      out += ')';
      break;
  }
  if (wrap) out += ')';
}

template <typename T>
struct Env {
  double x = 0.0;
  const std::array<double, 4>* n = nullptr;
  cplx s{};
};

bool finite(double v) { return std::isfinite(v); }
bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }
bool is_zero(double v) { return v == 0.0; }
bool is_zero(cplx v) { return v == 0.0; }

double real_pow(double a, double b) {
  const double r = std::pow(a, b);
  if (std::isnan(r)) throw evaluation_error("expression: pow of a negative base to a non-integer power");
  return r;
}

cplx complex_pow(cplx a, cplx b) {
  if (b.imag() == 0.0 && b.real() == std::round(b.real()) && std::fabs(b.real()) <= 64) {
    const int k = static_cast<int>(b.real());
    if (k < 0 && a == 0.0) throw evaluation_error("expression: division by zero");
    cplx r = 1.0;
    const cplx base = k < 0 ? 1.0 / a : a;
    for (int i = 0; i < std::abs(k); ++i) r *= base;
    return r;
  }
  if (a == 0.0) {
    if (b.real() > 0.0) return 0.0;
    throw evaluation_error("expression: 0 raised to a power with Re <= 0");
  }
  return std::exp(b * std::log(a));
}

template <typename T>
T eval(const Expression::Node& node, const Env<T>& env) {
  T r{};
  switch (node.kind) {
    case Kind::number: r = T(node.value); break;
    case Kind::constant_pi: r = T(std::numbers::pi); break;
    case Kind::constant_e: r = T(std::numbers::e); break;
    case Kind::variable:
      if (node.var == Expression::Var::x) {
        r = T(env.x);
      } else if (node.var == Expression::Var::s) {
        if constexpr (std::is_same_v<T, cplx>) {
          r = env.s;
        } else {
          throw evaluation_error("expression: s is not available here");
        }
      } else {
        if (!env.n) throw evaluation_error(std::string("expression: ") + var_name(node.var) + " is not available here");
        r = T((*env.n)[static_cast<std::size_t>(node.var) - static_cast<std::size_t>(Expression::Var::n1)]);
      }
      break;
    case Kind::neg: r = -eval(*node.args[0], env); break;
    case Kind::add: r = eval(*node.args[0], env) + eval(*node.args[1], env); break;
    case Kind::sub: r = eval(*node.args[0], env) - eval(*node.args[1], env); break;
    case Kind::mul: r = eval(*node.args[0], env) * eval(*node.args[1], env); break;
    case Kind::div: {
      const T den = eval(*node.args[1], env);
      if (is_zero(den)) throw evaluation_error("expression: division by zero");
      r = eval(*node.args[0], env) / den;
      break;
    }
    case Kind::pow:
    case Kind::call: {
      std::vector<T> a;
      for (const auto& arg : node.args) a.push_back(eval(*arg, env));
      const Func f = node.kind == Kind::pow ? Func::pow : node.func;
      switch (f) {
        case Func::sin: r = std::sin(a[0]); break;
        case Func::cos: r = std::cos(a[0]); break;
        case Func::exp: r = std::exp(a[0]); break;
        case Func::log:
          if constexpr (std::is_same_v<T, double>) {
            if (!(a[0] > 0.0)) throw evaluation_error("expression: log of a non-positive number");
          } else {
            if (a[0] == 0.0) throw evaluation_error("expression: log of zero");
          }
          r = std::log(a[0]);
          break;
        case Func::abs: r = T(std::abs(a[0])); break;
        case Func::sqrt:
          if constexpr (std::is_same_v<T, double>) {
            if (a[0] < 0.0) throw evaluation_error("expression: sqrt of a negative number");
          }
          r = std::sqrt(a[0]);
          break;
        case Func::frac:
          if constexpr (std::is_same_v<T, double>) {
            r = a[0] - std::floor(a[0]);
          } else {
            if (a[0].imag() != 0.0) throw evaluation_error("expression: frac of a complex number");
            r = a[0].real() - std::floor(a[0].real());
          }
          break;
        case Func::pow:
          if constexpr (std::is_same_v<T, double>) {
            r = real_pow(a[0], a[1]);
          } else {
            r = complex_pow(a[0], a[1]);
          }
          break;
      }
      break;
    }
  }
  if (!finite(r)) throw evaluation_error("expression: non-finite value");
  return r;
}

bool uses_var(const Expression::Node& n, Expression::Var v) {
  if (n.kind == Kind::variable && n.var == v) return true;
  for (const auto& a : n.args) {
    if (uses_var(*a, v)) return true;
  }
  return false;
}

}  // namespace

Expression Expression::parse(std::string_view text) { return Expression(Parser(text).parse()); }

std::string Expression::to_string() const {
  std::string out;
  print(*root_, 0, out);
  return out;
}

double Expression::evaluate(double x) const {
  Env<double> env;
  env.x = x;
  return eval(*root_, env);
}

std::complex<double> Expression::evaluate(const std::array<double, 4>& n, std::complex<double> s) const {
  Env<cplx> env;
  env.n = &n;
  env.s = s;
  return eval(*root_, env);
}

bool Expression::uses(Var v) const { return uses_var(*root_, v); }

int Expression::lattice_dimension() const {
  int d = 0;
  const Var vars[] = {Var::n1, Var::n2, Var::n3, Var::n4};
  for (int k = 0; k < 4; ++k) {
    if (uses(vars[k])) d = k + 1;
  }
  return d;
}

}  // namespace zsk

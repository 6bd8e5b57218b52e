#pragma once

#include <array>
#include <complex>
#include <memory>
#include <string>
#include <string_view>

namespace zsk {

/*
  Arithmetic expressions over
    number | x | pi | e | n1..n4 | s | unary - | + - * / ^ | f(args) | ( ... )
  with f in {sin, cos, exp, log, abs, sqrt, frac, pow}. ^ is right associative
  and binds tighter than unary minus (-2^2 = -4). Printing inserts only the
  parentheses the grammar needs, so parse(print(e)) rebuilds the same tree.
*/
class Expression {
 public:
  enum class Var { x, n1, n2, n3, n4, s };

  struct Node;

  /// Throws parse_error with the offending position.
  [[nodiscard]] static Expression parse(std::string_view text);

  [[nodiscard]] std::string to_string() const;

  /// Real evaluation with x bound; n1..n4 and s are not available. Throws evaluation_error
  /// on log/sqrt of a negative number, division by zero or any non-finite result.
  [[nodiscard]] double evaluate(double x) const;

  /// Complex evaluation with the lattice variables n1..n4 and parameter s; x is bound to 0.
  /// frac requires a real argument.
  [[nodiscard]] std::complex<double> evaluate(const std::array<double, 4>& n, std::complex<double> s) const;

  [[nodiscard]] bool uses(Var v) const;
  /// Highest k such that nk occurs, or 0.
  [[nodiscard]] int lattice_dimension() const;

 private:
  explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

}  // namespace zsk

#pragma once

#include <Eigen/Dense>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rmap {

// Value, gradient and Hessian of a scalar chart function at a point.
// Derivatives are exact (forward-propagated through the expression tree),
// and the Hessian is symmetric bit-for-bit: every combination rule below
// is written so that the (i,j) and (j,i) entries run through identical
// floating-point operations.
struct Jet2 {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;

  explicit Jet2(int dim)
      : grad(Eigen::VectorXd::Zero(dim)), hess(Eigen::MatrixXd::Zero(dim, dim)) {}

  int dim() const { return static_cast<int>(grad.size()); }

  static Jet2 constant(double v, int dim) {
    Jet2 j(dim);
    j.value = v;
    return j;
  }
  static Jet2 coordinate(double v, int index, int dim) {
    Jet2 j(dim);
    j.value = v;
    j.grad[index] = 1.0;
    return j;
  }
};

Jet2 operator+(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a, const Jet2& b);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator/(const Jet2& a, const Jet2& b);

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " (at position " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

// Evaluation failure: the point left the real domain of some subexpression
// (log of a nonpositive value, sqrt of a negative one, near-zero divisor).
struct DomainError : std::runtime_error {
  DomainError(const std::string& msg, std::string subexpression)
      : std::runtime_error(msg + " in '" + subexpression + "'"),
        subexpression(std::move(subexpression)) {}
  std::string subexpression;
};

enum class UnaryFn { Neg, Sin, Cos, Exp, Log, Sqrt, Tanh };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

// Immutable scalar expression over the coordinates of one chart.
// Coordinates are referenced by index; printing takes the name list.
// Sharing of subtrees is safe: nodes never change after parsing, so
// concurrent evaluation from many threads needs no locking.
class Expression {
 public:
  Expression() = default;

  static Expression constant(double v);
  static Expression coordinate(int index);
  static Expression unary(UnaryFn fn, Expression arg);
  static Expression binary(BinaryOp op, Expression lhs, Expression rhs);

  bool valid() const { return root_ != nullptr; }

  // Plain evaluation (no derivatives). Throws DomainError.
  double value_at(const Eigen::VectorXd& p) const;

  // Value with exact first and second partials with respect to all
  // `dim` coordinates, where dim = p.size().
  Jet2 jet2_at(const Eigen::VectorXd& p) const;

  // Infix form with minimal parentheses; parses back to a structurally
  // equal tree under the same coordinate names.
  std::string print(const std::vector<std::string>& coords) const;

  bool structurally_equal(const Expression& other) const;

  // Largest coordinate index referenced, or -1 for closed forms.
  int max_coord_index() const;

  bool is_constant_zero() const;
  bool is_constant() const;
  double constant_value() const;  // valid only when is_constant()

  struct Node;  // defined in expr.cpp

 private:
  explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

// Recursive-descent parser for the scenario expression grammar:
// pow (^, constant exponent) > unary minus > * / > + -, parentheses,
// single-argument calls sin cos exp log sqrt tanh, named constants pi, e.
// Identifiers must be coordinate names from `coords`.
Expression parse_expression(std::string_view text, const std::vector<std::string>& coords);

}  // namespace rmap

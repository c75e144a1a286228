#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "rmap/expr.hpp"
#include "rmap/report.hpp"
#include "rmap/sampling.hpp"

namespace rmap {

// One coordinate chart of a Riemannian manifold: symbolic metric entries
// and an optional almost complex structure J^i_j. The metric stores only
// the upper triangle, so g_ij and g_ji are the same expression object and
// symmetry of anything derived from them is exact.
class ManifoldSpec {
 public:
  ManifoldSpec() = default;
  ManifoldSpec(std::string name, int dim, std::vector<std::string> coords);

  // Flat chart with the identity metric and default coordinate names.
  static ManifoldSpec euclidean(std::string name, int dim);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  const std::vector<std::string>& coords() const { return coords_; }

  void set_metric_entry(int i, int j, Expression e);
  void set_identity_metric();
  const Expression& metric_entry(int i, int j) const;

  // e_{2k} -> e_{2k+1}, e_{2k+1} -> -e_{2k} (0-based), the standard
  // structure on R^{2n}. Requires even dimension.
  void set_canonical_complex_structure();
  void set_complex_structure_entry(int i, int j, Expression e);  // J^i_j
  bool has_complex_structure() const { return has_J_; }
  bool canonical_complex_structure() const { return canonical_J_; }
  const Expression& complex_structure_entry(int i, int j) const;

  bool metric_is_identity() const;

 private:
  std::string name_;
  int dim_ = 0;
  std::vector<std::string> coords_;
  std::vector<Expression> metric_upper_;  // row-major upper triangle, i <= j
  std::vector<Expression> J_;             // row-major dim x dim, when present
  bool has_J_ = false;
  bool canonical_J_ = false;
};

struct Point {
  const ManifoldSpec* manifold = nullptr;
  Eigen::VectorXd x;
};

struct TangentVector {
  Point base;
  Eigen::VectorXd v;  // components in the coordinate frame
};

// Levi-Civita connection coefficients at one point: gamma[k](i,j) holds
// the k-th symbol contracted with d/dx^i, d/dx^j. Symmetric in (i,j).
struct Christoffel {
  std::vector<Eigen::MatrixXd> gamma;

  double operator()(int k, int i, int j) const { return gamma[k](i, j); }
  int dim() const { return static_cast<int>(gamma.size()); }
};

struct NonPositiveDefiniteError : std::runtime_error {
  NonPositiveDefiniteError(const std::string& manifold, double smallest_eigenvalue)
      : std::runtime_error("metric on " + manifold +
                           " not positive definite (smallest eigenvalue " +
                           std::to_string(smallest_eigenvalue) + ")"),
        smallest_eigenvalue(smallest_eigenvalue) {}
  double smallest_eigenvalue;
};

// Entrywise evaluation of the metric expressions. Throws
// NonPositiveDefiniteError if any eigenvalue falls below 1e-10.
Eigen::MatrixXd metric_at(const ManifoldSpec& M, const Point& p);

// Levi-Civita symbols from the closed-form inverse-metric formula with
// exact metric derivatives.
Christoffel christoffel_at(const ManifoldSpec& M, const Point& p);

// J^i_j evaluated at p. Requires a declared complex structure.
Eigen::MatrixXd complex_structure_at(const ManifoldSpec& M, const Point& p);

TangentVector apply_complex_structure(const ManifoldSpec& M, const TangentVector& u);

// g-inner product of two coordinate-frame vectors at p.
double inner(const Eigen::MatrixXd& metric, const Eigen::VectorXd& a,
             const Eigen::VectorXd& b);
double norm(const Eigen::MatrixXd& metric, const Eigen::VectorXd& a);

// J^2 = -I and metric compatibility g(JX, JY) = g(X, Y), checked on the
// coordinate basis at every sample.
CheckReport check_almost_hermitian(const ManifoldSpec& M,
                                   const std::vector<Eigen::VectorXd>& samples, double tol,
                                   ExecutionPolicy policy = ExecutionPolicy::Serial);

// Parallelism of J: all coordinate components of the covariant derivative
// of J must vanish. Gated on the almost-Hermitian check.
CheckReport check_kahler(const ManifoldSpec& M,
                         const std::vector<Eigen::VectorXd>& samples, double tol,
                         ExecutionPolicy policy = ExecutionPolicy::Serial);

// Coordinate components of the covariant derivative of J at p:
// result[k](i,j) = d_k J^i_j + G^i_{kl} J^l_j - G^l_{kj} J^i_l.
std::vector<Eigen::MatrixXd> covariant_derivative_of_J(const ManifoldSpec& M,
                                                       const Point& p);

}  // namespace rmap

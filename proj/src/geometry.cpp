#include "rmap/geometry.hpp"

#include <cmath>

namespace rmap {

namespace {

constexpr double kPositiveDefiniteFloor = 1e-10;

std::vector<std::string> default_coords(int dim) {
  std::vector<std::string> c;
  c.reserve(dim);
  for (int i = 0; i < dim; ++i) c.push_back("x" + std::to_string(i + 1));
  return c;
}

}  // namespace

ManifoldSpec::ManifoldSpec(std::string name, int dim, std::vector<std::string> coords)
    : name_(std::move(name)), dim_(dim), coords_(std::move(coords)) {
  if (dim_ <= 0) throw std::invalid_argument("manifold dimension must be positive");
  if (coords_.empty()) coords_ = default_coords(dim_);
  if (static_cast<int>(coords_.size()) != dim_)
    throw std::invalid_argument("coordinate count does not match dimension");
  metric_upper_.resize(static_cast<std::size_t>(dim_) * (dim_ + 1) / 2);
}

ManifoldSpec ManifoldSpec::euclidean(std::string name, int dim) {
  ManifoldSpec m(std::move(name), dim, {});
  m.set_identity_metric();
  return m;
}

void ManifoldSpec::set_identity_metric() {
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j)
      set_metric_entry(i, j, Expression::constant(i == j ? 1.0 : 0.0));
}

void ManifoldSpec::set_metric_entry(int i, int j, Expression e) {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= dim_) throw std::out_of_range("metric index out of range");
  metric_upper_[static_cast<std::size_t>(i) * dim_ - i * (i + 1) / 2 + j] = std::move(e);
}

const Expression& ManifoldSpec::metric_entry(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= dim_) throw std::out_of_range("metric index out of range");
  const Expression& e =
      metric_upper_[static_cast<std::size_t>(i) * dim_ - i * (i + 1) / 2 + j];
  if (!e.valid()) throw std::logic_error("metric entry not set");
  return e;
}

bool ManifoldSpec::metric_is_identity() const {
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j) {
      const Expression& e =
          metric_upper_[static_cast<std::size_t>(i) * dim_ - i * (i + 1) / 2 + j];
      if (!e.valid()) return false;
      if (!e.structurally_equal(Expression::constant(i == j ? 1.0 : 0.0))) return false;
    }
  return true;
}

void ManifoldSpec::set_canonical_complex_structure() {
  if (dim_ % 2 != 0)
    throw std::invalid_argument("canonical complex structure needs even dimension");
  J_.assign(static_cast<std::size_t>(dim_) * dim_, Expression::constant(0.0));
  for (int k = 0; k < dim_ / 2; ++k) {
    // J e_{2k} = e_{2k+1}, J e_{2k+1} = -e_{2k}
    J_[static_cast<std::size_t>(2 * k + 1) * dim_ + 2 * k] = Expression::constant(1.0);
    J_[static_cast<std::size_t>(2 * k) * dim_ + 2 * k + 1] = Expression::constant(-1.0);
  }
  has_J_ = true;
  canonical_J_ = true;
}

void ManifoldSpec::set_complex_structure_entry(int i, int j, Expression e) {
  if (dim_ % 2 != 0)
    throw std::invalid_argument("complex structure needs even dimension");
  if (i < 0 || i >= dim_ || j < 0 || j >= dim_)
    throw std::out_of_range("complex structure index out of range");
  if (J_.empty()) J_.assign(static_cast<std::size_t>(dim_) * dim_, Expression::constant(0.0));
  J_[static_cast<std::size_t>(i) * dim_ + j] = std::move(e);
  has_J_ = true;
  canonical_J_ = false;
}

const Expression& ManifoldSpec::complex_structure_entry(int i, int j) const {
  if (!has_J_) throw std::logic_error("no complex structure declared on " + name_);
  return J_[static_cast<std::size_t>(i) * dim_ + j];
}

Eigen::MatrixXd metric_at(const ManifoldSpec& M, const Point& p) {
  const int m = M.dim();
  if (p.x.size() != m) throw std::invalid_argument("point dimension mismatch");
  Eigen::MatrixXd g(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const double v = M.metric_entry(i, j).value_at(p.x);
      g(i, j) = v;
      g(j, i) = v;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
  const double smallest = es.eigenvalues().minCoeff();
  if (smallest <= kPositiveDefiniteFloor) throw NonPositiveDefiniteError(M.name(), smallest);
  return g;
}

Christoffel christoffel_at(const ManifoldSpec& M, const Point& p) {
  const int m = M.dim();
  const Eigen::MatrixXd g = metric_at(M, p);
  const Eigen::MatrixXd ginv = g.inverse();

  // dg[l](i,j) = d_l g_ij; exactly symmetric in (i,j) because both
  // entries evaluate the same stored expression.
  std::vector<Eigen::MatrixXd> dg(m, Eigen::MatrixXd::Zero(m, m));
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const Jet2 jet = M.metric_entry(i, j).jet2_at(p.x);
      for (int l = 0; l < m; ++l) {
        dg[l](i, j) = jet.grad[l];
        dg[l](j, i) = jet.grad[l];
      }
    }

  Christoffel ch;
  ch.gamma.assign(m, Eigen::MatrixXd::Zero(m, m));
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        double sum = 0.0;
        for (int l = 0; l < m; ++l)
          sum += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        const double v = 0.5 * sum;
        ch.gamma[k](i, j) = v;
        ch.gamma[k](j, i) = v;
      }
  return ch;
}

Eigen::MatrixXd complex_structure_at(const ManifoldSpec& M, const Point& p) {
  const int m = M.dim();
  Eigen::MatrixXd J(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) J(i, j) = M.complex_structure_entry(i, j).value_at(p.x);
  return J;
}

TangentVector apply_complex_structure(const ManifoldSpec& M, const TangentVector& u) {
  const Eigen::MatrixXd J = complex_structure_at(M, u.base);
  return TangentVector{u.base, J * u.v};
}

double inner(const Eigen::MatrixXd& metric, const Eigen::VectorXd& a,
             const Eigen::VectorXd& b) {
  return a.dot(metric * b);
}

double norm(const Eigen::MatrixXd& metric, const Eigen::VectorXd& a) {
  return std::sqrt(std::max(0.0, inner(metric, a, a)));
}

std::vector<Eigen::MatrixXd> covariant_derivative_of_J(const ManifoldSpec& M,
                                                       const Point& p) {
  const int m = M.dim();
  const Christoffel ch = christoffel_at(M, p);

  Eigen::MatrixXd J(m, m);
  std::vector<Eigen::MatrixXd> dJ(m, Eigen::MatrixXd::Zero(m, m));  // dJ[k](i,j) = d_k J^i_j
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const Jet2 jet = M.complex_structure_entry(i, j).jet2_at(p.x);
      J(i, j) = jet.value;
      for (int k = 0; k < m; ++k) dJ[k](i, j) = jet.grad[k];
    }

  std::vector<Eigen::MatrixXd> nablaJ(m, Eigen::MatrixXd::Zero(m, m));
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double v = dJ[k](i, j);
        for (int l = 0; l < m; ++l)
          v += ch(i, k, l) * J(l, j) - ch(l, k, j) * J(i, l);
        nablaJ[k](i, j) = v;
      }
  return nablaJ;
}

CheckReport check_almost_hermitian(const ManifoldSpec& M,
                                   const std::vector<Eigen::VectorXd>& samples, double tol,
                                   ExecutionPolicy policy) {
  if (!M.has_complex_structure()) {
    CheckReport rep;
    rep.name = "almost_hermitian";
    rep.tolerance = tol;
    rep.samples = static_cast<int>(samples.size());
    rep.verdict = Verdict::Error;
    rep.detail = "no complex structure declared on " + M.name();
    return rep;
  }

  const int m = M.dim();
  const int n = static_cast<int>(samples.size());
  std::vector<SampleOutcome> outcomes(n, SampleOutcome::vacuous(2));
  for_each_sample(n, policy, [&](int s) {
    try {
      const Point p{&M, samples[s]};
      const Eigen::MatrixXd J = complex_structure_at(M, p);
      const Eigen::MatrixXd g = metric_at(M, p);
      outcomes[s].residual[0] =
          (J * J + Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
      outcomes[s].residual[1] = (J.transpose() * g * J - g).cwiseAbs().maxCoeff();
    } catch (const std::exception& e) {
      outcomes[s].error = e.what();
    }
  });
  return assemble_samplewise("almost_hermitian", {"J_squared", "metric_compatibility"},
                             {tol, tol}, samples, outcomes);
}

CheckReport check_kahler(const ManifoldSpec& M,
                         const std::vector<Eigen::VectorXd>& samples, double tol,
                         ExecutionPolicy policy) {
  if (!M.has_complex_structure()) {
    CheckReport rep;
    rep.name = "kahler";
    rep.tolerance = tol;
    rep.samples = static_cast<int>(samples.size());
    rep.verdict = Verdict::Error;
    rep.detail = "no complex structure declared on " + M.name();
    return rep;
  }
  CheckReport hermitian = check_almost_hermitian(M, samples, tol, policy);
  if (hermitian.verdict == Verdict::Fail || hermitian.verdict == Verdict::Error) {
    CheckReport rep;
    rep.name = "kahler";
    rep.tolerance = tol;
    rep.samples = static_cast<int>(samples.size());
    rep.verdict =
        hermitian.verdict == Verdict::Error ? Verdict::Error : Verdict::VacuousPass;
    rep.detail = "almost-Hermitian precondition failed" +
                 (hermitian.detail.empty()
                      ? " (residual " + std::to_string(hermitian.max_residual) + ")"
                      : ": " + hermitian.detail);
    return rep;
  }

  const int n = static_cast<int>(samples.size());
  std::vector<SampleOutcome> outcomes(n, SampleOutcome::vacuous(1));
  for_each_sample(n, policy, [&](int s) {
    try {
      const Point p{&M, samples[s]};
      double worst = 0.0;
      for (const Eigen::MatrixXd& slab : covariant_derivative_of_J(M, p))
        worst = std::max(worst, slab.cwiseAbs().maxCoeff());
      outcomes[s].residual[0] = worst;
    } catch (const std::exception& e) {
      outcomes[s].error = e.what();
    }
  });
  return assemble_samplewise("kahler", {"J_parallel"}, {tol}, samples, outcomes);
}

}  // namespace rmap

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rmap/geometry.hpp"

using namespace rmap;

namespace {

ManifoldSpec flat_r4_with_J() {
  ManifoldSpec M = ManifoldSpec::euclidean("R4", 4);
  M.set_canonical_complex_structure();
  return M;
}

// theta in (0, pi): round sphere in polar coordinates
ManifoldSpec sphere_chart() {
  ManifoldSpec M("S2", 2, {"theta", "phi"});
  M.set_metric_entry(0, 0, parse_expression("1", M.coords()));
  M.set_metric_entry(0, 1, parse_expression("0", M.coords()));
  M.set_metric_entry(1, 1, parse_expression("sin(theta)^2", M.coords()));
  return M;
}

ManifoldSpec poincare_half_plane() {
  ManifoldSpec M("H2", 2, {"x", "y"});
  M.set_metric_entry(0, 0, parse_expression("1/(y^2)", M.coords()));
  M.set_metric_entry(0, 1, parse_expression("0", M.coords()));
  M.set_metric_entry(1, 1, parse_expression("1/(y^2)", M.coords()));
  return M;
}

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

Eigen::VectorXd vec4(double a, double b, double c, double d) {
  Eigen::VectorXd v(4);
  v << a, b, c, d;
  return v;
}

// Independent Christoffel oracle: the same inverse-metric formula but
// with metric derivatives from central differences of metric_at.
Christoffel fd_koszul(const ManifoldSpec& M, const Point& p, double h) {
  const int m = M.dim();
  const Eigen::MatrixXd ginv = metric_at(M, p).inverse();
  std::vector<Eigen::MatrixXd> dg(m);
  for (int l = 0; l < m; ++l) {
    Eigen::VectorXd hi = p.x, lo = p.x;
    hi[l] += h;
    lo[l] -= h;
    dg[l] = (metric_at(M, {&M, hi}) - metric_at(M, {&M, lo})) / (2.0 * h);
  }
  Christoffel ch;
  ch.gamma.assign(m, Eigen::MatrixXd::Zero(m, m));
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double sum = 0.0;
        for (int l = 0; l < m; ++l)
          sum += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        ch.gamma[k](i, j) = 0.5 * sum;
      }
  return ch;
}

double max_gamma_diff(const Christoffel& a, const Christoffel& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.gamma.size(); ++k)
    worst = std::max(worst, (a.gamma[k] - b.gamma[k]).cwiseAbs().maxCoeff());
  return worst;
}

std::vector<Eigen::VectorXd> random_points_2d(double lo0, double hi0, double lo1, double hi1,
                                              int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u0(lo0, hi0), u1(lo1, hi1);
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < count; ++i) pts.push_back(vec2(u0(rng), u1(rng)));
  return pts;
}

}  // namespace

TEST_CASE("metric evaluation: flat, sphere equator, half-plane") {
  ManifoldSpec R4 = ManifoldSpec::euclidean("R4", 4);
  CHECK(metric_at(R4, {&R4, vec4(0.3, -1, 2, 0)}).isIdentity(0.0));

  ManifoldSpec S2 = sphere_chart();
  const Eigen::MatrixXd g_eq = metric_at(S2, {&S2, vec2(std::acos(-1.0) / 2.0, 0.4)});
  CHECK(g_eq(0, 0) == 1.0);
  CHECK(g_eq(1, 1) == doctest::Approx(1.0).epsilon(1e-15));

  ManifoldSpec H2 = poincare_half_plane();
  const Eigen::MatrixXd g = metric_at(H2, {&H2, vec2(0.7, 2.0)});
  CHECK(g(0, 0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(g(1, 1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(g(0, 1) == 0.0);
}

TEST_CASE("non positive definite metrics are rejected with the smallest eigenvalue") {
  ManifoldSpec M("deg", 2, {"x", "y"});
  M.set_metric_entry(0, 0, parse_expression("x", M.coords()));  // sign changes with x
  M.set_metric_entry(0, 1, parse_expression("0", M.coords()));
  M.set_metric_entry(1, 1, parse_expression("1", M.coords()));
  CHECK_THROWS_AS(metric_at(M, {&M, vec2(-1.0, 0.0)}), NonPositiveDefiniteError);
  try {
    metric_at(M, {&M, vec2(-2.0, 0.0)});
    CHECK(false);
  } catch (const NonPositiveDefiniteError& e) {
    CHECK(e.smallest_eigenvalue == doctest::Approx(-2.0).epsilon(1e-12));
  }
  // positive side is fine
  CHECK_NOTHROW(metric_at(M, {&M, vec2(0.5, 0.0)}));
}

TEST_CASE("flat space has vanishing connection coefficients") {
  ManifoldSpec R4 = ManifoldSpec::euclidean("R4", 4);
  const Christoffel ch = christoffel_at(R4, {&R4, vec4(1, 2, -1, 0.5)});
  for (const Eigen::MatrixXd& slab : ch.gamma) CHECK(slab.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sphere chart connection matches the closed form") {
  ManifoldSpec S2 = sphere_chart();
  const double theta = std::acos(-1.0) / 4.0;
  const Christoffel ch = christoffel_at(S2, {&S2, vec2(theta, 1.1)});
  // Gamma^theta_{phi phi} = -sin(theta) cos(theta) = -1/2 at pi/4
  CHECK(ch(0, 1, 1) == doctest::Approx(-0.5).epsilon(1e-12));
  // Gamma^phi_{theta phi} = cot(theta) = 1 at pi/4
  CHECK(ch(1, 0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ch(1, 1, 0) == ch(1, 0, 1));
  CHECK(ch(0, 0, 0) == doctest::Approx(0.0));
}

TEST_CASE("half-plane connection matches the closed form at y = 2") {
  ManifoldSpec H2 = poincare_half_plane();
  const Christoffel ch = christoffel_at(H2, {&H2, vec2(0.3, 2.0)});
  CHECK(ch(0, 0, 1) == doctest::Approx(-0.5).epsilon(1e-12));  // Gamma^x_{xy} = -1/y
  CHECK(ch(1, 0, 0) == doctest::Approx(0.5).epsilon(1e-12));   // Gamma^y_{xx} = 1/y
  CHECK(ch(1, 1, 1) == doctest::Approx(-0.5).epsilon(1e-12));  // Gamma^y_{yy} = -1/y
  CHECK(ch(0, 0, 0) == doctest::Approx(0.0));
  CHECK(ch(0, 1, 1) == doctest::Approx(0.0));
}

TEST_CASE("connection agrees with the finite-difference oracle on 16 points each") {
  ManifoldSpec S2 = sphere_chart();
  for (const Eigen::VectorXd& x : random_points_2d(0.4, 2.7, -3.0, 3.0, 16, 42)) {
    const Point p{&S2, x};
    CHECK(max_gamma_diff(christoffel_at(S2, p), fd_koszul(S2, p, 1e-5)) < 1e-6);
  }
  ManifoldSpec H2 = poincare_half_plane();
  for (const Eigen::VectorXd& x : random_points_2d(-2.0, 2.0, 0.5, 3.0, 16, 43)) {
    const Point p{&H2, x};
    CHECK(max_gamma_diff(christoffel_at(H2, p), fd_koszul(H2, p, 1e-5)) < 1e-6);
  }
}

TEST_CASE("torsion-freeness is exact and metric compatibility holds") {
  const std::vector<ManifoldSpec> manifolds = {sphere_chart(), poincare_half_plane()};
  for (const ManifoldSpec& M : manifolds) {
    const auto pts = M.name() == "S2" ? random_points_2d(0.4, 2.7, -3, 3, 32, 7)
                                      : random_points_2d(-2, 2, 0.5, 3, 32, 9);
    for (const Eigen::VectorXd& x : pts) {
      const Point p{&M, x};
      const Christoffel ch = christoffel_at(M, p);
      const int m = M.dim();
      for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) CHECK(ch(k, i, j) == ch(k, j, i));

      // d_k g_ij = Gamma^l_{ki} g_lj + Gamma^l_{kj} g_il, with the metric
      // derivative from exact jets
      const Eigen::MatrixXd g = metric_at(M, p);
      for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) {
            const double dg = M.metric_entry(i, j).jet2_at(x).grad[k];
            double rhs = 0.0;
            for (int l = 0; l < m; ++l)
              rhs += ch(l, k, i) * g(l, j) + ch(l, k, j) * g(i, l);
            CHECK(std::abs(dg - rhs) < 1e-8);
          }
    }
  }
}

TEST_CASE("canonical complex structure rotates the paper frame") {
  ManifoldSpec M = flat_r4_with_J();
  const Point p{&M, vec4(0.1, 0.2, 0.3, 0.4)};
  const Eigen::VectorXd Z1 = vec4(1, 0, 1, 0);
  const Eigen::VectorXd Z2 = vec4(0, 1, 0, -1);
  const Eigen::VectorXd Z3 = vec4(1, 0, -1, 0);
  const Eigen::VectorXd Z4 = vec4(0, 1, 0, 1);
  const Eigen::MatrixXd J = complex_structure_at(M, p);
  CHECK((J * Z1 - Z4).norm() == 0.0);
  CHECK((J * Z2 + Z3).norm() == 0.0);
  // J^2 = -I on random vectors
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> c(-1, 1);
  for (int t = 0; t < 8; ++t) {
    const Eigen::VectorXd u = vec4(c(rng), c(rng), c(rng), c(rng));
    CHECK((J * (J * u) + u).norm() == 0.0);
  }
}

TEST_CASE("complex structure application is linear") {
  ManifoldSpec M = flat_r4_with_J();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> c(-2, 2);
  const Point p{&M, vec4(0, 0, 0, 0)};
  for (int t = 0; t < 16; ++t) {
    const double a = c(rng), b = c(rng);
    const Eigen::VectorXd u = vec4(c(rng), c(rng), c(rng), c(rng));
    const Eigen::VectorXd w = vec4(c(rng), c(rng), c(rng), c(rng));
    const TangentVector lin = apply_complex_structure(M, {p, a * u + b * w});
    const TangentVector ju = apply_complex_structure(M, {p, u});
    const TangentVector jw = apply_complex_structure(M, {p, w});
    CHECK((lin.v - a * ju.v - b * jw.v).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("almost Hermitian check: flat with canonical J passes with zero residual") {
  ManifoldSpec M = flat_r4_with_J();
  const std::vector<Eigen::VectorXd> pts = {vec4(0, 0, 0, 0), vec4(1, -1, 2, 0.5)};
  const CheckReport rep = check_almost_hermitian(M, pts, 1e-9);
  CHECK(rep.verdict == Verdict::Pass);
  CHECK(rep.max_residual == 0.0);
}

TEST_CASE("almost Hermitian check: doubled J fails squaring with residual 3") {
  ManifoldSpec M = ManifoldSpec::euclidean("R4", 4);
  const std::vector<std::string> coords = M.coords();
  // 2 * canonical J
  for (int k = 0; k < 2; ++k) {
    M.set_complex_structure_entry(2 * k + 1, 2 * k, parse_expression("2", coords));
    M.set_complex_structure_entry(2 * k, 2 * k + 1, parse_expression("-2", coords));
  }
  const CheckReport rep = check_almost_hermitian(M, {vec4(0, 0, 0, 0)}, 1e-9);
  CHECK(rep.verdict == Verdict::Fail);
  CHECK(rep.subchecks[0].name == "J_squared");
  CHECK(rep.subchecks[0].max_residual == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("almost Hermitian check: stretched metric fails compatibility with residual 1") {
  ManifoldSpec M("stretched", 4, {});
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j)
      M.set_metric_entry(i, j, Expression::constant(i != j ? 0.0 : (i == 1 ? 2.0 : 1.0)));
  M.set_canonical_complex_structure();
  const CheckReport rep = check_almost_hermitian(M, {vec4(0.3, 0.1, -0.2, 0.9)}, 1e-9);
  CHECK(rep.verdict == Verdict::Fail);
  CHECK(rep.subchecks[0].max_residual == doctest::Approx(0.0));  // J^2 still fine
  CHECK(rep.subchecks[1].name == "metric_compatibility");
  CHECK(rep.subchecks[1].max_residual == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("parallel complex structure: flat charts pass") {
  ManifoldSpec M = flat_r4_with_J();
  CHECK(check_kahler(M, {vec4(0, 0, 0, 0), vec4(1, 2, 3, 4)}, 1e-9).verdict == Verdict::Pass);

  ManifoldSpec C1("C1", 2, {"x", "y"});
  C1.set_identity_metric();
  C1.set_complex_structure_entry(0, 1, parse_expression("-1", C1.coords()));
  C1.set_complex_structure_entry(1, 0, parse_expression("1", C1.coords()));
  CHECK(check_kahler(C1, {vec2(0.4, -0.7)}, 1e-9).verdict == Verdict::Pass);
}

TEST_CASE("conformal product factor keeps J parallel") {
  // diag(1 + x1^2, 1 + x1^2, 1, 1): conformal plane times flat plane
  ManifoldSpec M("conf", 4, {"x1", "x2", "x3", "x4"});
  M.set_metric_entry(0, 0, parse_expression("1 + x1^2", M.coords()));
  M.set_metric_entry(1, 1, parse_expression("1 + x1^2", M.coords()));
  M.set_metric_entry(2, 2, parse_expression("1", M.coords()));
  M.set_metric_entry(3, 3, parse_expression("1", M.coords()));
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) M.set_metric_entry(i, j, Expression::constant(0.0));
  M.set_canonical_complex_structure();
  const CheckReport herm = check_almost_hermitian(M, {vec4(0.7, -0.3, 0.2, 1.1)}, 1e-9);
  CHECK(herm.verdict == Verdict::Pass);
  const CheckReport rep = check_kahler(M, {vec4(0.7, -0.3, 0.2, 1.1)}, 1e-9);
  CHECK(rep.verdict == Verdict::Pass);
  CHECK(rep.max_residual < 1e-12);
}

TEST_CASE("cross-line conformal factor breaks parallelism of J") {
  // diag(1 + x3^2, 1 + x3^2, 1, 1): Hermitian but the two-form is not closed
  ManifoldSpec M("nk", 4, {"x1", "x2", "x3", "x4"});
  M.set_metric_entry(0, 0, parse_expression("1 + x3^2", M.coords()));
  M.set_metric_entry(1, 1, parse_expression("1 + x3^2", M.coords()));
  M.set_metric_entry(2, 2, parse_expression("1", M.coords()));
  M.set_metric_entry(3, 3, parse_expression("1", M.coords()));
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) M.set_metric_entry(i, j, Expression::constant(0.0));
  M.set_canonical_complex_structure();

  const Eigen::VectorXd x = vec4(0.0, 0.0, 1.0, 0.0);
  CHECK(check_almost_hermitian(M, {x}, 1e-9).verdict == Verdict::Pass);

  // hand value: the (4,1,1) component of the covariant derivative of J
  // equals x3 (= 1 here)
  const auto nablaJ = covariant_derivative_of_J(M, {&M, x});
  CHECK(nablaJ[0](3, 0) == doctest::Approx(1.0).epsilon(1e-12));

  const CheckReport rep = check_kahler(M, {x}, 1e-9);
  CHECK(rep.verdict == Verdict::Fail);
  CHECK(rep.max_residual >= 1.0);

  // cross-check the full covariant derivative against finite differences
  // of J plus the finite-difference connection
  const Point p{&M, x};
  const Christoffel ch = fd_koszul(M, p, 1e-5);
  const Eigen::MatrixXd J = complex_structure_at(M, p);
  for (int k = 0; k < 4; ++k) {
    Eigen::VectorXd hi = x, lo = x;
    hi[k] += 1e-5;
    lo[k] -= 1e-5;
    const Eigen::MatrixXd dJ =
        (complex_structure_at(M, {&M, hi}) - complex_structure_at(M, {&M, lo})) / 2e-5;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double v = dJ(i, j);
        for (int l = 0; l < 4; ++l) v += ch(i, k, l) * J(l, j) - ch(l, k, j) * J(i, l);
        CHECK(std::abs(nablaJ[k](i, j) - v) < 1e-6);
      }
  }
}

TEST_CASE("geometry checks error out without a complex structure") {
  ManifoldSpec M = ManifoldSpec::euclidean("R2", 2);
  CHECK_THROWS_AS(complex_structure_at(M, {&M, vec2(0, 0)}), std::logic_error);
  CHECK(check_almost_hermitian(M, {vec2(0, 0)}, 1e-9).verdict == Verdict::Error);
  CHECK(check_kahler(M, {vec2(0, 0)}, 1e-9).verdict == Verdict::Error);
}

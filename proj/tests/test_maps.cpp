#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rmap/maps.hpp"

using namespace rmap;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> vals) {
  Eigen::VectorXd v(static_cast<int>(vals.size()));
  int i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

struct PlaneMapFixture {
  ManifoldSpec R4 = ManifoldSpec::euclidean("R4", 4);
  ManifoldSpec R3 = ManifoldSpec::euclidean("R3", 3);
  MapSpec F;

  PlaneMapFixture() {
    R4.set_canonical_complex_structure();
    F.name = "F";
    F.source = &R4;
    F.target = &R3;
    for (const char* c : {"(x1 - x3)/sqrt(2)", "0", "(x2 + x4)/sqrt(2)"})
      F.components.push_back(parse_expression(c, R4.coords()));
    F.validate();
  }
};

struct CircleFixture {
  ManifoldSpec line = ManifoldSpec::euclidean("Line", 1);
  ManifoldSpec plane = ManifoldSpec::euclidean("Plane", 2);
  MapSpec C;

  CircleFixture() {
    C.name = "C";
    C.source = &line;
    C.target = &plane;
    C.components.push_back(parse_expression("cos(x1)", line.coords()));
    C.components.push_back(parse_expression("sin(x1)", line.coords()));
    C.validate();
  }
};

const Eigen::VectorXd Z1 = vec({1, 0, 1, 0});
const Eigen::VectorXd Z2 = vec({0, 1, 0, -1});
const Eigen::VectorXd Z3 = vec({1, 0, -1, 0});
const Eigen::VectorXd Z4 = vec({0, 1, 0, 1});

}  // namespace

TEST_CASE("plane map: rank two and the pushforwards of the adapted frame") {
  PlaneMapFixture fx;
  const Point p{&fx.R4, vec({0.3, -0.7, 1.2, 0.4})};
  const JacobianData jd = jacobian_at(fx.F, p);
  CHECK(jd.rank == 2);
  CHECK(jd.singular_values[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(jd.singular_values[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(jd.singular_values[2] == doctest::Approx(0.0));

  const double s2 = std::sqrt(2.0);
  CHECK(((jd.dF * Z3) - vec({s2, 0, 0})).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(((jd.dF * Z4) - vec({0, 0, s2})).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((jd.dF * Z1).cwiseAbs().maxCoeff() == 0.0);
  CHECK((jd.dF * Z2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("identity and constant maps hit the rank extremes") {
  ManifoldSpec R2 = ManifoldSpec::euclidean("R2", 2);
  MapSpec id;
  id.name = "id";
  id.source = &R2;
  id.target = &R2;
  id.components.push_back(parse_expression("x1", R2.coords()));
  id.components.push_back(parse_expression("x2", R2.coords()));
  const Point p{&R2, vec({0.2, -0.9})};
  const JacobianData jid = jacobian_at(id, p);
  CHECK(jid.rank == 2);
  CHECK(jid.dF.isIdentity(0.0));

  MapSpec cst;
  cst.name = "cst";
  cst.source = &R2;
  cst.target = &R2;
  cst.components.push_back(parse_expression("1", R2.coords()));
  cst.components.push_back(parse_expression("-2", R2.coords()));
  const JacobianData jc = jacobian_at(cst, p);
  CHECK(jc.rank == 0);
  CHECK(jc.dF.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("constant-rank check separates constant from degenerating ranks") {
  PlaneMapFixture fx;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> c(-1, 1);
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < 12; ++i) pts.push_back(vec({c(rng), c(rng), c(rng), c(rng)}));
  CHECK(check_constant_rank(fx.F, pts).verdict == Verdict::Pass);

  // (x^2, 0): differential vanishes on the x = 0 line
  ManifoldSpec R2 = ManifoldSpec::euclidean("R2", 2);
  MapSpec sq;
  sq.name = "sq";
  sq.source = &R2;
  sq.target = &R2;
  sq.components.push_back(parse_expression("x1^2", R2.coords()));
  sq.components.push_back(parse_expression("0", R2.coords()));
  const CheckReport rep =
      check_constant_rank(sq, {vec({0.0, 0.0}), vec({0.5, 0.3}), vec({-0.7, 0.1})});
  CHECK(rep.verdict == Verdict::Fail);
  CHECK(rep.detail.find("0") != std::string::npos);
  CHECK(rep.detail.find("1") != std::string::npos);

  // needs two samples
  CHECK(check_constant_rank(sq, {vec({0.1, 0.1})}).verdict == Verdict::Error);
}

TEST_CASE("frame splitting of the plane map recovers the adapted subspaces") {
  PlaneMapFixture fx;
  const Point p{&fx.R4, vec({0.1, 0.2, 0.3, 0.4})};
  const FrameBundle fb = split_at(fx.F, p);
  CHECK(fb.rank == 2);
  CHECK(fb.vertical.cols() == 2);
  CHECK(fb.horizontal.cols() == 2);
  CHECK(fb.range.cols() == 2);
  CHECK(fb.complement.cols() == 1);

  // orthonormality in the source metric
  CHECK((fb.vertical.transpose() * fb.g1 * fb.vertical -
         Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((fb.horizontal.transpose() * fb.g1 * fb.horizontal -
         Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((fb.vertical.transpose() * fb.g1 * fb.horizontal).cwiseAbs().maxCoeff() < 1e-10);

  // kernel really is the kernel
  const JacobianData jd = jacobian_at(fx.F, p);
  CHECK((jd.dF * fb.vertical).cwiseAbs().maxCoeff() < 1e-9);

  // vertical span contains the adapted kernel frame
  auto in_span = [&](const Eigen::VectorXd& v, const Eigen::MatrixXd& frame) {
    Eigen::VectorXd res = v;
    for (int c = 0; c < frame.cols(); ++c)
      res -= inner(fb.g1, frame.col(c), v) * frame.col(c);
    return norm(fb.g1, res);
  };
  CHECK(in_span(Z1, fb.vertical) < 1e-10);
  CHECK(in_span(Z2, fb.vertical) < 1e-10);
  CHECK(in_span(Z3, fb.horizontal) < 1e-10);
  CHECK(in_span(Z4, fb.horizontal) < 1e-10);

  // range complement is the second target axis, up to sign fixed positive
  CHECK(fb.complement(0, 0) == doctest::Approx(0.0));
  CHECK(fb.complement(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fb.complement(2, 0) == doctest::Approx(0.0));
}

TEST_CASE("frame splitting is reproducible bit for bit") {
  PlaneMapFixture fx;
  const Point p{&fx.R4, vec({0.9, -0.4, 0.2, 0.7})};
  const FrameBundle a = split_at(fx.F, p);
  const FrameBundle b = split_at(fx.F, p);
  CHECK((a.vertical - b.vertical).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.horizontal - b.horizontal).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.range - b.range).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.complement - b.complement).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("identity map splits trivially; circle inclusion gives tangent and normal") {
  ManifoldSpec R2 = ManifoldSpec::euclidean("R2", 2);
  MapSpec id;
  id.name = "id";
  id.source = &R2;
  id.target = &R2;
  id.components.push_back(parse_expression("x1", R2.coords()));
  id.components.push_back(parse_expression("x2", R2.coords()));
  const FrameBundle fid = split_at(id, {&R2, vec({0.4, 0.5})});
  CHECK(fid.vertical.cols() == 0);
  CHECK(fid.complement.cols() == 0);
  CHECK(fid.horizontal.cols() == 2);

  CircleFixture cf;
  const double t = 0.8;
  const FrameBundle fb = split_at(cf.C, {&cf.line, vec({t})});
  CHECK(fb.vertical.cols() == 0);
  CHECK(fb.rank == 1);
  // range = unit tangent up to sign, complement = unit normal up to sign
  const Eigen::VectorXd tangent = vec({-std::sin(t), std::cos(t)});
  const Eigen::VectorXd normal = vec({std::cos(t), std::sin(t)});
  CHECK(std::abs(std::abs(fb.range.col(0).dot(tangent)) - 1.0) < 1e-12);
  CHECK(std::abs(std::abs(fb.complement.col(0).dot(normal)) - 1.0) < 1e-12);
}

TEST_CASE("anchored splitting follows the anchor across a stencil") {
  CircleFixture cf;
  const Point p{&cf.line, vec({0.8})};
  const FrameBundle anchor = split_at(cf.C, p);
  const double h = 1e-5;
  const FrameBundle plus = split_at_anchored(cf.C, {&cf.line, vec({0.8 + h})}, anchor);
  const FrameBundle minus = split_at_anchored(cf.C, {&cf.line, vec({0.8 - h})}, anchor);
  // the range frame is +- the unit tangent; its derivative rotates with
  // the same sign at one radian per unit step
  const double sign = anchor.range.col(0).dot(vec({-std::sin(0.8), std::cos(0.8)}));
  CHECK(std::abs(std::abs(sign) - 1.0) < 1e-12);
  const Eigen::VectorXd d_range = (plus.range.col(0) - minus.range.col(0)) / (2 * h);
  const Eigen::VectorXd expect = sign * vec({-std::cos(0.8), -std::sin(0.8)});
  CHECK((d_range - expect).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("riemannian map check: plane map passes, scaling fails with residual 3") {
  PlaneMapFixture fx;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> c(-1, 1);
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < 8; ++i) pts.push_back(vec({c(rng), c(rng), c(rng), c(rng)}));
  CHECK(check_riemannian_map(fx.F, pts, 1e-9).verdict == Verdict::Pass);

  ManifoldSpec R2 = ManifoldSpec::euclidean("R2", 2);
  MapSpec dbl;
  dbl.name = "dbl";
  dbl.source = &R2;
  dbl.target = &R2;
  dbl.components.push_back(parse_expression("2*x1", R2.coords()));
  dbl.components.push_back(parse_expression("2*x2", R2.coords()));
  const CheckReport rep = check_riemannian_map(dbl, {vec({0.1, 0.2})}, 1e-9);
  CHECK(rep.verdict == Verdict::Fail);
  CHECK(rep.max_residual == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("cylinder map is Riemannian") {
  ManifoldSpec R4 = ManifoldSpec::euclidean("R4", 4);
  ManifoldSpec R3 = ManifoldSpec::euclidean("R3", 3);
  MapSpec G;
  G.name = "G";
  G.source = &R4;
  G.target = &R3;
  for (const char* c : {"cos((x1 - x3)/sqrt(2))", "sin((x1 - x3)/sqrt(2))",
                        "(x2 + x4)/sqrt(2)"})
    G.components.push_back(parse_expression(c, R4.coords()));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> c(-1, 1);
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < 8; ++i) pts.push_back(vec({c(rng), c(rng), c(rng), c(rng)}));
  CHECK(check_riemannian_map(G, pts, 1e-9).verdict == Verdict::Pass);

  // |G_* Z3|^2 = 2 with zero cross term: hand chain rule
  const Point p{&R4, pts[0]};
  const Eigen::MatrixXd dG = jacobian_at(G, p).dF;
  CHECK((dG * Z3).squaredNorm() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK((dG * Z4).squaredNorm() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs((dG * Z3).dot(dG * Z4)) < 1e-12);
}

TEST_CASE("adjoint solves the defining identity and inverts on the horizontal space") {
  PlaneMapFixture fx;
  const Point p{&fx.R4, vec({0.5, 0.1, -0.3, 0.8})};

  // first image basis vector pulls back to Z3 / sqrt(2)
  const TangentVector xstar = adjoint_at(fx.F, p, vec({1, 0, 0}));
  const double isq2 = 1.0 / std::sqrt(2.0);
  CHECK((xstar.v - vec({isq2, 0, -isq2, 0})).cwiseAbs().maxCoeff() < 1e-12);

  // complement directions pull back to zero
  CHECK(adjoint_at(fx.F, p, vec({0, 1, 0})).v.cwiseAbs().maxCoeff() == 0.0);

  // defining identity on the coordinate frame, random right-hand sides
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> c(-2, 2);
  const Eigen::MatrixXd dF = jacobian_at(fx.F, p).dF;
  const Eigen::MatrixXd g1 = metric_at(fx.R4, p);
  const Eigen::MatrixXd g2 = metric_at(fx.R3, map_point(fx.F, p));
  for (int t = 0; t < 16; ++t) {
    const Eigen::VectorXd y = vec({c(rng), c(rng), c(rng)});
    const Eigen::VectorXd xs = adjoint_at(fx.F, p, y).v;
    for (int i = 0; i < 4; ++i) {
      const Eigen::VectorXd e = Eigen::VectorXd::Unit(4, i);
      CHECK(std::abs(inner(g1, e, xs) - inner(g2, dF * e, y)) < 1e-10);
    }
  }

  // pseudo-inverse property on horizontal vectors
  const FrameBundle fb = split_at(fx.F, p);
  for (int i = 0; i < fb.horizontal.cols(); ++i) {
    const Eigen::VectorXd h = fb.horizontal.col(i);
    CHECK((adjoint_at(fx.F, p, dF * h).v - h).cwiseAbs().maxCoeff() < 1e-9);
  }

  // identity map: adjoint is the identity
  ManifoldSpec R2 = ManifoldSpec::euclidean("R2", 2);
  MapSpec id;
  id.name = "id";
  id.source = &R2;
  id.target = &R2;
  id.components.push_back(parse_expression("x1", R2.coords()));
  id.components.push_back(parse_expression("x2", R2.coords()));
  const Eigen::VectorXd y = vec({0.3, -0.8});
  CHECK((adjoint_at(id, {&R2, vec({0, 0})}, y).v - y).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("adjoint with non-euclidean metrics lands in the horizontal space") {
  // half-plane source projected to the line: adjoint output must be
  // g1-orthogonal to the kernel for any target vector
  ManifoldSpec H2("H2", 2, {"x", "y"});
  H2.set_metric_entry(0, 0, parse_expression("1/(y^2)", H2.coords()));
  H2.set_metric_entry(0, 1, parse_expression("0", H2.coords()));
  H2.set_metric_entry(1, 1, parse_expression("1/(y^2)", H2.coords()));
  ManifoldSpec line = ManifoldSpec::euclidean("Line", 1);
  MapSpec P;
  P.name = "P";
  P.source = &H2;
  P.target = &line;
  P.components.push_back(parse_expression("x", H2.coords()));

  const Point p{&H2, vec({0.4, 2.0})};
  Eigen::VectorXd y(1);
  y << 1.0;
  const Eigen::VectorXd xs = adjoint_at(P, p, y).v;
  const Eigen::MatrixXd g1 = metric_at(H2, p);
  CHECK(std::abs(inner(g1, xs, vec({0, 1}))) < 1e-12);  // kernel = vertical axis
  // g1(x, x*) = g2(dP x, y): x = d/dx gives x*_1 / y^2 = 1
  CHECK(xs[0] == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("map validation catches mismatched components") {
  ManifoldSpec R2 = ManifoldSpec::euclidean("R2", 2);
  ManifoldSpec R3 = ManifoldSpec::euclidean("R3", 3);
  MapSpec bad;
  bad.name = "bad";
  bad.source = &R2;
  bad.target = &R3;
  bad.components.push_back(parse_expression("x1", R2.coords()));
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rmap/expr.hpp"

using rmap::Expression;
using rmap::Jet2;
using rmap::parse_expression;

namespace {

const std::vector<std::string> kCoords4 = {"x1", "x2", "x3", "x4"};

Eigen::VectorXd vec4(double a, double b, double c, double d) {
  Eigen::VectorXd v(4);
  v << a, b, c, d;
  return v;
}

// Independent derivative oracle: central finite differences of the plain
// evaluator.
Eigen::VectorXd fd_gradient(const Expression& e, const Eigen::VectorXd& p, double h) {
  Eigen::VectorXd g(p.size());
  for (int i = 0; i < p.size(); ++i) {
    Eigen::VectorXd hi = p, lo = p;
    hi[i] += h;
    lo[i] -= h;
    g[i] = (e.value_at(hi) - e.value_at(lo)) / (2.0 * h);
  }
  return g;
}

Eigen::MatrixXd fd_hessian(const Expression& e, const Eigen::VectorXd& p, double h) {
  Eigen::MatrixXd H(p.size(), p.size());
  for (int i = 0; i < p.size(); ++i)
    for (int j = 0; j < p.size(); ++j) {
      Eigen::VectorXd pp = p, pm = p, mp = p, mm = p;
      pp[i] += h; pp[j] += h;
      pm[i] += h; pm[j] -= h;
      mp[i] -= h; mp[j] += h;
      mm[i] -= h; mm[j] -= h;
      H(i, j) = (e.value_at(pp) - e.value_at(pm) - e.value_at(mp) + e.value_at(mm)) /
                (4.0 * h * h);
    }
  return H;
}

// Random polynomial of degree <= 4 in <= 4 variables, built as a short
// sum of coefficient * monomial terms.
Expression random_polynomial(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> terms(1, 5);
  std::uniform_int_distribution<int> degree(0, 4);
  std::uniform_int_distribution<int> var(0, 3);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  Expression sum = Expression::constant(coeff(rng));
  const int nterms = terms(rng);
  for (int t = 0; t < nterms; ++t) {
    Expression mono = Expression::constant(coeff(rng));
    const int deg = degree(rng);
    for (int d = 0; d < deg; ++d)
      mono = Expression::binary(rmap::BinaryOp::Mul, std::move(mono),
                                Expression::coordinate(var(rng)));
    sum = Expression::binary(rmap::BinaryOp::Add, std::move(sum), std::move(mono));
  }
  return sum;
}

}  // namespace

TEST_CASE("component expression of the plane map evaluates and differentiates") {
  const Expression e = parse_expression("(x1 - x3)/sqrt(2)", kCoords4);
  const Eigen::VectorXd p = vec4(1, 0, 0, 0);
  CHECK(e.value_at(p) == doctest::Approx(0.7071067811865476).epsilon(1e-15));

  // hand differentiation: gradient (1/sqrt2, 0, -1/sqrt2, 0), zero hessian
  const Jet2 jet = e.jet2_at(vec4(0.3, -0.7, 1.1, 0.2));
  const double isq2 = 1.0 / std::sqrt(2.0);
  CHECK(jet.grad[0] == doctest::Approx(isq2).epsilon(1e-15));
  CHECK(jet.grad[1] == 0.0);
  CHECK(jet.grad[2] == doctest::Approx(-isq2).epsilon(1e-15));
  CHECK(jet.grad[3] == 0.0);
  CHECK(jet.hess.cwiseAbs().maxCoeff() == 0.0);

  // cross-check against central differences
  const Eigen::VectorXd q = vec4(0.1, 0.2, -0.4, 0.9);
  const Jet2 jq = e.jet2_at(q);
  CHECK((jq.grad - fd_gradient(e, q, 1e-5)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("constant zero and trig identities") {
  const Expression zero = parse_expression("0", kCoords4);
  CHECK(zero.is_constant_zero());
  CHECK(zero.value_at(vec4(1, 2, 3, 4)) == 0.0);

  const Expression sq = parse_expression("sin(x1)^2", {"x1"});
  Eigen::VectorXd p(1);
  p << std::acos(-1.0) / 6.0;
  CHECK(sq.value_at(p) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("bilinear monomial jet") {
  const Expression e = parse_expression("x*y", {"x", "y"});
  Eigen::VectorXd p(2);
  p << 3, 5;
  const Jet2 jet = e.jet2_at(p);
  CHECK(jet.value == 15.0);
  CHECK(jet.grad[0] == 5.0);
  CHECK(jet.grad[1] == 3.0);
  CHECK(jet.hess(0, 0) == 0.0);
  CHECK(jet.hess(0, 1) == 1.0);
  CHECK(jet.hess(1, 0) == 1.0);
  CHECK(jet.hess(1, 1) == 0.0);
}

TEST_CASE("sine jet at the origin") {
  const Expression e = parse_expression("sin(t)", {"t"});
  Eigen::VectorXd p(1);
  p << 0.0;
  const Jet2 jet = e.jet2_at(p);
  CHECK(jet.value == 0.0);
  CHECK(jet.grad[0] == 1.0);
  CHECK(jet.hess(0, 0) == 0.0);
}

TEST_CASE("named constants and exponent forms") {
  const Expression e = parse_expression("pi", {});
  CHECK(e.value_at(Eigen::VectorXd(0)) == doctest::Approx(3.141592653589793).epsilon(1e-16));
  const Expression p2 = parse_expression("x^(-2)", {"x"});
  Eigen::VectorXd p(1);
  p << 2.0;
  CHECK(p2.value_at(p) == doctest::Approx(0.25));
  const Expression pe = parse_expression("x^2.5", {"x"});
  CHECK(pe.value_at(p) == doctest::Approx(std::pow(2.0, 2.5)));
}

TEST_CASE("parse errors carry positions and reasons") {
  CHECK_THROWS_AS(parse_expression("", kCoords4), rmap::ParseError);
  CHECK_THROWS_AS(parse_expression("  ", kCoords4), rmap::ParseError);
  CHECK_THROWS_AS(parse_expression("x1 +", kCoords4), rmap::ParseError);
  CHECK_THROWS_AS(parse_expression("(x1", kCoords4), rmap::ParseError);
  CHECK_THROWS_AS(parse_expression("y9", kCoords4), rmap::ParseError);  // unknown identifier
  CHECK_THROWS_AS(parse_expression("sin(x1, x2)", kCoords4), rmap::ParseError);  // arity
  CHECK_THROWS_AS(parse_expression("x1 ^ x2", kCoords4), rmap::ParseError);  // non-const exponent
  CHECK_THROWS_AS(parse_expression("x1 x2", kCoords4), rmap::ParseError);    // trailing input

  try {
    parse_expression("x1 + q3", kCoords4);
    CHECK(false);
  } catch (const rmap::ParseError& e) {
    CHECK(e.position == 5);
    CHECK(std::string(e.what()).find("q3") != std::string::npos);
  }
}

TEST_CASE("domain errors name the offending subexpression") {
  const Expression lg = parse_expression("log(x)", {"x"});
  Eigen::VectorXd p(1);
  p << -1.0;
  CHECK_THROWS_AS(lg.value_at(p), rmap::DomainError);
  try {
    lg.jet2_at(p);
    CHECK(false);
  } catch (const rmap::DomainError& e) {
    CHECK(e.subexpression.find("log") != std::string::npos);
  }

  const Expression sq = parse_expression("sqrt(x)", {"x"});
  CHECK_THROWS_AS(sq.value_at(p), rmap::DomainError);

  const Expression div = parse_expression("1/x", {"x"});
  Eigen::VectorXd z(1);
  z << 0.0;
  CHECK_THROWS_AS(div.value_at(z), rmap::DomainError);
}

TEST_CASE("unary minus binds looser than pow") {
  const Expression e = parse_expression("-x^2", {"x"});
  Eigen::VectorXd p(1);
  p << 3.0;
  CHECK(e.value_at(p) == -9.0);
}

TEST_CASE("print/parse round trip is structurally stable") {
  const std::vector<std::string> corpus = {
      "(x1 - x3)/sqrt(2)",
      "sin(x1)^2 + cos(x2)^2",
      "1/(x2^2)",
      "-x1*x2 - x3/x4",
      "exp(x1) * log(1 + x2^2)",
      "tanh(x1 - 2*x2) + pi",
      "x1^3 - 2*x2^2 + 0.5*x3 - 1e-3",
      "-(x1 + x2)^2",
      "sqrt(x1^2 + x2^2 + 1)",
      "x1/x2/x3",
      "x1 - x2 - x3",
      "2^2 + x1^(-1.5)",
  };
  std::mt19937_64 rng(20240901);
  std::vector<Expression> pool;
  for (const std::string& s : corpus) pool.push_back(parse_expression(s, kCoords4));
  while (pool.size() < 60) pool.push_back(random_polynomial(rng));

  for (const Expression& e : pool) {
    const std::string printed = e.print(kCoords4);
    const Expression back = parse_expression(printed, kCoords4);
    CHECK_MESSAGE(e.structurally_equal(back), "round trip failed for: ", printed);
    // and printing is a fixed point after one round
    CHECK(back.print(kCoords4) == printed);
  }
}

TEST_CASE("random polynomial jets agree with central differences") {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const Expression e = random_polynomial(rng);
    const Eigen::VectorXd p = vec4(coord(rng), coord(rng), coord(rng), coord(rng));
    const Jet2 jet = e.jet2_at(p);
    CHECK(jet.value == doctest::Approx(e.value_at(p)).epsilon(1e-12));
    CHECK((jet.grad - fd_gradient(e, p, 1e-5)).cwiseAbs().maxCoeff() < 1e-6);
    // second differences divide by h^2, so the step balances truncation
    // against the rounding floor
    CHECK((jet.hess - fd_hessian(e, p, 1e-4)).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("hessians are symmetric bit for bit") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> coord(0.1, 1.0);
  const std::vector<std::string> exprs = {
      "exp(x1*x2)*sin(x3)", "sqrt(x1^2 + x2^2 + x3^2 + x4^2)", "x1*x2*x3*x4",
      "tanh(x1*x4)/(1 + x2^2)", "log(x1 + x2 + 2)*cos(x3 - x4)"};
  for (const std::string& s : exprs) {
    const Expression e = parse_expression(s, kCoords4);
    for (int trial = 0; trial < 8; ++trial) {
      const Eigen::VectorXd p = vec4(coord(rng), coord(rng), coord(rng), coord(rng));
      const Jet2 jet = e.jet2_at(p);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(jet.hess(i, j) == jet.hess(j, i));
    }
  }
}

TEST_CASE("transcendental jets match closed forms") {
  const Expression e = parse_expression("tanh(x)", {"x"});
  Eigen::VectorXd p(1);
  p << 0.7;
  const Jet2 jet = e.jet2_at(p);
  const double t = std::tanh(0.7);
  const double sech2 = 1.0 - t * t;
  CHECK(jet.value == doctest::Approx(t).epsilon(1e-15));
  CHECK(jet.grad[0] == doctest::Approx(sech2).epsilon(1e-14));
  CHECK(jet.hess(0, 0) == doctest::Approx(-2.0 * t * sech2).epsilon(1e-14));
}

#include "rmap/fundforms.hpp"

#include <cmath>

namespace rmap {

Eigen::VectorXd SecondFundamentalForm::contract(const Eigen::VectorXd& X,
                                                const Eigen::VectorXd& Y) const {
  const int m = static_cast<int>(values.size());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(image.x.size());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) out += X[i] * Y[j] * values[i][j];
  return out;
}

double SecondFundamentalForm::max_entry_norm(const Eigen::MatrixXd& g2) const {
  double worst = 0.0;
  for (const auto& row : values)
    for (const auto& v : row) worst = std::max(worst, norm(g2, v));
  return worst;
}

double SecondFundamentalForm::max_symmetry_defect() const {
  const int m = static_cast<int>(values.size());
  double worst = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      worst = std::max(worst, (values[i][j] - values[j][i]).cwiseAbs().maxCoeff());
  return worst;
}

SecondFundamentalForm map_sff_at(const MapSpec& F, const Point& p) {
  const int m = F.source->dim();
  const int n = F.target->dim();
  SecondFundamentalForm sff;
  sff.base = p;
  sff.image = map_point(F, p);

  std::vector<Jet2> jets;
  jets.reserve(n);
  for (int a = 0; a < n; ++a) jets.push_back(F.components[a].jet2_at(p.x));

  const Christoffel source_conn = christoffel_at(*F.source, p);
  const Christoffel target_conn = christoffel_at(*F.target, sff.image);

  sff.values.assign(m, std::vector<Eigen::VectorXd>(m, Eigen::VectorXd::Zero(n)));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXd v(n);
      for (int a = 0; a < n; ++a) {
        double t = jets[a].hess(i, j);
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            t += target_conn(a, b, c) * jets[b].grad[i] * jets[c].grad[j];
        for (int k = 0; k < m; ++k) t -= source_conn(k, i, j) * jets[a].grad[k];
        v[a] = t;
      }
      sff.values[i][j] = std::move(v);
    }
  return sff;
}

Eigen::VectorXd directional_derivative(const VectorField& field, const Point& p,
                                       const Eigen::VectorXd& X) {
  const double h = fd_step(p.x);
  const Point plus{p.manifold, p.x + h * X};
  const Point minus{p.manifold, p.x - h * X};
  return (field(plus) - field(minus)) / (2.0 * h);
}

Eigen::VectorXd covariant_derivative(const ManifoldSpec& M, const VectorField& W,
                                     const Point& p, const Eigen::VectorXd& X) {
  const Eigen::VectorXd dW = directional_derivative(W, p, X);
  const Christoffel conn = christoffel_at(M, p);
  const Eigen::VectorXd Wp = W(p);
  const int m = M.dim();
  Eigen::VectorXd out = dW;
  for (int k = 0; k < m; ++k) {
    double t = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) t += conn(k, i, j) * X[i] * Wp[j];
    out[k] += t;
  }
  return out;
}

Eigen::VectorXd pullback_derivative(const MapSpec& F, const VectorField& W, const Point& p,
                                    const Eigen::VectorXd& X) {
  const Eigen::VectorXd dW = directional_derivative(W, p, X);
  const Point image = map_point(F, p);
  const Christoffel conn = christoffel_at(*F.target, image);
  const Eigen::VectorXd Wp = W(p);
  const Eigen::VectorXd FX = jacobian_at(F, p).dF * X;
  const int n = F.target->dim();
  Eigen::VectorXd out = dW;
  for (int a = 0; a < n; ++a) {
    double t = 0.0;
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) t += conn(a, b, c) * FX[b] * Wp[c];
    out[a] += t;
  }
  return out;
}

FrameField anchored_vertical_field(const MapSpec& F, const FrameBundle& anchor,
                                   double rank_tol) {
  return [&F, anchor, rank_tol](const Point& q) {
    return split_at_anchored(F, q, anchor, rank_tol).vertical;
  };
}

FrameField anchored_horizontal_field(const MapSpec& F, const FrameBundle& anchor,
                                     double rank_tol) {
  return [&F, anchor, rank_tol](const Point& q) {
    return split_at_anchored(F, q, anchor, rank_tol).horizontal;
  };
}

FrameField anchored_complement_field(const MapSpec& F, const FrameBundle& anchor,
                                     double rank_tol) {
  return [&F, anchor, rank_tol](const Point& q) {
    return split_at_anchored(F, q, anchor, rank_tol).complement;
  };
}

ShapeOperatorResult shape_operator_at(const MapSpec& F, const FrameBundle& anchor,
                                      const Eigen::VectorXd& V,
                                      NormalExtension extension, double tol,
                                      double rank_tol) {
  const double vnorm = norm(anchor.g2, V);
  const double range_part = norm(anchor.g2, frame_projection(anchor.g2, anchor.range, V));
  if (range_part > tol * (1.0 + vnorm))
    throw std::invalid_argument("shape operator needs a normal vector (range part " +
                                std::to_string(range_part) + ")");

  // Coefficients of V in the complement frame at the anchor, held fixed
  // across the stencil for the frame-coefficient extension.
  Eigen::VectorXd coeffs(anchor.complement.cols());
  for (int k = 0; k < anchor.complement.cols(); ++k)
    coeffs[k] = inner(anchor.g2, anchor.complement.col(k), V);

  VectorField extended;
  if (extension == NormalExtension::FrameCoefficients) {
    const FrameField complement = anchored_complement_field(F, anchor, rank_tol);
    extended = [complement, coeffs](const Point& q) -> Eigen::VectorXd {
      return complement(q) * coeffs;
    };
  } else {
    extended = [V](const Point&) { return V; };
  }

  const JacobianData jd = jacobian_at(F, anchor.base, rank_tol);
  ShapeOperatorResult out;
  const int r = anchor.horizontal.cols();
  out.a_v.resize(r);
  out.normal_derivative.resize(r);
  out.gram.resize(r, r);
  std::vector<Eigen::VectorXd> images(r);
  for (int i = 0; i < r; ++i) {
    const Eigen::VectorXd nabla =
        pullback_derivative(F, extended, anchor.base, anchor.horizontal.col(i));
    const Eigen::VectorXd tangential = frame_projection(anchor.g2, anchor.range, nabla);
    out.a_v[i] = -tangential;
    out.normal_derivative[i] = nabla - tangential;
    images[i] = jd.dF * anchor.horizontal.col(i);
  }
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) out.gram(i, j) = inner(anchor.g2, out.a_v[i], images[j]);
  return out;
}

DistributionGeometry distribution_geometry(const ManifoldSpec& M, const FrameField& frame_field,
                                           const Point& p) {
  // Orthonormalize the supplied frame pointwise; deterministic in column
  // order, so the wrapped field stays smooth wherever the input is.
  FrameField onframe = [&M, &frame_field](const Point& q) {
    return gram_schmidt(metric_at(M, q), frame_field(q), 1e-12);
  };

  const Eigen::MatrixXd g = metric_at(M, p);
  const Eigen::MatrixXd E = onframe(p);
  const int m = M.dim();
  const int q = static_cast<int>(E.cols());

  DistributionGeometry out;
  out.frame = E;
  out.mean_curvature = Eigen::VectorXd::Zero(m);
  if (q == 0) return out;

  // d(frame)/dx^i by central differences, then the connection term.
  const double h = fd_step(p.x);
  std::vector<Eigen::MatrixXd> dE(m);
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
    e[i] = 1.0;
    const Point plus{&M, p.x + h * e};
    const Point minus{&M, p.x - h * e};
    dE[i] = (onframe(plus) - onframe(minus)) / (2.0 * h);
  }
  const Christoffel conn = christoffel_at(M, p);

  auto nabla = [&](int a, int b) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i) v += E(i, a) * dE[i].col(b);
    for (int k = 0; k < m; ++k) {
      double t = 0.0;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) t += conn(k, i, j) * E(i, a) * E(j, b);
      v[k] += t;
    }
    return v;
  };

  auto complement_part = [&](const Eigen::VectorXd& x) {
    return (x - frame_projection(g, E, x)).eval();
  };

  out.unsymmetrized.assign(q, std::vector<Eigen::VectorXd>(q));
  out.symmetrized.assign(q, std::vector<Eigen::VectorXd>(q));
  out.integrability.assign(q, std::vector<Eigen::VectorXd>(q));
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) out.unsymmetrized[a][b] = complement_part(nabla(a, b));
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) {
      out.symmetrized[a][b] = 0.5 * (out.unsymmetrized[a][b] + out.unsymmetrized[b][a]);
      out.integrability[a][b] = out.unsymmetrized[a][b] - out.unsymmetrized[b][a];
    }
  for (int a = 0; a < q; ++a) out.mean_curvature += out.unsymmetrized[a][a];
  out.mean_curvature /= static_cast<double>(q);
  return out;
}

Eigen::VectorXd frame_bracket(const FrameField& field, const Point& p, int a, int b) {
  const double h = fd_step(p.x);
  const int m = static_cast<int>(p.x.size());
  const Eigen::MatrixXd E = field(p);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
    e[i] = 1.0;
    const Point plus{p.manifold, p.x + h * e};
    const Point minus{p.manifold, p.x - h * e};
    const Eigen::MatrixXd d = (field(plus) - field(minus)) / (2.0 * h);
    out += E(i, a) * d.col(b) - E(i, b) * d.col(a);
  }
  return out;
}

namespace {

double max_norm(const std::vector<std::vector<Eigen::VectorXd>>& grid,
                const Eigen::MatrixXd& g) {
  double worst = 0.0;
  for (const auto& row : grid)
    for (const auto& v : row) worst = std::max(worst, norm(g, v));
  return worst;
}

}  // namespace

double DistributionGeometry::max_unsymmetrized_norm(const Eigen::MatrixXd& g) const {
  return max_norm(unsymmetrized, g);
}
double DistributionGeometry::max_symmetrized_norm(const Eigen::MatrixXd& g) const {
  return max_norm(symmetrized, g);
}
double DistributionGeometry::max_integrability_norm(const Eigen::MatrixXd& g) const {
  return max_norm(integrability, g);
}

CheckReport check_totally_geodesic_map(const MapSpec& F,
                                       const std::vector<Eigen::VectorXd>& samples,
                                       double tol, double rank_tol, ExecutionPolicy policy,
                                       const std::vector<Eigen::VectorXd>& test_vectors) {
  (void)rank_tol;
  const int n = static_cast<int>(samples.size());
  std::vector<SampleOutcome> outcomes(n, SampleOutcome::vacuous(1));
  for_each_sample(n, policy, [&](int s) {
    try {
      const Point p{F.source, samples[s]};
      const SecondFundamentalForm sff = map_sff_at(F, p);
      const Eigen::MatrixXd g2 = metric_at(*F.target, sff.image);
      double worst = sff.max_entry_norm(g2);
      for (const Eigen::VectorXd& X : test_vectors)
        for (const Eigen::VectorXd& Y : test_vectors)
          worst = std::max(worst, norm(g2, sff.contract(X, Y)));
      outcomes[s].residual[0] = worst;
      outcomes[s].offender = "second fundamental form entry";
    } catch (const std::exception& e) {
      outcomes[s].error = e.what();
    }
  });
  return assemble_samplewise("totally_geodesic", {"sff_zero"}, {tol}, samples, outcomes);
}

UmbilicalFibersResult check_umbilical_fibers(const MapSpec& F,
                                             const std::vector<Eigen::VectorXd>& samples,
                                             double tol, double rank_tol,
                                             ExecutionPolicy policy) {
  const int n = static_cast<int>(samples.size());
  std::vector<SampleOutcome> outcomes(n, SampleOutcome::vacuous(3));
  std::vector<Eigen::VectorXd> fitted(n);
  for_each_sample(n, policy, [&](int s) {
    try {
      const Point p{F.source, samples[s]};
      const FrameBundle fb = split_at(F, p, rank_tol);
      if (fb.vertical.cols() == 0) return;
      const FrameField field = anchored_vertical_field(F, fb, rank_tol);
      const DistributionGeometry dg = distribution_geometry(*F.source, field, p);
      const int q = static_cast<int>(dg.frame.cols());
      // Least-squares fit of values[a][b] = delta_ab * H over the
      // orthonormal frame: H is the mean of the diagonal.
      const Eigen::VectorXd H = dg.mean_curvature;
      fitted[s] = H;
      double fit = 0.0;
      for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b) {
          const Eigen::VectorXd dev =
              dg.symmetrized[a][b] - (a == b ? H : Eigen::VectorXd::Zero(H.size()));
          fit = std::max(fit, norm(fb.g1, dev));
        }
      outcomes[s].residual[0] = fit;
      outcomes[s].residual[1] = norm(fb.g1, H);
      outcomes[s].residual[2] = dg.max_symmetrized_norm(fb.g1);
      outcomes[s].offender = "fiber second fundamental form";
    } catch (const std::exception& e) {
      outcomes[s].error = e.what();
    }
  });

  UmbilicalFibersResult out;
  out.report = assemble_samplewise("umbilical_fibers",
                                   {"umbilical_fit", "minimal", "totally_geodesic_fibers"},
                                   {tol, tol, tol}, samples, outcomes);
  for (Eigen::VectorXd& h : fitted)
    if (h.size() > 0) out.fitted_H.push_back(std::move(h));
  CheckReport& rep = out.report;
  if (rep.verdict == Verdict::Error) return out;
  if (out.fitted_H.empty()) {
    rep.verdict = Verdict::VacuousPass;
    rep.detail = "trivial kernel (no fibers)";
    return out;
  }
  // The check decides the umbilical property; minimality and totally
  // geodesic fibers are informational refinements.
  rep.verdict = rep.subchecks[0].verdict;
  rep.max_residual = rep.subchecks[0].max_residual;
  rep.detail =
      std::string("umbilical=") + (rep.subchecks[0].verdict == Verdict::Pass ? "yes" : "no") +
      ", minimal=" + (rep.subchecks[1].verdict == Verdict::Pass ? "yes" : "no") +
      ", totally_geodesic=" + (rep.subchecks[2].verdict == Verdict::Pass ? "yes" : "no");
  return out;
}

}  // namespace rmap

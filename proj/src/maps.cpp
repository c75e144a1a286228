#include "rmap/maps.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace rmap {

namespace {

// Symmetric square root and inverse square root via eigendecomposition.
struct MetricRoots {
  Eigen::MatrixXd sqrt;
  Eigen::MatrixXd inv_sqrt;
};

MetricRoots metric_roots(const Eigen::MatrixXd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  const Eigen::VectorXd ev = es.eigenvalues();
  Eigen::VectorXd s = ev.cwiseSqrt();
  MetricRoots r;
  r.sqrt = es.eigenvectors() * s.asDiagonal() * es.eigenvectors().transpose();
  r.inv_sqrt = es.eigenvectors() * s.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  return r;
}

// Canonical sign convention: the largest-magnitude component of each
// column (lowest index on ties) is made positive.
void fix_signs(Eigen::MatrixXd& columns) {
  for (int c = 0; c < columns.cols(); ++c) {
    int arg = 0;
    double best = -1.0;
    for (int r = 0; r < columns.rows(); ++r) {
      const double a = std::abs(columns(r, c));
      if (a > best + 1e-14) {
        best = a;
        arg = r;
      }
    }
    if (columns(arg, c) < 0.0) columns.col(c) = -columns.col(c);
  }
}

// Project the anchor's frame columns onto the subspace spanned by the
// (metric-orthonormal) columns of `basis`, then re-orthonormalize. Keeps
// ordering and signs of the anchor, so frames vary smoothly near it.
Eigen::MatrixXd align_to_anchor(const Eigen::MatrixXd& metric, const Eigen::MatrixXd& basis,
                                const Eigen::MatrixXd& anchor_frame) {
  if (basis.cols() == 0) return basis;
  Eigen::MatrixXd projected(basis.rows(), anchor_frame.cols());
  for (int c = 0; c < anchor_frame.cols(); ++c)
    projected.col(c) = frame_projection(metric, basis, anchor_frame.col(c));
  Eigen::MatrixXd out = gram_schmidt(metric, projected, 1e-8);
  if (out.cols() != anchor_frame.cols())
    throw std::runtime_error("frame alignment lost rank across the stencil");
  return out;
}

}  // namespace

Eigen::VectorXd frame_projection(const Eigen::MatrixXd& metric, const Eigen::MatrixXd& frame,
                                 const Eigen::VectorXd& x) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.size());
  for (int c = 0; c < frame.cols(); ++c)
    out += inner(metric, frame.col(c), x) * frame.col(c);
  return out;
}

Eigen::MatrixXd gram_schmidt(const Eigen::MatrixXd& metric, const Eigen::MatrixXd& columns,
                             double drop_tol) {
  Eigen::MatrixXd out(columns.rows(), columns.cols());
  int kept = 0;
  for (int c = 0; c < columns.cols(); ++c) {
    Eigen::VectorXd v = columns.col(c);
    for (int k = 0; k < kept; ++k) v -= inner(metric, out.col(k), v) * out.col(k);
    // second pass for numerical orthogonality
    for (int k = 0; k < kept; ++k) v -= inner(metric, out.col(k), v) * out.col(k);
    const double n = norm(metric, v);
    if (n > drop_tol) {
      out.col(kept++) = v / n;
    }
  }
  return out.leftCols(kept);
}

void MapSpec::validate() const {
  if (!source || !target) throw std::invalid_argument("map endpoints not set");
  if (static_cast<int>(components.size()) != target->dim())
    throw std::invalid_argument("component count does not match target dimension");
  for (const Expression& e : components)
    if (e.max_coord_index() >= source->dim())
      throw std::invalid_argument("map component references a non-source coordinate");
}

Point map_point(const MapSpec& F, const Point& p) {
  Eigen::VectorXd y(F.target->dim());
  for (int a = 0; a < F.target->dim(); ++a) y[a] = F.components[a].value_at(p.x);
  return Point{F.target, y};
}

JacobianData jacobian_at(const MapSpec& F, const Point& p, double rank_tol) {
  const int m = F.source->dim();
  const int n = F.target->dim();
  JacobianData out;
  out.dF.resize(n, m);
  for (int a = 0; a < n; ++a) {
    const Jet2 jet = F.components[a].jet2_at(p.x);
    out.dF.row(a) = jet.grad.transpose();
  }

  const Eigen::MatrixXd g1 = metric_at(*F.source, p);
  const Eigen::MatrixXd g2 = metric_at(*F.target, map_point(F, p));
  const Eigen::MatrixXd weighted =
      metric_roots(g2).sqrt * out.dF * metric_roots(g1).inv_sqrt;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(weighted);
  out.singular_values = svd.singularValues();
  const double sigma_max = out.singular_values.size() ? out.singular_values[0] : 0.0;
  out.rank = 0;
  for (int i = 0; i < out.singular_values.size(); ++i)
    if (out.singular_values[i] > rank_tol * sigma_max) ++out.rank;
  if (sigma_max == 0.0) out.rank = 0;
  return out;
}

TangentVector push_forward(const MapSpec& F, const TangentVector& x) {
  const JacobianData jd = jacobian_at(F, x.base);
  return TangentVector{map_point(F, x.base), jd.dF * x.v};
}

FrameBundle split_at(const MapSpec& F, const Point& p, double rank_tol) {
  const int m = F.source->dim();
  const int n = F.target->dim();
  FrameBundle fb;
  fb.base = p;
  fb.image = map_point(F, p);
  fb.g1 = metric_at(*F.source, p);
  fb.g2 = metric_at(*F.target, fb.image);

  Eigen::MatrixXd dF(n, m);
  for (int a = 0; a < n; ++a) dF.row(a) = F.components[a].jet2_at(p.x).grad.transpose();

  const MetricRoots r1 = metric_roots(fb.g1);
  const MetricRoots r2 = metric_roots(fb.g2);
  const Eigen::MatrixXd weighted = r2.sqrt * dF * r1.inv_sqrt;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(weighted, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double sigma_max = sv.size() ? sv[0] : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sigma_max > 0.0 && sv[i] > rank_tol * sigma_max) ++rank;
  fb.rank = rank;

  // Right singular vectors split the source, left ones the target; the
  // inverse metric roots turn euclidean orthonormality into g-orthonormality.
  Eigen::MatrixXd V = r1.inv_sqrt * svd.matrixV();
  Eigen::MatrixXd U = r2.inv_sqrt * svd.matrixU();
  fb.horizontal = V.leftCols(rank);
  fb.vertical = V.rightCols(m - rank);
  fb.range = U.leftCols(rank);
  fb.complement = U.rightCols(n - rank);
  fix_signs(fb.horizontal);
  fix_signs(fb.vertical);
  fix_signs(fb.range);
  fix_signs(fb.complement);
  fb.horizontal = gram_schmidt(fb.g1, fb.horizontal);
  fb.vertical = gram_schmidt(fb.g1, fb.vertical);
  fb.range = gram_schmidt(fb.g2, fb.range);
  fb.complement = gram_schmidt(fb.g2, fb.complement);
  if (fb.horizontal.cols() != rank || fb.vertical.cols() != m - rank ||
      fb.range.cols() != rank || fb.complement.cols() != n - rank)
    throw std::runtime_error("frame orthonormalization broke down at " + F.name);
  return fb;
}

FrameBundle split_at_anchored(const MapSpec& F, const Point& p, const FrameBundle& anchor,
                              double rank_tol) {
  FrameBundle fb = split_at(F, p, rank_tol);
  if (fb.rank != anchor.rank)
    throw std::runtime_error("rank changed across stencil near " + F.name);
  fb.vertical = align_to_anchor(fb.g1, fb.vertical, anchor.vertical);
  fb.horizontal = align_to_anchor(fb.g1, fb.horizontal, anchor.horizontal);
  fb.range = align_to_anchor(fb.g2, fb.range, anchor.range);
  fb.complement = align_to_anchor(fb.g2, fb.complement, anchor.complement);
  return fb;
}

TangentVector adjoint_at(const MapSpec& F, const Point& p, const Eigen::VectorXd& y,
                         double rank_tol) {
  (void)rank_tol;
  const JacobianData jd = jacobian_at(F, p);
  const Eigen::MatrixXd g1 = metric_at(*F.source, p);
  const Eigen::MatrixXd g2 = metric_at(*F.target, map_point(F, p));
  // g1 x* = dF^T g2 y
  const Eigen::VectorXd rhs = jd.dF.transpose() * (g2 * y);
  return TangentVector{p, g1.ldlt().solve(rhs)};
}

CheckReport check_constant_rank(const MapSpec& F, const std::vector<Eigen::VectorXd>& samples,
                                double rank_tol) {
  CheckReport rep;
  rep.name = "constant_rank";
  rep.tolerance = 0.5;
  rep.samples = static_cast<int>(samples.size());
  if (samples.size() < 2) {
    rep.verdict = Verdict::Error;
    rep.detail = "constant-rank check needs at least two samples";
    return rep;
  }
  std::set<int> ranks;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const Point p{F.source, samples[s]};
    const int r = jacobian_at(F, p, rank_tol).rank;
    if (!ranks.empty() && !ranks.count(r) && !rep.worst)
      rep.worst = WorstOffender{samples[s], "rank " + std::to_string(r)};
    ranks.insert(r);
  }
  std::ostringstream oss;
  oss << "ranks {";
  for (auto it = ranks.begin(); it != ranks.end(); ++it)
    oss << (it == ranks.begin() ? "" : ", ") << *it;
  oss << "}";
  rep.detail = oss.str();
  rep.max_residual = static_cast<double>(ranks.size() - 1);
  rep.verdict = ranks.size() == 1 ? Verdict::Pass : Verdict::Fail;
  rep.subchecks = {{"distinct_ranks", rep.verdict, rep.max_residual, rep.tolerance}};
  return rep;
}

CheckReport check_riemannian_map(const MapSpec& F, const std::vector<Eigen::VectorXd>& samples,
                                 double tol, double rank_tol, ExecutionPolicy policy) {
  const int n = static_cast<int>(samples.size());
  std::vector<SampleOutcome> outcomes(n, SampleOutcome::vacuous(1));
  std::vector<std::string> label(n);
  for_each_sample(n, policy, [&](int s) {
    try {
      const Point p{F.source, samples[s]};
      const FrameBundle fb = split_at(F, p, rank_tol);
      const int sd = fb.source_dim(), td = fb.target_dim();
      if (fb.rank == 0) {
        label[s] = "rank 0 (constant map)";
      } else if (fb.rank == sd && fb.rank == td) {
        label[s] = "local isometry candidate (trivial kernel and cokernel)";
      } else if (fb.rank == sd) {
        label[s] = "immersion case (trivial kernel)";
      } else if (fb.rank == td) {
        label[s] = "submersion case (trivial range complement)";
      } else {
        label[s] = "proper case (0 < rank < min dims)";
      }
      if (fb.rank == 0) return;
      const Eigen::MatrixXd img = jacobian_at(F, p, rank_tol).dF * fb.horizontal;
      const Eigen::MatrixXd gram = img.transpose() * fb.g2 * img;
      outcomes[s].residual[0] =
          (gram - Eigen::MatrixXd::Identity(fb.rank, fb.rank)).cwiseAbs().maxCoeff();
      outcomes[s].offender = "horizontal isometry defect";
    } catch (const std::exception& e) {
      outcomes[s].error = e.what();
    }
  });
  CheckReport rep =
      assemble_samplewise("riemannian_map", {"horizontal_isometry"}, {tol}, samples, outcomes);
  if (rep.detail.empty() && !label.empty()) rep.detail = label[0];
  return rep;
}

}  // namespace rmap

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "rmap/geometry.hpp"
#include "rmap/report.hpp"

namespace rmap {

// Default relative singular-value threshold for rank decisions.
inline constexpr double kRankTol = 1e-8;

// A smooth map between two charts, given by one component expression per
// target coordinate, all in the source coordinates.
struct MapSpec {
  std::string name;
  const ManifoldSpec* source = nullptr;
  const ManifoldSpec* target = nullptr;
  std::vector<Expression> components;

  void validate() const;
};

struct JacobianData {
  Eigen::MatrixXd dF;                 // n x m, dF(a,i) = dF^a/dx^i
  Eigen::VectorXd singular_values;    // of the metric-weighted differential, descending
  int rank = 0;
};

// Orthonormal frames adapted to the map at one point: a g1-orthonormal
// basis of the kernel of the differential and of its orthogonal
// complement in the source, and a g2-orthonormal basis of the range of
// the differential and of its orthogonal complement in the target.
// Frames are stored as matrix columns in coordinate components. The
// construction is deterministic: weighted SVD, a canonical sign fix, and
// modified Gram-Schmidt in the respective metric. `anchor` frames (the
// pivot record) can be supplied to keep frames smooth across a
// finite-difference stencil: the anchor's vectors are projected onto the
// subspaces at the new point and re-orthonormalized, inheriting the
// anchor's ordering and signs.
struct FrameBundle {
  Point base;
  Point image;
  int rank = 0;
  Eigen::MatrixXd vertical;    // m x (m - rank)
  Eigen::MatrixXd horizontal;  // m x rank
  Eigen::MatrixXd range;       // n x rank
  Eigen::MatrixXd complement;  // n x (n - rank)
  Eigen::MatrixXd g1;          // source metric at base
  Eigen::MatrixXd g2;          // target metric at image

  int source_dim() const { return static_cast<int>(vertical.rows()); }
  int target_dim() const { return static_cast<int>(range.rows()); }
};

Point map_point(const MapSpec& F, const Point& p);

JacobianData jacobian_at(const MapSpec& F, const Point& p, double rank_tol = kRankTol);

// Pushforward of a tangent vector: base point mapped, components dF * v.
TangentVector push_forward(const MapSpec& F, const TangentVector& x);

FrameBundle split_at(const MapSpec& F, const Point& p, double rank_tol = kRankTol);

// Same splitting, but aligned to the anchor bundle (see FrameBundle).
// The rank is taken from the anchor; a rank change across the stencil is
// reported as an error.
FrameBundle split_at_anchored(const MapSpec& F, const Point& p, const FrameBundle& anchor,
                              double rank_tol = kRankTol);

// The metric adjoint of the differential at p: the unique x* with
// g1(x, x*) = g2(dF x, y) for all x. Always lands in the horizontal
// space; inverts the differential on horizontal vectors when the map is
// Riemannian.
TangentVector adjoint_at(const MapSpec& F, const Point& p, const Eigen::VectorXd& y,
                         double rank_tol = kRankTol);

// Rank must be identical at every sample; the report lists the distinct
// ranks found. Requires at least two samples.
CheckReport check_constant_rank(const MapSpec& F, const std::vector<Eigen::VectorXd>& samples,
                                double rank_tol = kRankTol);

// Isometry of the differential restricted to the horizontal space:
// residual is the worst |g2(dF H_i, dF H_j) - delta_ij| over horizontal
// frame pairs. Also labels the map (proper / immersion / submersion).
CheckReport check_riemannian_map(const MapSpec& F, const std::vector<Eigen::VectorXd>& samples,
                                 double tol, double rank_tol = kRankTol,
                                 ExecutionPolicy policy = ExecutionPolicy::Serial);

// Modified Gram-Schmidt in the given metric; columns with residual norm
// below `drop_tol` are dropped. Deterministic in input order.
Eigen::MatrixXd gram_schmidt(const Eigen::MatrixXd& metric, const Eigen::MatrixXd& columns,
                             double drop_tol = 1e-12);

// Orthogonal projection onto the span of the (metric-orthonormal) frame
// columns.
Eigen::VectorXd frame_projection(const Eigen::MatrixXd& metric, const Eigen::MatrixXd& frame,
                                 const Eigen::VectorXd& x);

}  // namespace rmap

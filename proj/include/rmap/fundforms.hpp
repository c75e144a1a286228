#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "rmap/hermitian.hpp"
#include "rmap/maps.hpp"

namespace rmap {

// Step for central differences of frame fields. Metric, map and complex
// structure derivatives always come from exact jets; finite differences
// are only used for quantities produced by pointwise linear algebra
// (frames and their projections).
inline double fd_step(const Eigen::VectorXd& p) { return 1e-5 * (1.0 + p.norm()); }

// The covariant derivative of the differential, evaluated on the
// coordinate basis at one point. values[i][j] lives in the target tangent
// space at the image point and is symmetric in (i, j). The tensor is
// bilinear, so contraction extends it to arbitrary vectors.
struct SecondFundamentalForm {
  Point base;
  Point image;
  std::vector<std::vector<Eigen::VectorXd>> values;  // [i][j], target components

  Eigen::VectorXd contract(const Eigen::VectorXd& X, const Eigen::VectorXd& Y) const;
  double max_entry_norm(const Eigen::MatrixXd& g2) const;
  double max_symmetry_defect() const;
};

// Coordinate formula with exact jets: second partials of the components
// plus the target connection contracted with first partials, minus the
// source connection contracted into the differential.
SecondFundamentalForm map_sff_at(const MapSpec& F, const Point& p);

// A vector field on the source chart (coordinate components as a function
// of the point), and a section of the pullback bundle (target components
// as a function of the source point).
using VectorField = std::function<Eigen::VectorXd(const Point&)>;

// A frame field: columns are the frame vectors at the given point.
using FrameField = std::function<Eigen::MatrixXd(const Point&)>;

// Central-difference directional derivative of the raw components.
Eigen::VectorXd directional_derivative(const VectorField& field, const Point& p,
                                       const Eigen::VectorXd& X);

// Levi-Civita derivative of a source field W in direction X at p.
Eigen::VectorXd covariant_derivative(const ManifoldSpec& M, const VectorField& W,
                                     const Point& p, const Eigen::VectorXd& X);

// Pullback-connection derivative of a section W along the map, in
// direction X at p: component derivative plus the target connection at
// the image contracted with (dF X, W).
Eigen::VectorXd pullback_derivative(const MapSpec& F, const VectorField& W, const Point& p,
                                    const Eigen::VectorXd& X);

// Frame fields obtained from anchored splittings; smooth across a
// finite-difference stencil around the anchor point.
FrameField anchored_vertical_field(const MapSpec& F, const FrameBundle& anchor,
                                   double rank_tol = kRankTol);
FrameField anchored_horizontal_field(const MapSpec& F, const FrameBundle& anchor,
                                     double rank_tol = kRankTol);
FrameField anchored_complement_field(const MapSpec& F, const FrameBundle& anchor,
                                     double rank_tol = kRankTol);

// How a normal vector given at the anchor image is extended along the
// map for differentiation. The shape operator depends only on the
// pointwise value, so both extensions must produce the same tangential
// output; that independence is a tested property.
enum class NormalExtension { FrameCoefficients, ConstantCoordinates };

struct ShapeOperatorResult {
  // a_v[i] = A_V dF(H_i): minus the range part of the pullback
  // derivative of the extended V along the i-th horizontal frame vector.
  std::vector<Eigen::VectorXd> a_v;
  Eigen::MatrixXd gram;  // gram(i,j) = g2(A_V dF H_i, dF H_j); symmetric
  std::vector<Eigen::VectorXd> normal_derivative;  // complement part per direction
};

// Requires V (target components at the anchor image) to be g2-orthogonal
// to the range within tol.
ShapeOperatorResult shape_operator_at(const MapSpec& F, const FrameBundle& anchor,
                                      const Eigen::VectorXd& V,
                                      NormalExtension extension, double tol,
                                      double rank_tol = kRankTol);

// Second-fundamental-form data of a distribution given by a frame field:
// the complement part of the connection on frame pairs (unsymmetrized
// form), its symmetrization, the integrability tensor (antisymmetric
// part, equal to the complement part of the bracket), and the mean
// curvature vector (trace over an orthonormalized frame). The input
// frame is orthonormalized internally (modified Gram-Schmidt in the
// metric, deterministic in column order).
struct DistributionGeometry {
  Eigen::MatrixXd frame;  // the orthonormalized frame actually used
  std::vector<std::vector<Eigen::VectorXd>> unsymmetrized;   // [a][b]
  std::vector<std::vector<Eigen::VectorXd>> symmetrized;     // [a][b]
  std::vector<std::vector<Eigen::VectorXd>> integrability;   // [a][b]
  Eigen::VectorXd mean_curvature;

  double max_unsymmetrized_norm(const Eigen::MatrixXd& g) const;
  double max_symmetrized_norm(const Eigen::MatrixXd& g) const;
  double max_integrability_norm(const Eigen::MatrixXd& g) const;
};

DistributionGeometry distribution_geometry(const ManifoldSpec& M, const FrameField& frame_field,
                                           const Point& p);

// Coordinate components of [E_a, E_b] at p by central differences of the
// frame field. Used to cross-check the integrability tensor.
Eigen::VectorXd frame_bracket(const FrameField& field, const Point& p, int a, int b);

// Worst second-fundamental-form norm over the coordinate basis (and the
// contractions against any extra test vectors) over all samples.
CheckReport check_totally_geodesic_map(const MapSpec& F,
                                       const std::vector<Eigen::VectorXd>& samples,
                                       double tol, double rank_tol = kRankTol,
                                       ExecutionPolicy policy = ExecutionPolicy::Serial,
                                       const std::vector<Eigen::VectorXd>& test_vectors = {});

// Fits the fiber second fundamental form to g1(X,Y) * H per sample and
// reports the fit residual; also decides minimality (H = 0) and totally
// geodesic fibers (all values = 0). Vacuous for trivial kernels.
struct UmbilicalFibersResult {
  CheckReport report;
  std::vector<Eigen::VectorXd> fitted_H;  // per sample, source components
};

UmbilicalFibersResult check_umbilical_fibers(const MapSpec& F,
                                             const std::vector<Eigen::VectorXd>& samples,
                                             double tol, double rank_tol = kRankTol,
                                             ExecutionPolicy policy = ExecutionPolicy::Serial);

}  // namespace rmap

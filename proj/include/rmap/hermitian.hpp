#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rmap/maps.hpp"
#include "rmap/report.hpp"

namespace rmap {

enum class KernelClass { AntiInvariant, InvariantKernel, Mixed };

std::string to_string(KernelClass c);

// Outcome of classifying the kernel distribution against the complex
// structure of the source. `lagrangian` means the image of the kernel
// under J fills the whole horizontal space; `mu_dim` is the measured
// dimension of the J-invariant complement of J(kernel) inside the
// horizontal space. When the kernel is trivial the classification is
// vacuous (anti-invariance holds with nothing to test).
struct AntiInvarianceVerdict {
  KernelClass classification = KernelClass::AntiInvariant;
  bool lagrangian = false;
  int mu_dim = 0;
  bool vacuous = false;             // trivial kernel
  double max_anti_defect = 0.0;     // worst vertical projection of J(vertical frame)
  double max_invariant_defect = 0.0;  // worst horizontal projection of the same
  Eigen::VectorXd worst_point;
};

// Per-sample classification with a conjunctive global verdict: one mixed
// sample makes the whole map mixed, anti-invariance must hold everywhere.
// Requires a complex structure on the source.
AntiInvarianceVerdict classify_anti_invariant(const MapSpec& F,
                                              const std::vector<Eigen::VectorXd>& samples,
                                              double tol, double rank_tol = kRankTol);

// g1-orthonormal basis of the orthogonal complement of J(kernel) inside
// the horizontal space at fb.base. Throws if J(kernel) does not lie in
// the horizontal space (non-anti-invariant input).
Eigen::MatrixXd mu_frame(const MapSpec& F, const FrameBundle& fb, double tol);

struct BCParts {
  Eigen::VectorXd vertical_part;  // in the kernel distribution
  Eigen::VectorXd mu_part;        // in the invariant complement
};

// Splits J applied to a horizontal vector into its vertical and mu
// components. Throws if Z is not horizontal within tol, or on
// non-anti-invariant input (the two parts would not reassemble to JZ).
BCParts bc_decompose(const MapSpec& F, const FrameBundle& fb, const Eigen::MatrixXd& mu,
                     const Eigen::VectorXd& Z, double tol);

}  // namespace rmap

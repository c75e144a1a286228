#include "rmap/hermitian.hpp"

#include <cmath>

namespace rmap {

std::string to_string(KernelClass c) {
  switch (c) {
    case KernelClass::AntiInvariant: return "anti_invariant";
    case KernelClass::InvariantKernel: return "invariant_kernel";
    case KernelClass::Mixed: return "mixed";
  }
  return "?";
}

AntiInvarianceVerdict classify_anti_invariant(const MapSpec& F,
                                              const std::vector<Eigen::VectorXd>& samples,
                                              double tol, double rank_tol) {
  if (!F.source->has_complex_structure())
    throw std::logic_error("classification needs a complex structure on " + F.source->name());

  AntiInvarianceVerdict out;
  bool all_anti = true, all_invariant = true;
  bool lagrangian = true;
  int mu_dim = -1;
  bool mu_consistent = true;

  for (const Eigen::VectorXd& x : samples) {
    const Point p{F.source, x};
    const FrameBundle fb = split_at(F, p, rank_tol);
    const int q = fb.vertical.cols();
    if (q == 0) {
      out.vacuous = true;
      // Nothing to test; the invariant complement is the whole horizontal space.
      const int md = fb.horizontal.cols();
      if (mu_dim < 0) mu_dim = md;
      mu_consistent = mu_consistent && mu_dim == md;
      lagrangian = lagrangian && fb.rank == 0;
      continue;
    }
    const Eigen::MatrixXd J = complex_structure_at(*F.source, p);
    double anti_defect = 0.0, invariant_defect = 0.0;
    Eigen::MatrixXd horiz_coeffs(fb.horizontal.cols(), q);
    for (int a = 0; a < q; ++a) {
      const Eigen::VectorXd jv = J * fb.vertical.col(a);
      const Eigen::VectorXd vert = frame_projection(fb.g1, fb.vertical, jv);
      anti_defect = std::max(anti_defect, norm(fb.g1, vert));
      invariant_defect = std::max(invariant_defect, norm(fb.g1, jv - vert));
      for (int i = 0; i < fb.horizontal.cols(); ++i)
        horiz_coeffs(i, a) = inner(fb.g1, fb.horizontal.col(i), jv);
    }
    const bool anti_here = anti_defect < tol;
    const bool invariant_here = invariant_defect < tol;
    if (!anti_here && anti_defect > out.max_anti_defect) out.worst_point = x;
    out.max_anti_defect = std::max(out.max_anti_defect, anti_defect);
    out.max_invariant_defect = std::max(out.max_invariant_defect, invariant_defect);
    all_anti = all_anti && anti_here;
    all_invariant = all_invariant && invariant_here;

    // Lagrangian iff the horizontal projections of J(vertical frame)
    // span the whole horizontal space.
    int span = 0;
    if (horiz_coeffs.cols() > 0 && horiz_coeffs.rows() > 0) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(horiz_coeffs);
      const Eigen::VectorXd sv = svd.singularValues();
      const double smax = sv.size() ? sv[0] : 0.0;
      for (int i = 0; i < sv.size(); ++i)
        if (smax > 0.0 && sv[i] > rank_tol * smax) ++span;
    }
    lagrangian = lagrangian && span == fb.rank;

    if (anti_here) {
      const int md = mu_frame(F, fb, tol).cols();
      if (mu_dim < 0) mu_dim = md;
      mu_consistent = mu_consistent && mu_dim == md;
    }
  }

  if (all_anti) {
    out.classification = KernelClass::AntiInvariant;
  } else if (all_invariant) {
    out.classification = KernelClass::InvariantKernel;
  } else {
    out.classification = KernelClass::Mixed;
  }
  out.lagrangian = all_anti && lagrangian && !samples.empty();
  out.mu_dim = (mu_dim >= 0 && mu_consistent) ? mu_dim : -1;
  if (out.lagrangian && out.mu_dim != 0) {
    // Spanning horizontal projections force a trivial invariant
    // complement; a disagreement here is a frame-construction bug.
    throw std::logic_error("lagrangian verdict with nonzero invariant complement");
  }
  return out;
}

Eigen::MatrixXd mu_frame(const MapSpec& F, const FrameBundle& fb, double tol) {
  if (!F.source->has_complex_structure() && fb.vertical.cols() > 0)
    throw std::logic_error("mu frame needs a complex structure on " + F.source->name());
  const int m = fb.source_dim();

  Eigen::MatrixXd jker(m, fb.vertical.cols());
  if (fb.vertical.cols() > 0) {
    const Eigen::MatrixXd J = complex_structure_at(*F.source, fb.base);
    for (int a = 0; a < fb.vertical.cols(); ++a) {
      const Eigen::VectorXd jv = J * fb.vertical.col(a);
      const Eigen::VectorXd vert = frame_projection(fb.g1, fb.vertical, jv);
      if (norm(fb.g1, vert) >= tol)
        throw std::invalid_argument("mu frame requested for a non-anti-invariant map");
      jker.col(a) = jv - vert;  // horizontal representative
    }
    jker = gram_schmidt(fb.g1, jker, 1e-8);
  }

  // Complement of span(jker) inside the horizontal space, in the
  // deterministic order of the horizontal frame.
  Eigen::MatrixXd mu(m, fb.horizontal.cols());
  int kept = 0;
  for (int i = 0; i < fb.horizontal.cols(); ++i) {
    Eigen::VectorXd v = fb.horizontal.col(i);
    v -= frame_projection(fb.g1, jker, v);
    for (int k = 0; k < kept; ++k) v -= inner(fb.g1, mu.col(k), v) * mu.col(k);
    const double n = norm(fb.g1, v);
    if (n > 1e-8) mu.col(kept++) = v / n;
  }
  return mu.leftCols(kept);
}

BCParts bc_decompose(const MapSpec& F, const FrameBundle& fb, const Eigen::MatrixXd& mu,
                     const Eigen::VectorXd& Z, double tol) {
  const Eigen::VectorXd vert_part = frame_projection(fb.g1, fb.vertical, Z);
  if (norm(fb.g1, vert_part) >= tol)
    throw std::invalid_argument("vector is not horizontal (projection defect " +
                                std::to_string(norm(fb.g1, vert_part)) + ")");
  const Eigen::MatrixXd J = complex_structure_at(*F.source, fb.base);
  const Eigen::VectorXd jz = J * Z;
  BCParts parts;
  parts.vertical_part = frame_projection(fb.g1, fb.vertical, jz);
  parts.mu_part = frame_projection(fb.g1, mu, jz);
  if (norm(fb.g1, jz - parts.vertical_part - parts.mu_part) > 1e-10 * (1.0 + norm(fb.g1, jz)))
    throw std::invalid_argument(
        "J of the given vector does not split into kernel + invariant complement "
        "(non-anti-invariant input)");
  return parts;
}

}  // namespace rmap

#include "rmap/verdicts.hpp"

#include <cmath>
#include <optional>
#include <sstream>

namespace rmap {

Verdict combine_biconditional(Verdict side_a, Verdict side_b) {
  if (side_a == Verdict::Error || side_b == Verdict::Error) return Verdict::Error;
  if (side_a == Verdict::Inconsistent || side_b == Verdict::Inconsistent)
    return Verdict::Inconsistent;
  if (side_a == Verdict::VacuousPass) return side_b;
  if (side_b == Verdict::VacuousPass) return side_a;
  if (side_a == side_b) return side_a;  // both hold or both fail
  return Verdict::Inconsistent;
}

Verdict combine_implication(Verdict antecedent, Verdict consequent) {
  if (antecedent == Verdict::Error || consequent == Verdict::Error) return Verdict::Error;
  if (antecedent == Verdict::Inconsistent || consequent == Verdict::Inconsistent)
    return Verdict::Inconsistent;
  if (antecedent == Verdict::VacuousPass || consequent == Verdict::VacuousPass)
    return Verdict::VacuousPass;
  if (antecedent == Verdict::Fail) return Verdict::Pass;  // contrapositive route
  return consequent == Verdict::Pass ? Verdict::Pass : Verdict::Inconsistent;
}

namespace {

CheckReport gated_report(const std::string& name, const CheckContext& ctx,
                         const std::string& reason, Verdict v = Verdict::VacuousPass) {
  CheckReport rep;
  rep.name = name;
  rep.samples = static_cast<int>(ctx.samples.size());
  rep.verdict = v;
  rep.detail = reason;
  return rep;
}

// Shared precondition data for the proposition/theorem checks. The
// classification and the side reports are global over the sample set.
struct Gates {
  bool has_J = false;
  Verdict riemannian = Verdict::VacuousPass;
  Verdict kahler = Verdict::VacuousPass;
  std::optional<AntiInvarianceVerdict> cls;
  bool kernel_trivial = false;
  int rank = 0;
  int kernel_dim = 0;
  std::string error;
};

Gates gather_gates(const CheckContext& ctx, bool need_classification) {
  Gates g;
  const MapSpec& F = *ctx.map;
  g.has_J = F.source->has_complex_structure();
  try {
    g.riemannian =
        check_riemannian_map(F, ctx.samples, ctx.tol.exact, ctx.rank_tol, ctx.policy).verdict;
    if (g.has_J) g.kahler = check_kahler(*F.source, ctx.samples, ctx.tol.exact, ctx.policy).verdict;
    if (!ctx.samples.empty()) {
      const Point p{F.source, ctx.samples.front()};
      g.rank = jacobian_at(F, p, ctx.rank_tol).rank;
      g.kernel_dim = F.source->dim() - g.rank;
      g.kernel_trivial = g.kernel_dim == 0;
    }
    if (need_classification && g.has_J)
      g.cls = classify_anti_invariant(F, ctx.samples, ctx.tol.exact, ctx.rank_tol);
  } catch (const std::exception& e) {
    g.error = e.what();
  }
  return g;
}

bool anti_invariant_ok(const Gates& g) {
  return g.cls && g.cls->classification == KernelClass::AntiInvariant;
}

// Vertical test vectors: scenario-declared ones if present (validated to
// be in the kernel), otherwise the orthonormal vertical frame.
std::vector<Eigen::VectorXd> vertical_test_vectors(const CheckContext& ctx,
                                                   const FrameBundle& fb) {
  if (!ctx.test_vertical.empty()) return ctx.test_vertical;
  std::vector<Eigen::VectorXd> out;
  for (int a = 0; a < fb.vertical.cols(); ++a) out.push_back(fb.vertical.col(a));
  return out;
}

void validate_test_vertical(const CheckContext& ctx, const FrameBundle& fb,
                            const Eigen::MatrixXd& dF) {
  for (const Eigen::VectorXd& X : ctx.test_vertical) {
    if (X.size() != fb.source_dim())
      throw std::invalid_argument("test vertical vector has wrong dimension");
    if ((dF * X).norm() > 1e-6 * (1.0 + X.norm()))
      throw std::invalid_argument("declared test vertical vector is not in the kernel");
  }
}

Eigen::MatrixXd jkernel_frame(const MapSpec& F, const FrameBundle& fb) {
  if (fb.vertical.cols() == 0)
    return Eigen::MatrixXd(fb.source_dim(), 0);
  const Eigen::MatrixXd J = complex_structure_at(*F.source, fb.base);
  Eigen::MatrixXd jker = J * fb.vertical;
  for (int c = 0; c < jker.cols(); ++c)
    jker.col(c) -= frame_projection(fb.g1, fb.vertical, jker.col(c));
  return gram_schmidt(fb.g1, jker, 1e-8);
}

// A_V applied to dF X for horizontal X, via the shape operator values on
// the horizontal frame (A_V and the differential are linear).
Eigen::VectorXd apply_shape_operator(const FrameBundle& fb, const ShapeOperatorResult& so,
                                     const Eigen::VectorXd& X) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(fb.target_dim());
  for (int i = 0; i < fb.horizontal.cols(); ++i)
    out += inner(fb.g1, fb.horizontal.col(i), X) * so.a_v[i];
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Foliation biconditionals
// ---------------------------------------------------------------------------

namespace {

// Evaluates one side-A/side-B foliation check; `horizontal_version`
// selects which distribution and which identity.
CheckReport foliation_check(const CheckContext& ctx, bool horizontal_version) {
  const std::string name = horizontal_version ? "horizontal_foliation" : "vertical_foliation";
  const MapSpec& F = *ctx.map;
  const Gates gates = gather_gates(ctx, true);
  if (!gates.error.empty()) return gated_report(name, ctx, gates.error, Verdict::Error);
  if (!gates.has_J)
    return gated_report(name, ctx, "precondition failed: no complex structure on source");
  if (gates.kahler != Verdict::Pass)
    return gated_report(name, ctx, "precondition failed: source is not Kahler");
  if (gates.riemannian != Verdict::Pass)
    return gated_report(name, ctx, "precondition failed: not a Riemannian map");
  if (!anti_invariant_ok(gates))
    return gated_report(name, ctx,
                        "precondition failed: map is not anti-invariant (classification " +
                            to_string(gates.cls->classification) + ")");

  const double check_tol = ctx.tolerance_for(name, 0.0);
  const double tol_identity = check_tol > 0.0 ? check_tol
                              : horizontal_version ? ctx.tol.fd
                                                   : ctx.tol.exact;
  const double tol_fol = check_tol > 0.0 ? check_tol : ctx.tol.fd;

  const int n = static_cast<int>(ctx.samples.size());
  std::vector<SampleOutcome> outcomes(n, SampleOutcome::vacuous(3));
  for_each_sample(n, ctx.policy, [&](int s) {
    try {
      const Point p{F.source, ctx.samples[s]};
      const FrameBundle fb = split_at(F, p, ctx.rank_tol);
      const Eigen::MatrixXd mu = mu_frame(F, fb, ctx.tol.exact);
      const SecondFundamentalForm sff = map_sff_at(F, p);
      const Eigen::MatrixXd J = complex_structure_at(*F.source, p);
      const Eigen::MatrixXd dF = jacobian_at(F, p, ctx.rank_tol).dF;

      double identity = std::numeric_limits<double>::quiet_NaN();
      if (fb.vertical.cols() > 0 && fb.horizontal.cols() > 0) {
        identity = 0.0;
        if (!horizontal_version) {
          // vertical pair against J of a vertical vector and the split
          // of J of a horizontal one
          for (int a = 0; a < fb.vertical.cols(); ++a)
            for (int b = 0; b < fb.vertical.cols(); ++b)
              for (int i = 0; i < fb.horizontal.cols(); ++i) {
                const Eigen::VectorXd X = fb.vertical.col(a);
                const Eigen::VectorXd JY = J * fb.vertical.col(b);
                const BCParts bc = bc_decompose(F, fb, mu, fb.horizontal.col(i), ctx.tol.exact);
                const double lhs =
                    inner(fb.g2, sff.contract(X, bc.vertical_part), dF * JY);
                const double rhs =
                    inner(fb.g2, sff.contract(JY, X), dF * bc.mu_part);
                identity = std::max(identity, std::abs(lhs - rhs));
              }
        } else {
          const FrameField vert_field = anchored_vertical_field(F, fb, ctx.rank_tol);
          for (int i = 0; i < fb.horizontal.cols(); ++i)
            for (int j = 0; j < fb.horizontal.cols(); ++j)
              for (int a = 0; a < fb.vertical.cols(); ++a) {
                const Eigen::VectorXd Z1 = fb.horizontal.col(i);
                const BCParts bc = bc_decompose(F, fb, mu, fb.horizontal.col(j), ctx.tol.exact);
                const Eigen::VectorXd JX = J * fb.vertical.col(a);
                // section of the pullback bundle: the image of J applied
                // to the a-th vertical frame vector
                VectorField W = [&F, &vert_field, a](const Point& q) -> Eigen::VectorXd {
                  const Eigen::MatrixXd Jq = complex_structure_at(*F.source, q);
                  const Eigen::VectorXd jx = Jq * vert_field(q).col(a);
                  return jacobian_at(F, q).dF * jx;
                };
                const double lhs =
                    inner(fb.g2, sff.contract(Z1, bc.vertical_part), dF * JX);
                const double rhs =
                    -inner(fb.g2, pullback_derivative(F, W, p, Z1), dF * bc.mu_part);
                identity = std::max(identity, std::abs(lhs - rhs));
              }
        }
      }
      outcomes[s].residual[0] = identity;

      // Side B: distribution geometry of the kernel / horizontal frame.
      if ((horizontal_version ? fb.horizontal : fb.vertical).cols() > 0) {
        const FrameField field = horizontal_version
                                     ? anchored_horizontal_field(F, fb, ctx.rank_tol)
                                     : anchored_vertical_field(F, fb, ctx.rank_tol);
        const DistributionGeometry dg = distribution_geometry(*F.source, field, p);
        outcomes[s].residual[1] = dg.max_symmetrized_norm(fb.g1);
        outcomes[s].residual[2] = dg.max_integrability_norm(fb.g1);
      }
    } catch (const std::exception& e) {
      outcomes[s].error = e.what();
    }
  });

  CheckReport rep = assemble_samplewise(
      name, {"identity", "foliation_sff", "foliation_integrability"},
      {tol_identity, tol_fol, tol_fol}, ctx.samples, outcomes);
  if (rep.verdict == Verdict::Error) return rep;
  const Verdict side_a = rep.subchecks[0].verdict;
  const Verdict side_b = merge_verdicts(rep.subchecks[1].verdict, rep.subchecks[2].verdict);
  rep.verdict = combine_biconditional(side_a, side_b);
  rep.detail = "identity side " + to_string(side_a) + ", foliation side " + to_string(side_b);
  return rep;
}

}  // namespace

CheckReport check_vertical_foliation(const CheckContext& ctx) {
  return foliation_check(ctx, false);
}

CheckReport check_horizontal_foliation(const CheckContext& ctx) {
  return foliation_check(ctx, true);
}

CheckReport check_product_decomposition(const CheckContext& ctx) {
  CheckReport vert = check_vertical_foliation(ctx);
  CheckReport horiz = check_horizontal_foliation(ctx);
  CheckReport rep;
  rep.name = "product_decomposition";
  rep.samples = static_cast<int>(ctx.samples.size());
  rep.tolerance = std::max(vert.tolerance, horiz.tolerance);
  rep.max_residual = std::max(vert.max_residual, horiz.max_residual);
  rep.verdict = merge_verdicts(vert.verdict, horiz.verdict);
  rep.detail = "vertical_foliation " + to_string(vert.verdict) + ", horizontal_foliation " +
               to_string(horiz.verdict);
  rep.subchecks = {{"vertical_foliation", vert.verdict, vert.max_residual, vert.tolerance},
                   {"horizontal_foliation", horiz.verdict, horiz.max_residual, horiz.tolerance}};
  if (vert.worst) rep.worst = vert.worst;
  if (horiz.worst && horiz.max_residual >= vert.max_residual) rep.worst = horiz.worst;
  return rep;
}

// ---------------------------------------------------------------------------
// Totally geodesic criteria
// ---------------------------------------------------------------------------

CheckReport check_totally_geodesic_criteria(const CheckContext& ctx) {
  const std::string name = "totally_geodesic_criteria";
  const MapSpec& F = *ctx.map;
  const Gates gates = gather_gates(ctx, true);
  if (!gates.error.empty()) return gated_report(name, ctx, gates.error, Verdict::Error);
  if (gates.riemannian != Verdict::Pass)
    return gated_report(name, ctx, "precondition failed: not a Riemannian map");
  if (gates.has_J) {
    if (gates.kahler != Verdict::Pass)
      return gated_report(name, ctx, "precondition failed: source is not Kahler");
    if (!anti_invariant_ok(gates))
      return gated_report(name, ctx,
                          "precondition failed: map is not anti-invariant (classification " +
                              to_string(gates.cls->classification) + ")");
  } else if (!gates.kernel_trivial) {
    return gated_report(name, ctx,
                        "precondition failed: no complex structure on source and kernel "
                        "is nontrivial");
  }

  const double check_tol = ctx.tolerance_for(name, 0.0);
  const double tol_fd = check_tol > 0.0 ? check_tol : ctx.tol.fd;
  const double tol_exact = check_tol > 0.0 ? check_tol : ctx.tol.exact;

  const int n = static_cast<int>(ctx.samples.size());
  std::vector<SampleOutcome> outcomes(n, SampleOutcome::vacuous(5));
  for_each_sample(n, ctx.policy, [&](int s) {
    try {
      const Point p{F.source, ctx.samples[s]};
      const FrameBundle fb = split_at(F, p, ctx.rank_tol);
      const Eigen::MatrixXd dF = jacobian_at(F, p, ctx.rank_tol).dF;
      validate_test_vertical(ctx, fb, dF);
      const Eigen::MatrixXd mu = mu_frame(F, fb, ctx.tol.exact);
      const Eigen::MatrixXd jker = jkernel_frame(F, fb);
      const SecondFundamentalForm sff = map_sff_at(F, p);
      const std::vector<Eigen::VectorXd> verticals = vertical_test_vectors(ctx, fb);
      const bool have_J = F.source->has_complex_structure();
      const Eigen::MatrixXd J =
          have_J ? complex_structure_at(*F.source, p)
                 : Eigen::MatrixXd::Zero(fb.source_dim(), fb.source_dim());

      double r_mu = std::numeric_limits<double>::quiet_NaN();
      double r_jker = std::numeric_limits<double>::quiet_NaN();
      double r_mixed = std::numeric_limits<double>::quiet_NaN();
      double r_horiz = std::numeric_limits<double>::quiet_NaN();

      // Shape operators per complement frame vector.
      std::vector<ShapeOperatorResult> shape_ops;
      for (int k = 0; k < fb.complement.cols(); ++k)
        shape_ops.push_back(shape_operator_at(F, fb, fb.complement.col(k),
                                              NormalExtension::FrameCoefficients,
                                              ctx.tol.exact, ctx.rank_tol));

      // adjoint of A_V applied to the image of J X must stay inside the
      // invariant complement
      if (have_J && !verticals.empty() && !shape_ops.empty()) {
        r_mu = 0.0;
        for (const ShapeOperatorResult& so : shape_ops)
          for (const Eigen::VectorXd& X : verticals) {
            const Eigen::VectorXd JX = J * X;
            const Eigen::VectorXd avf = apply_shape_operator(fb, so, JX);
            const Eigen::VectorXd xstar = adjoint_at(F, p, avf, ctx.rank_tol).v;
            r_mu = std::max(r_mu,
                            norm(fb.g1, xstar - frame_projection(fb.g1, mu, xstar)));
          }
      }

      // adjoint of A_V on the invariant complement must stay inside the
      // image of the kernel under J
      if (mu.cols() > 0 && !shape_ops.empty()) {
        r_jker = 0.0;
        for (const ShapeOperatorResult& so : shape_ops)
          for (int c = 0; c < mu.cols(); ++c) {
            const Eigen::VectorXd avf = apply_shape_operator(fb, so, mu.col(c));
            const Eigen::VectorXd xstar = adjoint_at(F, p, avf, ctx.rank_tol).v;
            r_jker = std::max(
                r_jker, norm(fb.g1, xstar - frame_projection(fb.g1, jker, xstar)));
          }
      }

      // bilinear identity on vertical pairs against split horizontal vectors
      if (have_J && !verticals.empty() && fb.horizontal.cols() > 0) {
        r_mixed = 0.0;
        for (const Eigen::VectorXd& X : verticals)
          for (const Eigen::VectorXd& Y : verticals) {
            const Eigen::VectorXd JY = J * Y;
            for (int i = 0; i < fb.horizontal.cols(); ++i) {
              const BCParts bc = bc_decompose(F, fb, mu, fb.horizontal.col(i), ctx.tol.exact);
              const double lhs =
                  inner(fb.g2, dF * JY, sff.contract(X, bc.vertical_part));
              const double rhs = inner(fb.g2, sff.contract(X, JY), dF * bc.mu_part);
              r_mixed = std::max(r_mixed, std::abs(lhs - rhs));
            }
          }
      }

      // derivative identity on horizontal pairs
      if (have_J && !verticals.empty() && fb.horizontal.cols() > 0) {
        r_horiz = 0.0;
        const FrameField vert_field = anchored_vertical_field(F, fb, ctx.rank_tol);
        const FrameField horiz_field = anchored_horizontal_field(F, fb, ctx.rank_tol);
        for (const Eigen::VectorXd& X : verticals)
          for (int i = 0; i < fb.horizontal.cols(); ++i) {
            // vertical part of J applied to the i-th horizontal frame
            // vector, as a field for the covariant derivative
            VectorField BZ_field = [&F, &vert_field, &horiz_field, i](const Point& q) {
              const Eigen::MatrixXd Jq = complex_structure_at(*F.source, q);
              const Eigen::MatrixXd vert = vert_field(q);
              const Eigen::VectorXd jz = Jq * horiz_field(q).col(i);
              const Eigen::MatrixXd gq = metric_at(*F.source, q);
              return frame_projection(gq, vert, jz).eval();
            };
            const BCParts bcZ = bc_decompose(F, fb, mu, fb.horizontal.col(i), ctx.tol.exact);
            const Eigen::VectorXd nablaBZ = covariant_derivative(*F.source, BZ_field, p, X);
            for (int j = 0; j < fb.horizontal.cols(); ++j) {
              const BCParts bcZbar =
                  bc_decompose(F, fb, mu, fb.horizontal.col(j), ctx.tol.exact);
              const double lhs = inner(fb.g1, nablaBZ, bcZbar.vertical_part);
              const double rhs =
                  inner(fb.g2,
                        sff.contract(X, bcZ.vertical_part) + sff.contract(X, bcZ.mu_part),
                        dF * bcZbar.mu_part) -
                  inner(fb.g2, dF * bcZ.mu_part, sff.contract(X, bcZbar.vertical_part));
              r_horiz = std::max(r_horiz, std::abs(lhs - rhs));
            }
          }
      }

      outcomes[s].residual[0] = r_mu;
      outcomes[s].residual[1] = r_jker;
      outcomes[s].residual[2] = r_mixed;
      outcomes[s].residual[3] = r_horiz;
      outcomes[s].residual[4] = sff.max_entry_norm(fb.g2);
    } catch (const std::exception& e) {
      outcomes[s].error = e.what();
    }
  });

  CheckReport rep = assemble_samplewise(
      name,
      {"mu_range_condition", "jker_range_condition", "mixed_pair_identity",
       "horizontal_pair_identity", "map_sff_zero"},
      {tol_fd, tol_fd, tol_exact, tol_fd, tol_exact}, ctx.samples, outcomes);
  if (rep.verdict == Verdict::Error) return rep;
  Verdict side_a = Verdict::VacuousPass;
  for (int c = 0; c < 4; ++c) side_a = merge_verdicts(side_a, rep.subchecks[c].verdict);
  const Verdict side_b = rep.subchecks[4].verdict;
  rep.verdict = combine_biconditional(side_a, side_b);
  rep.detail =
      "criteria side " + to_string(side_a) + ", totally geodesic side " + to_string(side_b);
  return rep;
}

// ---------------------------------------------------------------------------
// Umbilical fibers force a totally geodesic kernel foliation
// ---------------------------------------------------------------------------

CheckReport check_umbilical_implies_geodesic(const CheckContext& ctx) {
  const std::string name = "umbilical_implies_geodesic";
  const MapSpec& F = *ctx.map;
  const Gates gates = gather_gates(ctx, true);
  if (!gates.error.empty()) return gated_report(name, ctx, gates.error, Verdict::Error);
  if (!gates.has_J)
    return gated_report(name, ctx, "hypothesis failed: no complex structure on source");
  if (gates.kahler != Verdict::Pass)
    return gated_report(name, ctx, "hypothesis failed: source is not Kahler");
  if (gates.riemannian != Verdict::Pass)
    return gated_report(name, ctx, "hypothesis failed: not a Riemannian map");
  if (!gates.cls || !gates.cls->lagrangian)
    return gated_report(name, ctx, "hypothesis failed: map is not Lagrangian");
  if (gates.kernel_dim <= 1)
    return gated_report(name, ctx, "hypothesis failed: kernel dimension is not > 1");

  const double tol = ctx.tolerance_for(name, ctx.tol.fd);
  UmbilicalFibersResult umb = check_umbilical_fibers(F, ctx.samples, tol, ctx.rank_tol,
                                                     ctx.policy);
  CheckReport rep;
  rep.name = name;
  rep.samples = static_cast<int>(ctx.samples.size());
  rep.tolerance = tol;
  rep.subchecks = umb.report.subchecks;
  rep.max_residual = umb.report.max_residual;
  rep.worst = umb.report.worst;
  if (umb.report.verdict == Verdict::Error) {
    rep.verdict = Verdict::Error;
    rep.detail = umb.report.detail;
    return rep;
  }
  if (umb.report.subchecks.empty() || umb.report.verdict == Verdict::VacuousPass) {
    rep.verdict = Verdict::VacuousPass;
    rep.detail = "hypothesis failed: no fibers to test";
    return rep;
  }
  const Verdict umbilical = umb.report.subchecks[0].verdict;
  const Verdict minimal = umb.report.subchecks[1].verdict;
  const Verdict geodesic_fibers = umb.report.subchecks[2].verdict;
  if (umbilical != Verdict::Pass) {
    rep.verdict = Verdict::VacuousPass;
    rep.detail = "hypothesis failed: fibers are not umbilical (residual " +
                 std::to_string(umb.report.subchecks[0].max_residual) + ")";
    return rep;
  }
  // Umbilical hypothesis holds: the conclusion demands vanishing mean
  // curvature and a totally geodesic kernel foliation. An umbilical
  // verdict with nonzero mean curvature would contradict the statement.
  if (minimal == Verdict::Pass && geodesic_fibers == Verdict::Pass) {
    rep.verdict = Verdict::Pass;
    rep.detail = "umbilical fibers with vanishing mean curvature";
  } else {
    rep.verdict = Verdict::Inconsistent;
    rep.detail = "umbilical fibers with nonzero mean curvature";
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Pluriharmonicity
// ---------------------------------------------------------------------------

CheckReport check_pluriharmonic(const CheckContext& ctx) {
  const std::string name = "pluriharmonic";
  const MapSpec& F = *ctx.map;
  if (!F.source->has_complex_structure())
    return gated_report(name, ctx, "precondition failed: no complex structure on source");
  const double tol = ctx.tolerance_for(name, ctx.tol.exact);

  const int m = F.source->dim();
  std::vector<Eigen::VectorXd> vectors;
  for (int i = 0; i < m; ++i) vectors.push_back(Eigen::VectorXd::Unit(m, i));
  for (const Eigen::VectorXd& v : ctx.test_frame) vectors.push_back(v);

  const int n = static_cast<int>(ctx.samples.size());
  std::vector<SampleOutcome> outcomes(n, SampleOutcome::vacuous(1));
  for_each_sample(n, ctx.policy, [&](int s) {
    try {
      const Point p{F.source, ctx.samples[s]};
      const SecondFundamentalForm sff = map_sff_at(F, p);
      const Eigen::MatrixXd J = complex_structure_at(*F.source, p);
      const Eigen::MatrixXd g2 = metric_at(*F.target, sff.image);
      double worst = 0.0;
      for (const Eigen::VectorXd& X : vectors)
        for (const Eigen::VectorXd& Y : vectors) {
          const Eigen::VectorXd r = sff.contract(X, Y) + sff.contract(J * X, J * Y);
          worst = std::max(worst, norm(g2, r));
        }
      outcomes[s].residual[0] = worst;
    } catch (const std::exception& e) {
      outcomes[s].error = e.what();
    }
  });
  return assemble_samplewise(name, {"pluriharmonic_defect"}, {tol}, ctx.samples, outcomes);
}

CheckReport check_pluriharmonic_implies_geodesic(const CheckContext& ctx) {
  const std::string name = "pluriharmonic_implies_geodesic";
  const MapSpec& F = *ctx.map;
  const Gates gates = gather_gates(ctx, true);
  if (!gates.error.empty()) return gated_report(name, ctx, gates.error, Verdict::Error);
  if (!gates.has_J)
    return gated_report(name, ctx, "hypothesis failed: no complex structure on source");
  if (gates.kahler != Verdict::Pass)
    return gated_report(name, ctx, "hypothesis failed: source is not Kahler");
  if (gates.riemannian != Verdict::Pass)
    return gated_report(name, ctx, "hypothesis failed: not a Riemannian map");
  if (!gates.cls || !gates.cls->lagrangian)
    return gated_report(name, ctx, "hypothesis failed: map is not Lagrangian");

  const double tol = ctx.tolerance_for(name, ctx.tol.exact);
  CheckContext sub = ctx;
  sub.tol_overrides.clear();
  CheckReport ph = check_pluriharmonic(sub);
  CheckReport tg = check_totally_geodesic_map(F, ctx.samples, tol, ctx.rank_tol, ctx.policy);

  CheckReport rep;
  rep.name = name;
  rep.samples = static_cast<int>(ctx.samples.size());
  rep.tolerance = tol;
  rep.max_residual = std::max(ph.max_residual, tg.max_residual);
  rep.subchecks = {{"pluriharmonic", ph.verdict, ph.max_residual, ph.tolerance},
                   {"totally_geodesic", tg.verdict, tg.max_residual, tg.tolerance}};
  rep.verdict = combine_implication(ph.verdict, tg.verdict);
  rep.detail = "pluriharmonic " + to_string(ph.verdict) + " => totally geodesic " +
               to_string(tg.verdict);
  if (ph.worst) rep.worst = ph.worst;
  if (tg.worst && tg.max_residual >= ph.max_residual) rep.worst = tg.worst;
  return rep;
}

// ---------------------------------------------------------------------------
// Dimension identities
// ---------------------------------------------------------------------------

CheckReport check_dimension_identities(const CheckContext& ctx) {
  const std::string name = "dimension_identities";
  const MapSpec& F = *ctx.map;
  const Gates gates = gather_gates(ctx, true);
  if (!gates.error.empty()) return gated_report(name, ctx, gates.error, Verdict::Error);
  if (!gates.has_J)
    return gated_report(name, ctx, "skipped: no complex structure on source");
  if (!anti_invariant_ok(gates))
    return gated_report(name, ctx, "skipped: map is not anti-invariant (classification " +
                                       to_string(gates.cls->classification) + ")");

  const AntiInvarianceVerdict& cls = *gates.cls;
  const int m = F.source->dim();
  const int dim_target = F.target->dim();
  const int r = gates.rank;
  const int dim_ker = gates.kernel_dim;

  CheckReport rep;
  rep.name = name;
  rep.samples = static_cast<int>(ctx.samples.size());
  rep.tolerance = 0.5;  // integer-exact comparisons

  // measured invariant-complement dimension vs dim M - 2 dim ker
  double mu_resid;
  if (cls.mu_dim < 0) {
    mu_resid = 1.0;  // dimension changed across samples
  } else {
    mu_resid = std::abs(cls.mu_dim - (m - 2 * dim_ker));
  }
  SubCheck mu_sub{"invariant_complement_dimension",
                  mu_resid < 0.5 ? Verdict::Pass : Verdict::Fail, mu_resid, 0.5};

  // Lagrangian <=> dim M = 2 rank
  const bool lag_by_dim = m == 2 * r;
  const double lag_resid = cls.lagrangian == lag_by_dim ? 0.0 : 1.0;
  SubCheck lag_sub{"lagrangian_equivalence", lag_resid < 0.5 ? Verdict::Pass : Verdict::Fail,
                   lag_resid, 0.5};

  // proper maps from 2-dimensional sources must be anti-invariant
  SubCheck forced{"forced_anti_invariance", Verdict::VacuousPass, 0.0, 0.5};
  const bool proper = r > 0 && r < std::min(m, dim_target);
  if (m == 2 && proper && gates.riemannian == Verdict::Pass) {
    const double res = cls.classification == KernelClass::AntiInvariant ? 0.0 : 1.0;
    forced = SubCheck{"forced_anti_invariance", res < 0.5 ? Verdict::Pass : Verdict::Fail,
                      res, 0.5};
  }

  rep.subchecks = {mu_sub, lag_sub, forced};
  rep.verdict = Verdict::VacuousPass;
  for (const SubCheck& sc : rep.subchecks) rep.verdict = merge_verdicts(rep.verdict, sc.verdict);
  rep.max_residual = std::max({mu_sub.max_residual, lag_sub.max_residual, forced.max_residual});
  std::ostringstream oss;
  oss << "classification " << to_string(cls.classification)
      << (cls.vacuous ? " (trivial kernel)" : "") << ", lagrangian "
      << (cls.lagrangian ? "yes" : "no") << ", measured mu dim " << cls.mu_dim << ", rank " << r;
  rep.detail = oss.str();
  return rep;
}

// ---------------------------------------------------------------------------
// Range perpendicularity of the second fundamental form
// ---------------------------------------------------------------------------

CheckReport check_range_perpendicularity(const CheckContext& ctx) {
  const std::string name = "range_perpendicularity";
  const MapSpec& F = *ctx.map;
  const Gates gates = gather_gates(ctx, false);
  if (!gates.error.empty()) return gated_report(name, ctx, gates.error, Verdict::Error);
  if (gates.riemannian != Verdict::Pass)
    return gated_report(name, ctx, "precondition failed: not a Riemannian map");

  const double tol = ctx.tolerance_for(name, ctx.tol.fd);
  const bool have_J = F.source->has_complex_structure();

  const int n = static_cast<int>(ctx.samples.size());
  std::vector<SampleOutcome> outcomes(n, SampleOutcome::vacuous(3));
  for_each_sample(n, ctx.policy, [&](int s) {
    try {
      const Point p{F.source, ctx.samples[s]};
      const FrameBundle fb = split_at(F, p, ctx.rank_tol);
      const SecondFundamentalForm sff = map_sff_at(F, p);

      if (fb.horizontal.cols() > 0) {
        double worst = 0.0;
        for (int i = 0; i < fb.horizontal.cols(); ++i)
          for (int j = i; j < fb.horizontal.cols(); ++j) {
            const Eigen::VectorXd v =
                sff.contract(fb.horizontal.col(i), fb.horizontal.col(j));
            worst = std::max(worst, norm(fb.g2, frame_projection(fb.g2, fb.range, v)));
          }
        outcomes[s].residual[0] = worst;
      }
      if (fb.vertical.cols() > 0) {
        double worst = 0.0;
        for (int a = 0; a < fb.vertical.cols(); ++a)
          for (int b = a; b < fb.vertical.cols(); ++b) {
            const Eigen::VectorXd v = sff.contract(fb.vertical.col(a), fb.vertical.col(b));
            worst = std::max(worst, norm(fb.g2, frame_projection(fb.g2, fb.complement, v)));
          }
        outcomes[s].residual[1] = worst;
      }
      if (have_J && fb.vertical.cols() > 0) {
        const Eigen::MatrixXd J = complex_structure_at(*F.source, p);
        double worst = 0.0;
        for (int a = 0; a < fb.vertical.cols(); ++a)
          for (int b = a; b < fb.vertical.cols(); ++b) {
            const Eigen::VectorXd v =
                sff.contract(J * fb.vertical.col(a), J * fb.vertical.col(b));
            worst = std::max(worst, norm(fb.g2, frame_projection(fb.g2, fb.range, v)));
          }
        outcomes[s].residual[2] = worst;
      }
    } catch (const std::exception& e) {
      outcomes[s].error = e.what();
    }
  });
  return assemble_samplewise(
      name,
      {"horizontal_pairs_no_range_part", "vertical_pairs_in_range",
       "rotated_vertical_pairs_no_range_part"},
      {tol, tol, tol}, ctx.samples, outcomes);
}

}  // namespace rmap

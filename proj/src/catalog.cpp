#include "rmap/catalog.hpp"

namespace rmap {

namespace {

const char* kLagrangianPlane = R"(# Linear Lagrangian map from flat R4 onto a plane in flat R3.
# Kernel = span{(1,0,1,0), (0,1,0,-1)}, horizontal = span{(1,0,-1,0), (0,1,0,1)},
# range complement = span of the second target axis. Totally geodesic, so
# every criterion holds with zero residual.

[manifold R4]
dim = 4
coords = x1 x2 x3 x4
metric = identity
J = canonical

[manifold R3]
dim = 3
coords = y1 y2 y3
metric = identity

[map F]
source = R4
target = R3
components = (x1 - x3)/sqrt(2), 0, (x2 + x4)/sqrt(2)

[verify]
name = lagrangian_plane
map = F
sampling = random
region = -1 1; -1 1; -1 1; -1 1
count = 32
seed = 7
checks = all
)";

const char* kLagrangianCylinder = R"(# Lagrangian Riemannian map from flat R4 onto a cylinder in flat R3.
# Not totally geodesic: the second fundamental form on the horizontal
# direction u = (x1-x3)/sqrt(2) has norm 2.
#
# The declared test frame is the natural (unnormalized) adapted frame
#   Z1 = (1,0,1,0), Z2 = (0,1,0,-1)   (kernel)
#   Z3 = (1,0,-1,0), Z4 = (0,1,0,1)   (horizontal)
# Each vector has length sqrt(2); residuals quoted for this scenario use
# that convention (a unit-normalized frame would scale them accordingly).

[manifold R4]
dim = 4
coords = x1 x2 x3 x4
metric = identity
J = canonical

[manifold R3]
dim = 3
coords = y1 y2 y3
metric = identity

[map G]
source = R4
target = R3
components = cos((x1 - x3)/sqrt(2)), sin((x1 - x3)/sqrt(2)), (x2 + x4)/sqrt(2)

[verify]
name = lagrangian_cylinder
map = G
sampling = random
region = -1 1; -1 1; -1 1; -1 1
count = 64
seed = 11
checks = all
test_vertical = 1 0 1 0; 0 1 0 -1
test_frame = 1 0 1 0; 0 1 0 -1; 1 0 -1 0; 0 1 0 1
)";

const char* kCircleInclusion = R"(# Isometric inclusion of the line onto the unit circle in flat R2.
# Trivial kernel (immersion case); the shape operator for the inward
# normal is the identity, so the map is not totally geodesic and the
# totally-geodesic criteria must fail consistently on both sides.

[manifold Line]
dim = 1
coords = t
metric = identity

[manifold Plane]
dim = 2
coords = y1 y2
metric = identity

[map C]
source = Line
target = Plane
components = cos(t), sin(t)

[verify]
name = circle_inclusion
map = C
sampling = random
region = -3 3
count = 32
seed = 3
checks = constant_rank, riemannian_map, totally_geodesic, umbilical_fibers, range_perpendicularity, totally_geodesic_criteria, pluriharmonic_implies_geodesic
)";

const char* kInvariantProjection = R"(# Riemannian submersion from flat R4 onto flat R2 along the last two
# coordinates. The kernel is invariant under the canonical complex
# structure (J maps it into itself), so the anti-invariance check fails
# by classification and the taxonomy-dependent checks are skipped.

[manifold R4]
dim = 4
coords = x1 x2 x3 x4
metric = identity
J = canonical

[manifold R2]
dim = 2
coords = y1 y2
metric = identity

[map P]
source = R4
target = R2
components = x1, x2

[verify]
name = invariant_projection
map = P
sampling = random
region = -1 1; -1 1; -1 1; -1 1
count = 32
seed = 13
checks = almost_hermitian, kahler, constant_rank, riemannian_map, anti_invariant, dimension_identities, totally_geodesic, umbilical_fibers, range_perpendicularity, umbilical_implies_geodesic, pluriharmonic
)";

const char* kLineProjection = R"(# Proper Riemannian map from flat R2 to flat R2: (x, y) -> (x, 0).
# Rank 1 with one-dimensional kernel; every proper map from a
# 2-dimensional almost Hermitian source is anti-invariant, and this one
# is Lagrangian. Totally geodesic, so all criteria pass.

[manifold Source]
dim = 2
coords = x y
metric = identity
J = canonical

[manifold Target]
dim = 2
coords = u v
metric = identity

[map L]
source = Source
target = Target
components = x, 0

[verify]
name = line_projection
map = L
sampling = random
region = -1 1; -1 1
count = 32
seed = 17
checks = all
)";

const char* kPoincareVertical = R"(# Projection of the Poincare half-plane onto the x-axis. The fibers are
# vertical lines, which are geodesics of the hyperbolic metric, so the
# kernel foliation is totally geodesic with vanishing mean curvature;
# the horizontal distribution has mean curvature of norm 1. The map is
# not Riemannian (the horizontal stretch is 1/y), which exercises the
# precondition gates of the foliation checks.

[manifold H2]
dim = 2
coords = x y
g 1 1 = 1/(y^2)
g 2 2 = 1/(y^2)
J = canonical

[manifold Line]
dim = 1
coords = u
metric = identity

[map P]
source = H2
target = Line
components = x

[verify]
name = poincare_vertical
map = P
sampling = random
region = -2 2; 0.5 3
count = 32
seed = 5
checks = almost_hermitian, kahler, constant_rank, riemannian_map, anti_invariant, dimension_identities, totally_geodesic, umbilical_fibers, vertical_foliation, umbilical_implies_geodesic
)";

const char* kHermitianNotKahler = R"(# Almost Hermitian but non-Kahler source: the conformal factor 1 + x3^2
# on the first complex line depends on a coordinate of the second one,
# so the fundamental two-form is not closed. The Kahler precondition of
# the foliation and totally-geodesic criteria fails, which must surface
# as gated (vacuous) verdicts, never as inconsistency.

[manifold M]
dim = 4
coords = x1 x2 x3 x4
g 1 1 = 1 + x3^2
g 2 2 = 1 + x3^2
g 3 3 = 1
g 4 4 = 1
J = canonical

[manifold R3]
dim = 3
coords = y1 y2 y3
metric = identity

[map F]
source = M
target = R3
components = (x1 - x3)/sqrt(2), 0, (x2 + x4)/sqrt(2)

[verify]
name = hermitian_not_kahler
map = F
sampling = random
region = -1 1; -1 1; -1 1; -1 1
count = 32
seed = 19
checks = almost_hermitian, kahler, constant_rank, riemannian_map, anti_invariant, vertical_foliation, horizontal_foliation, totally_geodesic_criteria
)";

const char* kHolomorphicIdentity = R"(# Identity map of flat R4 with the canonical complex structure: a
# holomorphic local isometry. Trivial kernel and trivial range
# complement; pluriharmonic and totally geodesic.

[manifold R4]
dim = 4
coords = x1 x2 x3 x4
metric = identity
J = canonical

[map Id]
source = R4
target = R4
components = x1, x2, x3, x4

[verify]
name = holomorphic_identity
map = Id
sampling = random
region = -1 1; -1 1; -1 1; -1 1
count = 32
seed = 23
checks = all
)";

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"lagrangian_plane",
       "linear Lagrangian map from flat R4 to flat R3; totally geodesic golden case",
       kLagrangianPlane},
      {"lagrangian_cylinder",
       "Lagrangian map from flat R4 onto a cylinder; curved range, pinned residuals",
       kLagrangianCylinder},
      {"circle_inclusion",
       "isometric circle inclusion into flat R2; immersion case with unit shape operator",
       kCircleInclusion},
      {"invariant_projection",
       "Riemannian submersion from flat R4 with J-invariant kernel; anti-invariance fails",
       kInvariantProjection},
      {"line_projection",
       "proper rank-1 map from flat R2; forced anti-invariant and Lagrangian",
       kLineProjection},
      {"poincare_vertical",
       "Poincare half-plane projected onto the x-axis; geodesic fibers, not Riemannian",
       kPoincareVertical},
      {"hermitian_not_kahler",
       "almost Hermitian but non-Kahler source; exercises the Kahler precondition gate",
       kHermitianNotKahler},
      {"holomorphic_identity",
       "holomorphic identity of flat R4; immersion and submersion at once",
       kHolomorphicIdentity},
  };
  return entries;
}

const CatalogEntry* find_catalog_entry(const std::string& name) {
  for (const CatalogEntry& e : catalog())
    if (e.name == name) return &e;
  return nullptr;
}

}  // namespace rmap

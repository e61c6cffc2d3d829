#include "doctest.h"

#include "chyp/cusp.hpp"
#include "support.hpp"

using namespace chyp;
using namespace chyp::testing;

namespace {

SubgroupDescriptor center_subgroup() {
  SubgroupDescriptor V;
  V.n = 2;
  V.include_center = true;
  V.conjugator = HeisElement::identity(2);
  return V;
}

GroupSpec vertical() { return GroupSpec::from_heis({HeisIsometry::translation({CVec::Zero(1), 1.0})}); }

}  // namespace

TEST_CASE("cusp at infinity around the center") {
  const HPoint inf = HPoint::infinity(2);
  const auto V = center_subgroup();
  for (double r : {0.5, 1.0, 4.0}) {
    CHECK(cusp_contains(inf, r, HPoint::boundary2(1.0 / r + 1e-9, 0.0), V));
    CHECK_FALSE(cusp_contains(inf, r, HPoint::boundary2(1.0 / r - 1e-9, 0.0), V));
    CHECK_FALSE(cusp_contains(inf, r, HPoint::boundary2(0.0, 5.0), V));  // x in V
    CHECK(cusp_surface_contains(inf, r, HPoint::boundary2(cplx(0, 1.0 / r), 2.0), V));
  }
  CHECK_THROWS_AS(cusp_contains(inf, 1.0, inf, V), ValidationError);
  CHECK_THROWS_AS(cusp_contains(inf, 0.0, HPoint::boundary2(1.0, 0.0), V), ValidationError);
  CHECK_THROWS_AS(cusp_contains(HPoint::finite(CVec::Zero(1), 0, 1), 1.0, inf, V), ValidationError);
}

TEST_CASE("finite cusp points are moved to infinity first") {
  Rng rng(61);
  const auto V = center_subgroup();
  const HPoint origin = HPoint::boundary2(0.0, 0.0);
  CHECK_THROWS_AS(cusp_contains(origin, 1.0, origin, V), ValidationError);
  // The chart image of infinity is the origin itself, which lies in V.
  CHECK_FALSE(cusp_contains(origin, 1.0, HPoint::infinity(2), V));
  for (int i = 0; i < 200; ++i) {
    const HPoint p = random_boundary(rng, 2);
    const HPoint x = random_boundary(rng, 2, 3.0);
    const double r = uniform(rng, 0.2, 3.0);
    const HPoint y = act(Isometry(inversion_matrix(p)), x);
    CHECK(cusp_contains(p, r, x, V) == (heis_dist_to_subgroup(y, V) >= 1.0 / r));
  }
}

TEST_CASE("vertical cyclic group: precise invariance holds") {
  CuspAuditOptions opt;
  opt.samples = 2000;
  const CuspAuditReport r = precise_invariance_audit(vertical(), HPoint::infinity(2), 1.0, 4, center_subgroup(), opt);
  CHECK(r.violation_count == 0);
  CHECK(r.stabilizer_size == r.table_size);
  CHECK(r.checks == 2000 * (r.table_size - 1));
}

TEST_CASE("an inverted copy of the translation breaks precise invariance for large r") {
  const CMat t = embed(HeisIsometry::translation({CVec::Zero(1), 1.0}));
  const CMat inv = inversion_matrix(2);
  GroupSpec g;
  g.n = 2;
  g.generators.push_back({t, "t"});
  g.generators.push_back({CMat(inv * t * inv), "s"});
  CuspAuditOptions opt;
  opt.samples = 500;
  const CuspAuditReport big = precise_invariance_audit(g, HPoint::infinity(2), 10.0, 3, center_subgroup(), opt);
  CHECK(big.violation_count > 0);
  CHECK(big.stabilizer_size < big.table_size);
  REQUIRE_FALSE(big.witnesses.empty());
  CHECK(big.witnesses.front().kind == ViolationKind::OtherEnters);
  const CuspAuditReport small = precise_invariance_audit(g, HPoint::infinity(2), 0.1, 3, center_subgroup(), opt);
  CHECK(small.violation_count == 0);
}

TEST_CASE("audit output does not depend on the thread count") {
  CuspAuditOptions opt;
  opt.samples = 300;
  const CMat t = embed(HeisIsometry::translation({CVec::Zero(1), 1.0}));
  GroupSpec g;
  g.n = 2;
  g.generators.push_back({t, "t"});
  g.generators.push_back({CMat(inversion_matrix(2) * t * inversion_matrix(2)), "s"});
  const auto a = precise_invariance_audit(g, HPoint::boundary2(0.5, 0.0), 2.0, 2, center_subgroup(), opt);
  opt.threads = 4;
  const auto b = precise_invariance_audit(g, HPoint::boundary2(0.5, 0.0), 2.0, 2, center_subgroup(), opt);
  CHECK(a.violation_count == b.violation_count);
  REQUIRE(a.witnesses.size() == b.witnesses.size());
  for (std::size_t i = 0; i < a.witnesses.size(); ++i) CHECK(a.witnesses[i].image_depth == b.witnesses[i].image_depth);
}

#include "doctest.h"

#include "chyp/subgroup.hpp"
#include "support.hpp"

using namespace chyp;
using namespace chyp::testing;

namespace {

HeisIsometry tr(cplx xi, double v) { return HeisIsometry::translation({CVec::Constant(1, xi), v}); }

bool preserves(const HeisIsometry& g, const SubgroupDescriptor& V, Rng& rng) {
  // g maps V (with the identity conjugator) into itself
  const auto e = V.orthonormal_basis();
  for (int i = 0; i < 20; ++i) {
    CVec xi = CVec::Zero(V.n - 1);
    for (const CVec& b : e) xi += uniform(rng, -3, 3) * b;
    const HPoint p = HPoint::finite(xi, V.include_center ? uniform(rng, -3, 3) : 0.0, 0.0);
    const HPoint q = apply_heis_isometry(g, p);
    if (!V.contains({q.xi(), q.v()}, 1e-9)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("worked examples of minimal invariant subgroups") {
  const auto lat = minimal_invariant_subgroup(GroupSpec::from_heis({tr(1.0, 0.0), tr(0.0, 1.0)}));
  CHECK(lat.group_class == 'a');
  CHECK(lat.V.dimension() == 2);
  CHECK(lat.V.include_center);
  CHECK(lat.V.conjugator.xi.norm() == 0.0);

  const auto line = minimal_invariant_subgroup(GroupSpec::from_heis({tr(1.0, 0.0)}));
  CHECK(line.V.dimension() == 1);
  CHECK_FALSE(line.V.include_center);

  const auto center = minimal_invariant_subgroup(GroupSpec::from_heis({tr(0.0, 1.0)}));
  CHECK(center.V.dimension() == 1);
  CHECK(center.V.include_center);
  CHECK(center.V.orthonormal_basis().empty());

  for (const auto* s : {&lat, &line, &center}) {
    CHECK(cocompactness_check(*s).passed);
    CHECK(rotation_defect_on_subgroup(*s) <= 1e-10);
  }
}

TEST_CASE("a tilted translation is straightened by conjugation") {
  const auto s = minimal_invariant_subgroup(GroupSpec::from_heis({tr(1.0, 0.5)}));
  CHECK_FALSE(s.V.include_center);
  CHECK(s.V.dimension() == 1);
  CHECK(std::abs(s.conjugated_generators[0].tau.v) <= 1e-12);
  CHECK(cocompactness_check(s).passed);
}

TEST_CASE("finite-order rotation part") {
  Rng rng(51);
  for (cplx a : {cplx(-1, 0), cplx(0, 1), std::polar(1.0, 2 * M_PI / 3)}) {
    const HeisIsometry g = HeisIsometry::make(CMat::Constant(1, 1, a), {CVec::Constant(1, cplx(1, 0.5)), 2.0});
    const auto s = minimal_invariant_subgroup(GroupSpec::from_heis({g}));
    CHECK(s.group_class == 'b');
    CHECK(s.V.index >= 2);
    // the conjugated generator's translation lies in Fix(A) = {0}
    CHECK(s.conjugated_generators[0].tau.xi.norm() <= 1e-10);
    CHECK(cocompactness_check(s).passed);
    CHECK(rotation_defect_on_subgroup(s) <= 1e-10);
    CHECK(preserves(s.conjugated_generators[0], SubgroupDescriptor{s.V.n, s.V.basis, s.V.include_center,
                                                                   HeisElement::identity(2), 1},
                    rng));
  }
  // n = 3: the rotation fixes a complex line, which carries the translation
  CMat A = CMat::Identity(2, 2);
  A(1, 1) = -1.0;
  CVec xi(2);
  xi << 1.0, 0.7;
  const auto s = minimal_invariant_subgroup(GroupSpec::from_heis({HeisIsometry::make(A, {xi, 0.0})}));
  CHECK(s.V.index == 2);
  CHECK(s.V.dimension() == 1);
  CHECK(rotation_defect_on_subgroup(s) <= 1e-10);
  CHECK(cocompactness_check(s).passed);
}

TEST_CASE("translation generators preserve their subgroup") {
  Rng rng(52);
  for (int i = 0; i < 20; ++i) {
    std::vector<HeisIsometry> gens{HeisIsometry::translation(random_heis(rng, 3, 1.0)),
                                   HeisIsometry::translation(random_heis(rng, 3, 1.0))};
    const auto s = minimal_invariant_subgroup(GroupSpec::from_heis(gens));
    SubgroupDescriptor V = s.V;
    V.conjugator = HeisElement::identity(3);
    for (const auto& g : s.conjugated_generators) CHECK(preserves(g, V, rng));
    CHECK(rotation_defect_on_subgroup(s) <= 1e-10);
  }
}

TEST_CASE("density check rejects a subgroup that is too large") {
  const auto s = minimal_invariant_subgroup(GroupSpec::from_heis({tr(1.0, 0.0), tr(0.0, 1.0)}));
  SubgroupDescriptor wrong = s.V;
  wrong.basis = {CVec::Constant(1, 1.0), CVec::Constant(1, cplx(0, 1))};
  CHECK_FALSE(density_check(wrong, s.translation_generators, 8, 0.0, 2000, 1).passed);
}

TEST_CASE("unsupported classes") {
  const HeisIsometry irrational = HeisIsometry::make(CMat::Constant(1, 1, std::polar(1.0, 1.0)),
                                                     {CVec::Constant(1, 1.0), 1.0});
  CHECK_THROWS_AS(minimal_invariant_subgroup(GroupSpec::from_heis({irrational})), UnsupportedGroupClass);
  const HeisIsometry rot = HeisIsometry::make(-CMat::Identity(1, 1), {CVec::Zero(1), 1.0});
  CHECK_THROWS_AS(minimal_invariant_subgroup(GroupSpec::from_heis({rot, tr(1.0, 0.0)})), UnsupportedGroupClass);
  GroupSpec m;
  m.n = 2;
  m.generators.push_back({CMat(CMat::Identity(3, 3)), "m"});
  CHECK_THROWS_AS(minimal_invariant_subgroup(m), UnsupportedGroupClass);
}

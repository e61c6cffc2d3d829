#include "doctest.h"

#include "chyp/heisenberg.hpp"
#include "chyp/isometry.hpp"
#include "support.hpp"

using namespace chyp;
using namespace chyp::testing;

namespace {

HeisElement elem(cplx xi, double v) {
  CVec x(1);
  x(0) = xi;
  return {x, v};
}

bool close(const HeisElement& a, const HeisElement& b, double tol) {
  return (a.xi - b.xi).cwiseAbs().maxCoeff() <= tol && std::abs(a.v - b.v) <= tol;
}

}  // namespace

TEST_CASE("group law on a worked example") {
  const HeisElement p = h_mul(elem(1.0, 0.0), elem(cplx(0, 1), 0.0));
  CHECK(close(p, elem(cplx(1, 1), -2.0), 1e-15));
  CHECK(close(h_mul(elem(1.0, 0.0), h_inv(elem(1.0, 0.0))), HeisElement::identity(2), 0.0));
}

TEST_CASE("group axioms hold") {
  Rng rng(21);
  for (int n : {2, 3, 4}) {
    for (int i = 0; i < 300; ++i) {
      const HeisElement a = random_heis(rng, n), b = random_heis(rng, n), c = random_heis(rng, n);
      CHECK(close(h_mul(h_mul(a, b), c), h_mul(a, h_mul(b, c)), 1e-12));
      CHECK(close(h_mul(a, h_inv(a)), HeisElement::identity(n), 1e-12));
      CHECK(close(h_mul(HeisElement::identity(n), a), a, 0.0));
      // the commutator is central: [a,b] = (0, 4 Im<<a,b>>)
      const HeisElement comm = h_mul(h_mul(a, b), h_mul(h_inv(a), h_inv(b)));
      CHECK(comm.xi.norm() <= 1e-12);
      CHECK(comm.v == doctest::Approx(4.0 * heis_pairing(a.xi, b.xi).imag()).epsilon(1e-10));
    }
  }
}

TEST_CASE("embedding of a horizontal translation") {
  const CMat m = embed(HeisIsometry::translation(elem(1.0, 0.0)));
  CMat expect(3, 3);
  expect << 1, 1, 1, -1, 0.5, -0.5, 1, 0.5, 1.5;
  CHECK(max_abs(m - expect) <= 1e-15);
}

TEST_CASE("embedding is a J-unitary homomorphism that matches the action") {
  Rng rng(22);
  for (int n : {2, 3}) {
    for (int i = 0; i < 200; ++i) {
      const HeisIsometry g = random_heis_isometry(rng, n), h = random_heis_isometry(rng, n);
      CHECK(is_J_unitary(embed(g), 1e-10));
      CHECK(max_abs(embed(g) * embed(h) - embed(compose(g, h))) <= 1e-10);
      CHECK(max_abs(embed(inverse(g)) * embed(g) - CMat::Identity(n + 1, n + 1)) <= 1e-10);
      const HPoint p = i % 2 ? random_interior(rng, n) : random_boundary(rng, n);
      CHECK(same_point(act(Isometry(embed(g)), p), apply_heis_isometry(g, p), 1e-9));
    }
  }
  CHECK_THROWS_AS(HeisIsometry::make(2.0 * CMat::Identity(1, 1), HeisElement::identity(2)),
                  NumericError);
}

TEST_CASE("Cygan metric axioms and invariance") {
  Rng rng(23);
  for (int n : {2, 3}) {
    for (int i = 0; i < 500; ++i) {
      const HPoint p = random_boundary(rng, n), q = random_boundary(rng, n), r = random_boundary(rng, n);
      const double pq = cygan_dist(p, q);
      CHECK(pq == doctest::Approx(cygan_dist(q, p)).epsilon(1e-13));
      CHECK(pq <= cygan_dist(p, r) + cygan_dist(r, q) + 1e-9);
      CHECK(cygan_dist(p, p) == 0.0);
      const HeisIsometry g = random_heis_isometry(rng, n);
      CHECK(std::abs(cygan_dist(apply_heis_isometry(g, p), apply_heis_isometry(g, q)) - pq) <= 1e-12 * (1 + pq * pq));
    }
  }
  CHECK(cygan_norm(HPoint::boundary2(3.0, 0.0)) == doctest::Approx(3.0));
  CHECK(cygan_norm(HPoint::boundary2(0.0, 16.0)) == doctest::Approx(4.0));
  CHECK_THROWS_AS(cygan_norm(HPoint::infinity(2)), ValidationError);
}

TEST_CASE("Heisenberg inversion") {
  Rng rng(24);
  const HPoint origin = HPoint::boundary2(0.0, 0.0);
  CHECK(h_inversion(origin).is_infinity());
  CHECK(same_point(h_inversion(HPoint::infinity(2)), origin, 0.0));
  for (int i = 0; i < 500; ++i) {
    const int n = 2 + i % 2;
    const HPoint p = random_boundary(rng, n);
    const HPoint ip = h_inversion(p);
    CHECK(same_point(h_inversion(ip), p, 1e-10 * (1 + cygan_norm(p) * cygan_norm(p))));
    CHECK(cygan_norm(ip) * cygan_norm(p) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(same_point(act(Isometry(inversion_matrix(n)), p), ip, 1e-10));
    // the inversion about q swaps q and infinity
    const HPoint q = random_boundary(rng, n);
    const Isometry iq(inversion_matrix(q));
    CHECK(act(iq, q).is_infinity());
    CHECK(same_point(act(iq, HPoint::infinity(n)), q, 1e-10));
  }
  CHECK_THROWS_AS(h_inversion(HPoint::finite(CVec::Zero(1), 0, 1)), ValidationError);
}

namespace {

// Brute-force distance to b^{-1} V by simplex search over V's coordinates.
double distance_oracle(const HPoint& p, const SubgroupDescriptor& V, Rng& rng) {
  const auto e = V.orthonormal_basis();
  const std::size_t d = e.size() + (V.include_center ? 1 : 0);
  const HeisElement binv = h_inv(V.conjugator);
  auto f = [&](const std::vector<double>& c) {
    CVec xi = CVec::Zero(V.n - 1);
    for (std::size_t k = 0; k < e.size(); ++k) xi += c[k] * e[k];
    const double v = V.include_center ? c.back() : 0.0;
    const HeisElement q = h_mul(binv, {xi, v});
    return cygan_dist(p, HPoint::finite(q.xi, q.v, 0.0));
  };
  double best = f(std::vector<double>(d, 0.0));
  // random restarts of coordinate-wise golden searches
  for (int start = 0; start < 12; ++start) {
    std::vector<double> c(d);
    for (auto& x : c) x = uniform(rng, -4, 4);
    for (int sweep = 0; sweep < 40; ++sweep) {
      for (std::size_t k = 0; k < d; ++k) {
        double lo = c[k] - 8, hi = c[k] + 8;
        for (int it = 0; it < 80; ++it) {
          const double m1 = lo + (hi - lo) * 0.381966, m2 = lo + (hi - lo) * 0.618034;
          auto c1 = c, c2 = c;
          c1[k] = m1;
          c2[k] = m2;
          if (f(c1) < f(c2)) hi = m2;
          else lo = m1;
        }
        c[k] = 0.5 * (lo + hi);
      }
    }
    best = std::min(best, f(c));
  }
  return best;
}

}  // namespace

TEST_CASE("distance to a subgroup matches a brute-force minimisation") {
  Rng rng(25);
  SubgroupDescriptor center;
  center.n = 2;
  center.include_center = true;
  center.conjugator = HeisElement::identity(2);
  CHECK(heis_dist_to_subgroup(HPoint::boundary2(cplx(3, 4), 7.0), center) == doctest::Approx(5.0));

  for (int i = 0; i < 12; ++i) {
    const int n = 2 + i % 2;
    SubgroupDescriptor V;
    V.n = n;
    V.basis = {rvec(rng, n - 1, 1.0)};
    V.include_center = i % 3 == 0;
    V.conjugator = random_heis(rng, n, 0.5);
    const HPoint p = i % 2 ? random_boundary(rng, n) : random_interior(rng, n);
    const double d = heis_dist_to_subgroup(p, V);
    const double oracle = distance_oracle(p, V, rng);
    CHECK(d <= oracle + 1e-9);
    CHECK(d >= oracle - 1e-4 * (1.0 + oracle));
  }
}

TEST_CASE("subgroup descriptors") {
  SubgroupDescriptor V;
  V.n = 2;
  V.basis = {CVec::Constant(1, 1.0), CVec::Constant(1, cplx(0, 1))};
  V.conjugator = HeisElement::identity(2);
  CHECK_THROWS_AS(V.validate(), ValidationError);  // C is not isotropic
  V.include_center = true;
  CHECK_NOTHROW(V.validate());
  CHECK(V.dimension() == 3);
  CHECK(V.contains(elem(cplx(2, 3), -1.0)));
  V.basis = {CVec::Constant(1, 1.0)};
  V.include_center = false;
  CHECK(V.contains(elem(2.0, 0.0)));
  CHECK_FALSE(V.contains(elem(2.0, 0.5)));
  CHECK_FALSE(V.contains(elem(cplx(0, 1), 0.0)));
}

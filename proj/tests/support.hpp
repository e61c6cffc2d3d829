// Random generators and brute-force oracles shared by the tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/QR>

#include "chyp/cr_metrics.hpp"
#include "chyp/groups.hpp"

namespace chyp::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& r, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(r);
}

inline cplx ucplx(Rng& r, double s = 2.0) { return {uniform(r, -s, s), uniform(r, -s, s)}; }

inline CVec rvec(Rng& r, int m, double s = 2.0) {
  CVec v(m);
  for (int k = 0; k < m; ++k) v(k) = ucplx(r, s);
  return v;
}

// Haar-ish unitary from the QR of a Gaussian matrix.
inline CMat random_unitary(Rng& r, int m) {
  std::normal_distribution<double> g;
  CMat a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = {g(r), g(r)};
  Eigen::HouseholderQR<CMat> qr(a);
  CMat q = qr.householderQ();
  CMat rr = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < m; ++i) q.col(i) *= std::polar(1.0, std::arg(rr(i, i)));
  return q;
}

inline HeisElement random_heis(Rng& r, int n, double s = 2.0) { return {rvec(r, n - 1, s), uniform(r, -s, s)}; }

inline HeisIsometry random_heis_isometry(Rng& r, int n, double s = 2.0) {
  return HeisIsometry::make(random_unitary(r, n - 1), random_heis(r, n, s));
}

inline HPoint random_boundary(Rng& r, int n, double s = 2.0) {
  return HPoint::finite(rvec(r, n - 1, s), uniform(r, -s, s), 0.0);
}

inline HPoint random_interior(Rng& r, int n, double s = 2.0) {
  return HPoint::finite(rvec(r, n - 1, s), uniform(r, -s, s), uniform(r, 0.05, s));
}

// blockdiag(I, [[cosh t, sinh t], [sinh t, cosh t]]).
inline CMat loxodromic_block(int n, double t) {
  CMat m = CMat::Identity(n + 1, n + 1);
  m(n - 1, n - 1) = m(n, n) = std::cosh(t);
  m(n - 1, n) = m(n, n - 1) = std::sinh(t);
  return m;
}

// A J-unitary matrix mixing Heisenberg isometries, an inversion and a dilation.
inline CMat random_j_unitary(Rng& r, int n) {
  return embed(random_heis_isometry(r, n, 1.0)) * inversion_matrix(n) *
         loxodromic_block(n, uniform(r, -1.0, 1.0)) * embed(random_heis_isometry(r, n, 1.0));
}

inline double max_abs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

inline bool same_point(const HPoint& a, const HPoint& b, double tol) {
  if (a.is_infinity() || b.is_infinity()) return a.is_infinity() == b.is_infinity();
  return (a.xi() - b.xi()).cwiseAbs().maxCoeff() <= tol && std::abs(a.v() - b.v()) <= tol &&
         std::abs(a.u() - b.u()) <= tol;
}

// ---- mu-chain oracle: exhaustive enumeration of simple paths ----

inline bool admissible(const std::vector<HPoint>& s, std::size_t a, std::size_t b, std::size_t x,
                       std::size_t y, double mu, ChainRule rule) {
  const double cr = cross_ratio(s[a], s[x], s[y], s[b]);
  return rule == ChainRule::OneSided ? cr <= mu : (cr <= mu && cr >= 1.0 / mu);
}

// Length (in nodes) of the shortest admissible simple path from the anchor
// start to the anchor end, by trying every simple path. nullopt if none.
inline std::optional<std::size_t> brute_force_chain_nodes(const std::vector<HPoint>& s, std::size_t a,
                                                          std::size_t b, double mu, ChainRule rule) {
  std::vector<std::size_t> inner;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (i != a && i != b) inner.push_back(i);
  if (inner.empty()) return 0;
  // infinity is at infinite distance from every finite point
  auto dist = [](const HPoint& x, const HPoint& y) {
    if (x.is_infinity() || y.is_infinity()) return x.is_infinity() && y.is_infinity() ? 0.0 : HUGE_VAL;
    return cygan_dist(x, y);
  };
  auto nearest = [&](std::size_t anchor) {
    std::size_t best = inner.front();
    for (std::size_t i : inner)
      if (dist(s[i], s[anchor]) < dist(s[best], s[anchor])) best = i;
    return best;
  };
  const std::size_t start = nearest(a), end = nearest(b);
  std::optional<std::size_t> best;
  std::vector<std::size_t> path{start};
  std::vector<char> used(s.size(), 0);
  used[start] = 1;
  std::function<void()> dfs = [&] {
    const std::size_t x = path.back();
    if (x == end) {
      if (!best || path.size() < *best) best = path.size();
      return;
    }
    for (std::size_t y : inner) {
      if (used[y] || !admissible(s, a, b, x, y, mu, rule)) continue;
      used[y] = 1;
      path.push_back(y);
      dfs();
      path.pop_back();
      used[y] = 0;
    }
  };
  dfs();
  return best;
}

// Chain validity as defined for mu_chain.
inline bool valid_chain(const std::vector<HPoint>& s, const std::vector<std::size_t>& c, double mu,
                        ChainRule rule) {
  if (c.size() < 2) return false;
  const std::size_t a = c.front(), b = c.back();
  for (std::size_t k = 1; k + 2 < c.size(); ++k)
    if (!admissible(s, a, b, c[k], c[k + 1], mu, rule)) return false;
  return true;
}

}  // namespace chyp::testing

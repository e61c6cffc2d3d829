#include "chyp/cr_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>

#include "chyp/parallel.hpp"

namespace chyp {

namespace {

void check_boundary(const HPoint& p) {
  if (!p.is_infinity() && !p.is_boundary())
    throw ValidationError("cross_ratio: points must lie on the boundary (u = 0) or be infinity");
}

void check_distinct(const std::vector<HPoint>& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    check_boundary(s[i]);
    for (std::size_t j = 0; j < i; ++j) {
      const bool same = s[i].is_infinity() || s[j].is_infinity()
                            ? s[i].is_infinity() && s[j].is_infinity()
                            : cygan_dist(s[i], s[j]) == 0.0;
      if (same) throw ValidationError("point set contains coincident points");
    }
  }
}

}  // namespace

double cross_ratio(const HPoint& x1, const HPoint& x2, const HPoint& x3, const HPoint& x4) {
  for (const HPoint* p : {&x1, &x2, &x3, &x4}) check_boundary(*p);
  const int infinite = x1.is_infinity() + x2.is_infinity() + x3.is_infinity() + x4.is_infinity();
  if (infinite > 1) throw DegenerateQuad("cross_ratio: more than one point at infinity");

  double num = 1.0, den = 1.0;
  if (x4.is_infinity()) {
    num = cygan_dist(x1, x2);
    den = cygan_dist(x1, x3);
  } else if (x1.is_infinity()) {
    num = cygan_dist(x3, x4);
    den = cygan_dist(x2, x4);
  } else if (x2.is_infinity()) {
    num = cygan_dist(x3, x4);
    den = cygan_dist(x1, x3);
  } else if (x3.is_infinity()) {
    num = cygan_dist(x1, x2);
    den = cygan_dist(x2, x4);
  } else {
    num = cygan_dist(x1, x2) * cygan_dist(x3, x4);
    den = cygan_dist(x1, x3) * cygan_dist(x2, x4);
  }
  if (den == 0.0) throw DegenerateQuad("cross_ratio: coincident points in a denominator");
  return num / den;
}

double cross_ratio(const Quad& q) { return cross_ratio(q.x[0], q.x[1], q.x[2], q.x[3]); }

double eta_alpha(double t, double alpha) {
  if (!(alpha >= 1.0)) throw ValidationError("eta_alpha: alpha must be >= 1");
  if (!(t >= 0.0)) throw ValidationError("eta_alpha: t must be >= 0");
  return t >= 1.0 ? std::pow(t, alpha) : std::pow(t, 1.0 / alpha);
}

std::vector<double> default_alpha_grid() {
  std::vector<double> g;
  for (int k = 0; k <= 12; ++k) g.push_back(1.0 + 0.25 * k);
  return g;
}

CRAudit quasi_cr_audit(const std::vector<PointPair>& pairs, const CRAuditOptions& opt) {
  if (pairs.size() < 4) throw ValidationError("quasi_cr_audit: need at least 4 pairs");
  if (opt.alphas.empty()) throw ValidationError("quasi_cr_audit: empty alpha grid");
  for (double a : opt.alphas)
    if (!(a >= 1.0)) throw ValidationError("quasi_cr_audit: alpha must be >= 1");
  for (const auto& pr : pairs) {
    check_boundary(pr.x);
    check_boundary(pr.fx);
  }

  enum Status : char { Used, SourceDegenerate, ImageDegenerate, Unbounded };
  struct Sample {
    std::array<std::size_t, 4> idx{};
    double cr = 0.0, cr_image = 0.0;
    Status status = Used;
  };
  std::vector<Sample> samples(opt.quads);
  const std::size_t m = pairs.size();

  parallel_for(opt.quads, opt.threads, [&](std::size_t q) {
    auto eng = stream_engine(opt.seed, q);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    Sample& s = samples[q];
    for (int k = 0; k < 4; ++k) {
      std::size_t c;
      do c = pick(eng);
      while (std::find(s.idx.begin(), s.idx.begin() + k, c) != s.idx.begin() + k);
      s.idx[k] = c;
    }
    try {
      s.cr = cross_ratio(pairs[s.idx[0]].x, pairs[s.idx[1]].x, pairs[s.idx[2]].x, pairs[s.idx[3]].x);
    } catch (const DegenerateQuad&) {
      s.status = SourceDegenerate;
      return;
    }
    try {
      s.cr_image = cross_ratio(pairs[s.idx[0]].fx, pairs[s.idx[1]].fx, pairs[s.idx[2]].fx,
                               pairs[s.idx[3]].fx);
    } catch (const DegenerateQuad&) {
      s.status = ImageDegenerate;
      return;
    }
    if (s.cr == 0.0 && s.cr_image > 0.0) s.status = Unbounded;
  });

  CRAudit out;
  out.options = opt;
  out.quads_sampled = opt.quads;
  std::vector<std::size_t> used;
  for (std::size_t q = 0; q < samples.size(); ++q) {
    switch (samples[q].status) {
      case Used: used.push_back(q); break;
      case SourceDegenerate: ++out.degenerate_source; break;
      case ImageDegenerate: ++out.degenerate_image; break;
      case Unbounded: out.unbounded = true; break;
    }
  }
  out.quads_used = used.size();

  for (double alpha : opt.alphas) {
    AlphaFit fit;
    fit.alpha = alpha;
    std::vector<QuadRecord> recs;
    recs.reserve(used.size());
    for (std::size_t q : used) {
      const Sample& s = samples[q];
      // 0/0 (both quads collapse to a zero numerator) carries no information.
      const double e = eta_alpha(s.cr, alpha);
      const double ratio = e > 0.0 ? s.cr_image / e : 0.0;
      recs.push_back({q, s.idx, s.cr, s.cr_image, ratio});
    }
    const std::size_t keep = std::min(opt.worst, recs.size());
    std::partial_sort(recs.begin(), recs.begin() + static_cast<std::ptrdiff_t>(keep), recs.end(),
                      [](const QuadRecord& a, const QuadRecord& b) {
                        return a.ratio != b.ratio ? a.ratio > b.ratio : a.index < b.index;
                      });
    fit.m_hat = recs.empty() ? 0.0 : recs.front().ratio;
    fit.worst.assign(recs.begin(), recs.begin() + static_cast<std::ptrdiff_t>(keep));
    out.fits.push_back(std::move(fit));
  }
  return out;
}

const char* to_string(ChainRule r) { return r == ChainRule::OneSided ? "one-sided" : "two-sided"; }

namespace {

double rho(const HPoint& a, const HPoint& b) {
  if (a.is_infinity() || b.is_infinity())
    return a.is_infinity() && b.is_infinity() ? 0.0 : std::numeric_limits<double>::infinity();
  return cygan_dist(a, b);
}

std::optional<std::vector<std::size_t>> chain_unchecked(const std::vector<HPoint>& s,
                                                        std::size_t a, std::size_t b, double mu,
                                                        ChainRule rule) {
  std::vector<std::size_t> inner;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (i != a && i != b) inner.push_back(i);
  if (inner.empty()) return std::vector<std::size_t>{a, b};

  auto nearest = [&](std::size_t anchor) {
    std::size_t best = inner.front();
    double bd = rho(s[best], s[anchor]);
    for (std::size_t i : inner) {
      const double d = rho(s[i], s[anchor]);
      if (d < bd) {
        bd = d;
        best = i;
      }
    }
    return best;
  };
  const std::size_t start = nearest(a), end = nearest(b);
  auto admissible = [&](std::size_t x, std::size_t y) {
    const double cr = cross_ratio(s[a], s[x], s[y], s[b]);
    return rule == ChainRule::OneSided ? cr <= mu : (cr <= mu && cr >= 1.0 / mu);
  };

  // BFS in index order gives a deterministic shortest path.
  std::vector<std::ptrdiff_t> parent(s.size(), -1);
  std::vector<char> seen(s.size(), 0);
  std::deque<std::size_t> queue{start};
  seen[start] = 1;
  while (!queue.empty() && !seen[end]) {
    const std::size_t x = queue.front();
    queue.pop_front();
    for (std::size_t y : inner) {
      if (seen[y] || !admissible(x, y)) continue;
      seen[y] = 1;
      parent[y] = static_cast<std::ptrdiff_t>(x);
      queue.push_back(y);
    }
  }
  if (!seen[end]) return std::nullopt;
  std::vector<std::size_t> path{b};
  for (std::ptrdiff_t v = static_cast<std::ptrdiff_t>(end); v >= 0; v = parent[v])
    path.push_back(static_cast<std::size_t>(v));
  path.push_back(a);
  std::reverse(path.begin(), path.end());
  return path;
}

void check_mu(double mu) {
  if (!(mu > 1.0)) throw ValidationError("mu must be > 1");
}

}  // namespace

std::optional<std::vector<std::size_t>> mu_chain(const std::vector<HPoint>& sigma, std::size_t a,
                                                 std::size_t b, double mu, ChainRule rule) {
  check_mu(mu);
  if (a >= sigma.size() || b >= sigma.size()) throw ValidationError("mu_chain: index out of range");
  if (a == b) throw ValidationError("mu_chain: a and b must differ");
  check_distinct(sigma);
  return chain_unchecked(sigma, a, b, mu, rule);
}

MuDensityReport mu_density(const std::vector<HPoint>& sigma, double mu, ChainRule rule,
                           int threads) {
  check_mu(mu);
  if (sigma.size() < 2) throw ValidationError("mu_density: need at least 2 points");
  check_distinct(sigma);
  const std::size_t m = sigma.size();
  std::vector<char> ok(m * m, 1);
  parallel_for(m * m, threads, [&](std::size_t k) {
    const std::size_t a = k / m, b = k % m;
    if (a != b) ok[k] = chain_unchecked(sigma, a, b, mu, rule).has_value();
  });
  MuDensityReport rep;
  rep.pairs_checked = m * (m - 1);
  for (std::size_t k = 0; k < m * m; ++k)
    if (!ok[k]) rep.failing.emplace_back(k / m, k % m);
  rep.dense = rep.failing.empty();
  return rep;
}

}  // namespace chyp

#include "chyp/cusp.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "chyp/parallel.hpp"

namespace chyp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_cusp_point(const HPoint& p) {
  if (!p.is_boundary() && !p.is_infinity())
    throw ValidationError("cusp point must lie on the boundary or be infinity");
}

bool same_point(const HPoint& a, const HPoint& b) {
  if (a.is_infinity() || b.is_infinity()) return a.is_infinity() && b.is_infinity();
  return cygan_dist(a, b) <= 1e-12 * (1.0 + cygan_norm(a));
}

// Depth in the chart; the cusp point itself (chart image infinity) is infinitely deep.
double depth_in_chart(const Isometry& chart, const HPoint& x, const SubgroupDescriptor& V) {
  const HPoint y = act(chart, x);
  if (y.is_infinity()) return kInf;
  return heis_dist_to_subgroup(y, V);
}

}  // namespace

Isometry cusp_chart(const HPoint& p) {
  check_cusp_point(p);
  if (p.is_infinity()) return Isometry::identity(p.n());
  return Isometry(inversion_matrix(p));
}

double cusp_depth(const HPoint& p, const HPoint& x, const SubgroupDescriptor& V) {
  check_cusp_point(p);
  if (x.n() != p.n() || V.n != p.n()) throw ValidationError("cusp: dimension mismatch");
  if (same_point(p, x)) throw ValidationError("cusp: x coincides with the cusp point p");
  return depth_in_chart(cusp_chart(p), x, V);
}

bool cusp_contains(const HPoint& p, double r, const HPoint& x, const SubgroupDescriptor& V) {
  if (!(r > 0.0)) throw ValidationError("cusp: r must be positive");
  return cusp_depth(p, x, V) >= 1.0 / r;
}

bool cusp_surface_contains(const HPoint& p, double r, const HPoint& x,
                           const SubgroupDescriptor& V, double delta_eq) {
  if (!(r > 0.0)) throw ValidationError("cusp: r must be positive");
  return std::abs(cusp_depth(p, x, V) - 1.0 / r) <= delta_eq;
}

const char* to_string(ViolationKind k) {
  return k == ViolationKind::StabilizerLeaves ? "stabilizer_leaves" : "other_enters";
}

CuspAuditReport precise_invariance_audit(const GroupSpec& g, const HPoint& p, double r, int L,
                                         const SubgroupDescriptor& V,
                                         const CuspAuditOptions& opt) {
  check_cusp_point(p);
  if (!(r > 0.0)) throw ValidationError("cusp audit: r must be positive");
  if (p.n() != g.n) throw ValidationError("cusp audit: dimension mismatch");
  V.validate();

  CuspAuditReport rep;
  rep.p = p;
  rep.r = r;
  rep.radius = L;
  rep.V = V;
  rep.options = opt;
  rep.samples = opt.samples;

  const ElementTable table = enumerate_elements(g, L);
  rep.table_size = table.size();
  const Isometry chart = cusp_chart(p);
  const CVec lp = lift(p).z;
  std::vector<char> stab(table.size(), 0);
  for (std::size_t i = 0; i < table.size(); ++i) {
    stab[i] = same_projective_point(table.entries[i].element.matrix() * lp, lp, opt.fix_tol);
    rep.stabilizer_size += stab[i];
  }

  const int n = g.n;
  const double bound = 1.0 / r;
  const double h = 4.0 / r;
  const HeisElement binv = h_inv(V.conjugator);
  std::vector<std::vector<CuspViolation>> found(opt.samples);
  std::vector<std::size_t> counts(opt.samples, 0);

  parallel_for(opt.samples, opt.threads, [&](std::size_t s) {
    auto eng = stream_engine(opt.seed, s);
    std::uniform_real_distribution<double> coord(-h, h), vert(-h * h, h * h), height(0.0, h * h);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const bool on_boundary = unit(eng) < opt.boundary_fraction;
    // Rejection sampling of the chart image of U_{p,r}, near V.
    HPoint x;
    for (int attempt = 0;; ++attempt) {
      if (attempt == 10'000) throw NumericError("cusp audit: rejection sampling failed");
      CVec xi(n - 1);
      for (Eigen::Index k = 0; k < xi.size(); ++k) xi(k) = cplx{coord(eng), coord(eng)};
      const double v = vert(eng);
      const double u = on_boundary ? 0.0 : height(eng);
      const HPoint y = translate(binv, HPoint::finite(xi, v, u));
      if (heis_dist_to_subgroup(y, V) < bound) continue;
      x = act(chart, y);  // the chart is an involution
      if (same_point(x, p)) continue;
      break;
    }
    for (std::size_t i = 1; i < table.size(); ++i) {
      const double d = depth_in_chart(chart, act(table.entries[i].element, x), V);
      ViolationKind kind;
      if (stab[i] && d < bound - opt.depth_tol) {
        kind = ViolationKind::StabilizerLeaves;
      } else if (!stab[i] && d >= bound + opt.depth_tol) {
        kind = ViolationKind::OtherEnters;
      } else {
        continue;
      }
      ++counts[s];
      if (found[s].size() < opt.max_witnesses) found[s].push_back({s, i, table.entries[i].word, kind, x, d});
    }
  });

  rep.checks = opt.samples * (table.size() > 0 ? table.size() - 1 : 0);
  for (std::size_t s = 0; s < opt.samples; ++s) {
    rep.violation_count += counts[s];
    for (auto& v : found[s]) {
      if (rep.witnesses.size() >= opt.max_witnesses) break;
      rep.witnesses.push_back(std::move(v));
    }
  }
  return rep;
}

}  // namespace chyp

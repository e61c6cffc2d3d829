#include "chyp/subgroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "chyp/parallel.hpp"

namespace chyp {

namespace {

constexpr double kTol = 1e-10;
constexpr int kMaxOrder = 1000;

bool is_identity_rotation(const CMat& a) {
  return (a - CMat::Identity(a.rows(), a.cols())).cwiseAbs().maxCoeff() <= kTol;
}

HeisIsometry conjugate(const HeisElement& b, const HeisIsometry& g) {
  return compose(compose(HeisIsometry::translation(b), g), HeisIsometry::translation(h_inv(b)));
}

struct TranslationRule {
  SubgroupDescriptor V;
  HeisElement b;
};

// Rule (a) for pure translations.
TranslationRule translation_rule(int n, const std::vector<HeisElement>& gens) {
  TranslationRule r;
  r.V.n = n;
  r.b = HeisElement::identity(n);
  for (const auto& t : gens) r.V.basis.push_back(t.xi);
  const std::vector<CVec> e = r.V.orthonormal_basis();
  r.V.basis = e;

  bool isotropic = true;
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = i + 1; j < e.size(); ++j)
      isotropic &= std::abs(heis_pairing(e[i], e[j]).imag()) <= kTol;

  // Solve C phi = v for the vertical functional in W coordinates.
  const Eigen::Index m = static_cast<Eigen::Index>(gens.size());
  const Eigen::Index k = static_cast<Eigen::Index>(e.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m, k);
  Eigen::VectorXd v(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    v(i) = gens[i].v;
    for (Eigen::Index j = 0; j < k; ++j) c(i, j) = heis_pairing(gens[i].xi, e[j]).real();
  }
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(k);
  if (k > 0) phi = c.completeOrthogonalDecomposition().solve(v);
  const double resid = (k > 0 ? (c * phi - v) : Eigen::VectorXd(-v)).cwiseAbs().maxCoeff();
  const bool consistent = m == 0 || resid <= kTol * (1.0 + v.cwiseAbs().maxCoeff());

  r.V.include_center = !isotropic || !consistent;
  if (!r.V.include_center && k > 0 && phi.cwiseAbs().maxCoeff() > 0.0) {
    // Conjugation by (zeta, 0) adds 4 Im<<zeta, xi>> to the vertical part, and
    // Im<<i e_j, e_l>> = delta_jl on an isotropic orthonormal basis.
    CVec zeta = CVec::Zero(n - 1);
    for (Eigen::Index j = 0; j < k; ++j) zeta += (-phi(j) / 4.0) * cplx{0.0, 1.0} * e[j];
    r.b = {zeta, 0.0};
  }
  r.V.conjugator = r.b;
  return r;
}

}  // namespace

InvariantSubgroup minimal_invariant_subgroup(const GroupSpec& g) {
  g.validate();
  if (!g.all_heis())
    throw UnsupportedGroupClass("minimal_invariant_subgroup: generators must lie in H(n)");
  const int n = g.n;
  InvariantSubgroup out;

  const bool translations = std::all_of(g.generators.begin(), g.generators.end(),
                                        [](const Generator& x) { return is_identity_rotation(x.heis().A); });
  if (translations) {
    std::vector<HeisElement> taus;
    for (const auto& x : g.generators) taus.push_back(x.heis().tau);
    TranslationRule r = translation_rule(n, taus);
    out.group_class = 'a';
    out.V = r.V;
    for (const auto& x : g.generators) {
      out.conjugated_generators.push_back(conjugate(r.b, x.heis()));
      out.translation_generators.push_back(out.conjugated_generators.back());
    }
    return out;
  }

  if (g.generators.size() != 1)
    throw UnsupportedGroupClass(
        "minimal_invariant_subgroup: several generators with rotation parts are not supported");
  const HeisIsometry& gen = g.generators[0].heis();
  const CMat& a = gen.A;
  const Eigen::Index m = a.rows();

  int order = 0;
  CMat power = a;
  for (int j = 1; j <= kMaxOrder; ++j) {
    if ((power - CMat::Identity(m, m)).cwiseAbs().maxCoeff() <= 1e-9) {
      order = j;
      break;
    }
    power = power * a;
  }
  if (order == 0)
    throw UnsupportedGroupClass("minimal_invariant_subgroup: rotation part has infinite order");

  // Fix(A) = ker(A - I); solve (A - I) zeta = xi_perp with the minimum-norm solution.
  const CMat shifted = a - CMat::Identity(m, m);
  Eigen::JacobiSVD<CMat> svd(shifted, Eigen::ComputeFullU | Eigen::ComputeFullV);
  svd.setThreshold(1e-9);
  const Eigen::Index rank = svd.rank();
  const CMat fix = svd.matrixV().rightCols(m - rank);
  const CVec xi = gen.tau.xi;
  const CVec xi_fix = fix * (fix.adjoint() * xi);
  const CVec xi_perp = xi - xi_fix;
  const CVec zeta = svd.solve(xi_perp);
  const HeisElement b1{zeta, 0.0};
  const HeisIsometry g1 = conjugate(b1, gen);

  HeisIsometry gk = g1;
  for (int j = 1; j < order; ++j) gk = compose(gk, g1);
  gk.A = CMat::Identity(m, m);

  TranslationRule r = translation_rule(n, {gk.tau});
  const HeisElement b = h_mul(r.b, b1);
  out.group_class = 'b';
  out.V = r.V;
  out.V.conjugator = b;
  out.V.index = order;
  out.conjugated_generators.push_back(conjugate(b, gen));
  HeisIsometry ck = out.conjugated_generators[0];
  for (int j = 1; j < order; ++j) ck = compose(ck, out.conjugated_generators[0]);
  ck.A = CMat::Identity(m, m);
  out.translation_generators.push_back(ck);
  return out;
}

DensityReport density_check(const SubgroupDescriptor& V,
                            const std::vector<HeisIsometry>& translations, int L, double delta,
                            std::size_t samples, std::uint64_t seed, double half_width) {
  V.validate();
  DensityReport rep;
  rep.samples = samples;
  const int n = V.n;
  const std::vector<CVec> e = V.orthonormal_basis();
  const std::size_t dim = e.size() + (V.include_center ? 1 : 0);

  if (delta <= 0.0) {
    delta = 0.0;
    for (const auto& t : translations) delta += cygan_norm(HPoint::finite(t.tau.xi, t.tau.v, 0.0));
    if (delta == 0.0) delta = 1.0;
  }
  rep.delta = delta;
  rep.half_width = half_width > 0.0 ? half_width : 3.0 * delta;

  // Lattice points of the translation group inside V.
  std::vector<HPoint> lattice;
  const HPoint origin = HPoint::finite(CVec::Zero(n - 1), 0.0, 0.0);
  if (!translations.empty()) {
    const ElementTable table = enumerate_elements(GroupSpec::from_heis(translations), L);
    for (const auto& entry : table.entries) {
      const HPoint p = boundary_action(entry.element, origin);
      if (p.is_infinity()) continue;
      if (V.contains({p.xi(), p.v()}, 1e-8)) lattice.push_back(p);
    }
  } else {
    lattice.push_back(origin);
  }
  rep.lattice_points = lattice.size();
  if (dim == 0) {
    rep.passed = true;
    return rep;
  }

  std::vector<double> gaps(samples, 0.0);
  parallel_for(samples, 1, [&](std::size_t i) {
    auto eng = stream_engine(seed, i);
    std::uniform_real_distribution<double> uni(-rep.half_width, rep.half_width);
    CVec xi = CVec::Zero(n - 1);
    for (const CVec& ek : e) xi += uni(eng) * ek;
    const double v = V.include_center ? uni(eng) : 0.0;
    const HPoint x = HPoint::finite(xi, v, 0.0);
    double best = std::numeric_limits<double>::infinity();
    for (const HPoint& p : lattice) best = std::min(best, cygan_dist(x, p));
    gaps[i] = best;
  });
  rep.worst_gap = gaps.empty() ? 0.0 : *std::max_element(gaps.begin(), gaps.end());
  rep.passed = rep.worst_gap <= delta;
  return rep;
}

DensityReport cocompactness_check(const InvariantSubgroup& s, int L, double delta,
                                  std::size_t samples, std::uint64_t seed) {
  SubgroupDescriptor v = s.V;
  v.conjugator = HeisElement::identity(v.n);  // the lattice is already conjugated
  return density_check(v, s.translation_generators, L, delta, samples, seed);
}

double rotation_defect_on_subgroup(const InvariantSubgroup& s) {
  double worst = 0.0;
  const std::vector<CVec> e = s.V.orthonormal_basis();
  for (const auto& g : s.conjugated_generators)
    for (const CVec& w : e) worst = std::max(worst, (g.A * w - w).norm());
  return worst;
}

}  // namespace chyp

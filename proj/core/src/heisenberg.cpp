#include "chyp/heisenberg.hpp"

#include <cmath>

namespace chyp {

namespace {

void require_same_dim(const CVec& a, const CVec& b, const char* what) {
  if (a.size() != b.size()) throw ValidationError(std::string(what) + ": dimension mismatch");
}

double im_pairing(const CVec& a, const CVec& b) { return heis_pairing(a, b).imag(); }

}  // namespace

cplx heis_pairing(const CVec& a, const CVec& b) { return b.dot(a); }

HeisElement h_mul(const HeisElement& a, const HeisElement& b) {
  require_same_dim(a.xi, b.xi, "h_mul");
  return {a.xi + b.xi, a.v + b.v + 2.0 * im_pairing(a.xi, b.xi)};
}

HeisElement h_inv(const HeisElement& a) { return {-a.xi, -a.v}; }

HeisIsometry HeisIsometry::translation(HeisElement tau) {
  const auto m = tau.xi.size();
  return {CMat::Identity(m, m), std::move(tau)};
}

HeisIsometry HeisIsometry::rotation(CMat a) {
  const auto m = a.rows();
  return make(std::move(a), HeisElement::identity(static_cast<int>(m) + 1));
}

HeisIsometry HeisIsometry::make(CMat a, HeisElement tau) {
  if (a.rows() != a.cols() || a.rows() != tau.xi.size())
    throw ValidationError("HeisIsometry: A must be (n-1)x(n-1) matching xi");
  const double err = (a.adjoint() * a - CMat::Identity(a.rows(), a.cols())).cwiseAbs().maxCoeff();
  if (err > 1e-10) throw NumericError("HeisIsometry: rotation part is not unitary");
  return {std::move(a), std::move(tau)};
}

HeisIsometry compose(const HeisIsometry& g, const HeisIsometry& h) {
  require_same_dim(g.tau.xi, h.tau.xi, "compose");
  // T_a A T_b B = T_a T_{Ab} A B.
  const HeisElement rotated{g.A * h.tau.xi, h.tau.v};
  return {g.A * h.A, h_mul(g.tau, rotated)};
}

HeisIsometry inverse(const HeisIsometry& g) {
  const CMat ai = g.A.adjoint();
  const HeisElement ti = h_inv(g.tau);
  return {ai, {ai * ti.xi, ti.v}};
}

double cygan_norm(const HPoint& p) {
  if (p.is_infinity()) throw ValidationError("cygan_norm: infinity has no Cygan norm");
  return std::sqrt(std::abs(p.w()));
}

double cygan_dist(const HPoint& p, const HPoint& q) {
  if (p.is_infinity() || q.is_infinity())
    throw ValidationError("cygan_dist: infinity is not at finite Cygan distance");
  require_same_dim(p.xi(), q.xi(), "cygan_dist");
  const double horiz = (p.xi() - q.xi()).squaredNorm() + std::abs(p.u() - q.u());
  const double vert = p.v() - q.v() - 2.0 * im_pairing(q.xi(), p.xi());
  return std::sqrt(std::hypot(horiz, vert));
}

HPoint translate(const HeisElement& a, const HPoint& p) {
  if (p.is_infinity()) return p;
  require_same_dim(a.xi, p.xi(), "translate");
  return HPoint::finite(a.xi + p.xi(), a.v + p.v() + 2.0 * im_pairing(a.xi, p.xi()), p.u());
}

HPoint apply_heis_isometry(const HeisIsometry& g, const HPoint& p) {
  if (p.is_infinity()) return p;
  require_same_dim(g.tau.xi, p.xi(), "apply_heis_isometry");
  return translate(g.tau, HPoint::finite(g.A * p.xi(), p.v(), p.u()));
}

HPoint h_inversion(const HPoint& p) {
  if (p.is_infinity()) return HPoint::finite(CVec::Zero(p.n() - 1), 0.0, 0.0);
  if (p.u() != 0.0) throw ValidationError("h_inversion: defined on boundary points only");
  const double x2 = p.xi().squaredNorm();
  const double v = p.v();
  if (x2 == 0.0 && v == 0.0) return HPoint::infinity(p.n());
  const cplx w{x2, -v};
  return HPoint::finite(p.xi() / w, -v / (v * v + x2 * x2), 0.0);
}

CMat inversion_matrix(int n) {
  CMat m = CMat::Identity(n + 1, n + 1);
  m(n - 1, n - 1) = -1.0;
  return m;
}

CMat inversion_matrix(const HPoint& p) {
  if (p.is_infinity() || p.u() != 0.0)
    throw ValidationError("inversion_matrix: centre must be a finite boundary point");
  const HeisElement t{p.xi(), p.v()};
  return embed(t) * inversion_matrix(p.n()) * embed(h_inv(t));
}

CMat embed(const HeisElement& tau) {
  const int n = tau.n();
  const CVec& xi = tau.xi;
  const cplx h = cplx{xi.squaredNorm(), -tau.v} / 2.0;
  CMat m = CMat::Identity(n + 1, n + 1);
  m.block(0, n - 1, n - 1, 1) = xi;
  m.block(0, n, n - 1, 1) = xi;
  m.block(n - 1, 0, 1, n - 1) = -xi.adjoint();
  m.block(n, 0, 1, n - 1) = xi.adjoint();
  m(n - 1, n - 1) = 1.0 - h;
  m(n - 1, n) = -h;
  m(n, n - 1) = h;
  m(n, n) = 1.0 + h;
  return m;
}

CMat embed_rotation(const CMat& a) {
  const auto k = a.rows();
  CMat m = CMat::Identity(k + 2, k + 2);
  m.topLeftCorner(k, k) = a;
  return m;
}

CMat embed(const HeisIsometry& g) {
  const double err =
      (g.A.adjoint() * g.A - CMat::Identity(g.A.rows(), g.A.cols())).cwiseAbs().maxCoeff();
  if (g.A.rows() != g.tau.xi.size() || err > 1e-10)
    throw ValidationError("embed: rotation part is not a unitary matrix of size n-1");
  return embed(g.tau) * embed_rotation(g.A);
}

// ---- subgroups ------------------------------------------------------------

namespace {

constexpr double kSpanTol = 1e-12;

}  // namespace

std::vector<CVec> SubgroupDescriptor::orthonormal_basis() const {
  std::vector<CVec> out;
  for (const CVec& b : basis) {
    CVec v = b;
    for (int pass = 0; pass < 2; ++pass)
      for (const CVec& e : out) v -= heis_pairing(v, e).real() * e;
    const double nv = v.norm();
    if (nv > kSpanTol * std::max(1.0, b.norm())) out.push_back(v / nv);
  }
  return out;
}

int SubgroupDescriptor::dimension() const {
  return static_cast<int>(orthonormal_basis().size()) + (include_center ? 1 : 0);
}

void SubgroupDescriptor::validate() const {
  if (n < 2) throw ValidationError("SubgroupDescriptor: n must be >= 2");
  for (const CVec& b : basis)
    if (b.size() != n - 1) throw ValidationError("SubgroupDescriptor: basis vector has wrong size");
  if (conjugator.xi.size() != n - 1)
    throw ValidationError("SubgroupDescriptor: conjugator has wrong size");
  if (index < 1) throw ValidationError("SubgroupDescriptor: index must be >= 1");
  if (!include_center) {
    const auto e = orthonormal_basis();
    for (std::size_t i = 0; i < e.size(); ++i)
      for (std::size_t j = i + 1; j < e.size(); ++j)
        if (std::abs(im_pairing(e[i], e[j])) > 1e-10)
          throw ValidationError(
              "SubgroupDescriptor: W is not isotropic, so W x {0} is not a subgroup");
  }
}

bool SubgroupDescriptor::contains(const HeisElement& h, double tol) const {
  CVec perp = h.xi;
  for (const CVec& e : orthonormal_basis()) perp -= heis_pairing(perp, e).real() * e;
  if (perp.norm() > tol) return false;
  return include_center || std::abs(h.v) <= tol;
}

namespace {

// Unique real root of s^3 + p s + q = 0 for p >= 0.
double monotone_cubic_root(double p, double q) {
  if (p == 0.0) return std::cbrt(-q);
  const double disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
  double s = std::cbrt(-q / 2.0 + disc) + std::cbrt(-q / 2.0 - disc);
  for (int i = 0; i < 3; ++i) {
    const double f = s * s * s + p * s + q;
    const double df = 3.0 * s * s + p;
    s -= f / df;
  }
  return s;
}

}  // namespace

double heis_dist_to_subgroup(const HPoint& p, const SubgroupDescriptor& V) {
  if (p.is_infinity()) throw ValidationError("heis_dist_to_subgroup: infinity rejected");
  V.validate();
  if (p.n() != V.n) throw ValidationError("heis_dist_to_subgroup: dimension mismatch");

  const HPoint x = translate(V.conjugator, p);
  const auto basis = V.orthonormal_basis();
  CVec par = CVec::Zero(x.xi().size());
  for (const CVec& e : basis) par += heis_pairing(x.xi(), e).real() * e;
  const CVec perp = x.xi() - par;
  const double a0 = perp.squaredNorm() + x.u();

  if (V.include_center) return std::sqrt(a0);

  // q = (par + y, 0), y in W: |xi - q|^2 = |perp|^2 + |y|^2 and the vertical
  // term is c0 - 2 <y, a> with a_k = Im<<e_k, perp>>.
  const double c0 = x.v() - 2.0 * im_pairing(par, perp);
  double a2 = 0.0;
  for (const CVec& e : basis) {
    const double ak = im_pairing(e, perp);
    a2 += ak * ak;
  }
  const double alen = std::sqrt(a2);
  const double s = alen > 0.0 ? monotone_cubic_root(a0 + 2.0 * a2, -alen * c0) : 0.0;
  const double horiz = a0 + s * s;
  const double vert = c0 - 2.0 * alen * s;
  return std::sqrt(std::hypot(horiz, vert));
}

}  // namespace chyp

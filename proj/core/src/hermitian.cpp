#include "chyp/hermitian.hpp"

#include <cmath>
#include <ostream>

namespace chyp {

HPoint HPoint::finite(CVec xi, double v, double u) {
  if (xi.size() < 1) throw ValidationError("HPoint: xi must have n-1 >= 1 entries");
  if (!std::isfinite(v) || !std::isfinite(u) || !xi.allFinite())
    throw ValidationError("HPoint: non-finite coordinate");
  if (u < 0.0) throw ValidationError("HPoint: horospherical height u must be >= 0");
  HPoint p;
  p.n_ = static_cast<int>(xi.size()) + 1;
  p.infinite_ = false;
  p.xi_ = std::move(xi);
  p.v_ = v;
  p.u_ = u;
  return p;
}

HPoint HPoint::infinity(int n) {
  if (n < 2) throw ValidationError("HPoint: dimension n must be >= 2");
  HPoint p;
  p.n_ = n;
  p.infinite_ = true;
  p.xi_ = CVec::Zero(n - 1);
  return p;
}

cplx HPoint::w() const { return {xi_.squaredNorm() + u_, -v_}; }

std::ostream& operator<<(std::ostream& os, const HPoint& p) {
  if (p.is_infinity()) return os << "inf";
  os << "(";
  for (Eigen::Index i = 0; i < p.xi().size(); ++i) os << p.xi()(i) << ", ";
  return os << p.v() << ", " << p.u() << ")";
}

const char* to_string(Location loc) {
  switch (loc) {
    case Location::Interior: return "Interior";
    case Location::Boundary: return "Boundary";
    case Location::Exterior: return "Exterior";
  }
  return "?";
}

CMat form_matrix(int n) {
  CMat j = CMat::Identity(n + 1, n + 1);
  j(n, n) = -1.0;
  return j;
}

namespace {

cplx form_raw(const CVec& z, const CVec& w) {
  const Eigen::Index last = z.size() - 1;
  return w.head(last).dot(z.head(last)) - z(last) * std::conj(w(last));
}

}  // namespace

cplx hermitian_form(const LiftVector& z, const LiftVector& w) {
  if (z.z.size() != w.z.size() || z.z.size() < 2)
    throw ValidationError("hermitian_form: dimension mismatch");
  return form_raw(z.z, w.z);
}

LiftVector lift(const HPoint& p) {
  const int n = p.n();
  CVec z = CVec::Zero(n + 1);
  if (p.is_infinity()) {
    z(n - 1) = 1.0;
    z(n) = -1.0;
    return {z};
  }
  const cplx w = p.w();
  z.head(n - 1) = 2.0 * p.xi();
  z(n - 1) = 1.0 - w;
  z(n) = 1.0 + w;
  return {z};
}

Location point_location(const LiftVector& z, double tol) {
  const double nrm2 = z.z.squaredNorm();
  if (nrm2 == 0.0) throw ValidationError("point_location: zero vector");
  const double q = form_raw(z.z, z.z).real() / nrm2;
  if (q < -tol) return Location::Interior;
  if (q > tol) return Location::Exterior;
  return Location::Boundary;
}

HPoint unlift(const LiftVector& z, double tol) {
  const int n = z.n();
  if (n < 2) throw ValidationError("unlift: vector too short");
  const Location loc = point_location(z, tol);
  if (loc == Location::Exterior) throw NumericError("unlift: exterior vector has no point");
  const cplx s = z.z(n - 1) + z.z(n);
  if (std::abs(s) <= tol * z.z.norm()) return HPoint::infinity(n);

  const CVec zh = z.z * (2.0 / s);
  CVec xi = zh.head(n - 1) / 2.0;
  const cplx w = (zh(n) - zh(n - 1)) / 2.0;
  double u = 0.0;
  if (loc == Location::Interior) u = std::max(0.0, -form_raw(zh, zh).real() / 4.0);
  return HPoint::finite(std::move(xi), -w.imag(), u);
}

CVec normalize_negative(const CVec& p) {
  const double f = form_raw(p, p).real();
  if (!(f < 0.0)) throw ValidationError("expected a negative (interior) lift");
  return p / std::sqrt(-f);
}

namespace {

// Unit lifts of p and q with <q^, p^> real and <= -1.
std::pair<CVec, CVec> phased_pair(const CVec& p, const CVec& q) {
  CVec ph = normalize_negative(p);
  CVec qh = normalize_negative(q);
  const cplx c = form_raw(qh, ph);
  const double a = std::abs(c);
  if (a > 0.0) qh *= -std::conj(c) / a;
  return {std::move(ph), std::move(qh)};
}

}  // namespace

double bergman_distance_unit(const CVec& a, const CVec& b, double kappa) {
  const cplx c = form_raw(b, a);
  const double m = std::abs(c);
  const CVec d = (m > 0.0 ? (-std::conj(c) / m) * b : b) - a;
  const double dd = std::max(0.0, form_raw(d, d).real());
  return 2.0 * kappa * std::asinh(std::sqrt(dd) / 2.0);
}

double bergman_distance_lifts(const LiftVector& p, const LiftVector& q, double kappa) {
  if (p.z.size() != q.z.size()) throw ValidationError("bergman_distance: dimension mismatch");
  return bergman_distance_unit(normalize_negative(p.z), normalize_negative(q.z), kappa);
}

double bergman_distance(const HPoint& p, const HPoint& q, double kappa) {
  if (!p.is_interior() || !q.is_interior())
    throw ValidationError("bergman_distance: both points must be interior (u > 0)");
  if (p.n() != q.n()) throw ValidationError("bergman_distance: dimension mismatch");
  return bergman_distance_lifts(lift(p), lift(q), kappa);
}

LiftVector GeodesicFrame::at(double s) const {
  const double t = s / kappa;
  return {std::cosh(t) * base + std::sinh(t) * direction};
}

GeodesicFrame geodesic_frame(const LiftVector& p, const LiftVector& q, double kappa) {
  if (p.z.size() != q.z.size()) throw ValidationError("geodesic: dimension mismatch");
  auto [ph, qh] = phased_pair(p.z, q.z);
  const CVec d = qh - ph;
  const double dd = form_raw(d, d).real();
  // X = q^ - c p^ with c = 1 + dd/2, written to avoid cancellation.
  CVec x = d - (dd / 2.0) * ph;
  const double xx = form_raw(x, x).real();
  if (!(xx > 0.0)) throw ValidationError("geodesic: endpoints coincide");
  return {std::move(ph), x / std::sqrt(xx), kappa};
}

HPoint geodesic_point(const HPoint& p, const HPoint& q, double s, double kappa) {
  if (!p.is_interior() || !q.is_interior())
    throw ValidationError("geodesic_point: endpoints must be interior");
  if (s < 0.0) throw ValidationError("geodesic_point: s must be >= 0");
  const GeodesicFrame f = geodesic_frame(lift(p), lift(q), kappa);
  return unlift(f.at(s));
}

bool is_J_unitary(const CMat& m, double tol) {
  if (m.rows() != m.cols() || m.rows() < 2) return false;
  const int n = static_cast<int>(m.rows()) - 1;
  const double det = std::abs(m.determinant());
  if (!(det > 0.0) || !std::isfinite(det)) return false;
  const CMat ms = m * std::pow(det, -1.0 / (n + 1));
  const CMat j = form_matrix(n);
  return (ms.adjoint() * j * ms - j).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace chyp

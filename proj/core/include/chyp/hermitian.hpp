#pragma once

#include <iosfwd>

#include "chyp/types.hpp"

namespace chyp {

/// A point of the closed Siegel domain in horospherical coordinates
/// (xi, v, u), xi in C^{n-1}, v real, u >= 0, or the point at infinity.
///
/// Boundary points have u == 0. Infinity is its own state and is never
/// encoded as large coordinates; it still remembers the ambient dimension n
/// so that it can be lifted.
class HPoint {
public:
  HPoint() = default;

  static HPoint finite(CVec xi, double v, double u = 0.0);
  static HPoint infinity(int n);
  // Boundary point of H_2 with a real or complex horizontal coordinate.
  static HPoint boundary2(cplx xi, double v) {
    CVec x(1);
    x(0) = xi;
    return finite(std::move(x), v, 0.0);
  }

  int n() const { return n_; }
  bool is_infinity() const { return infinite_; }
  bool is_boundary() const { return infinite_ || u_ == 0.0; }
  bool is_interior() const { return !infinite_ && u_ > 0.0; }

  const CVec& xi() const { return xi_; }
  double v() const { return v_; }
  double u() const { return u_; }

  // w = |xi|^2 + u - i v, the quantity whose modulus is the squared Cygan norm.
  cplx w() const;

  friend std::ostream& operator<<(std::ostream& os, const HPoint& p);

private:
  int n_ = 2;
  bool infinite_ = false;
  CVec xi_ = CVec::Zero(1);
  double v_ = 0.0;
  double u_ = 0.0;
};

/// Homogeneous coordinates of a point of projective space C^{n+1}; z and
/// lambda*z describe the same point.
struct LiftVector {
  CVec z;

  int n() const { return static_cast<int>(z.size()) - 1; }
};

enum class Location { Interior, Boundary, Exterior };

const char* to_string(Location loc);

/// J = diag(1, ..., 1, -1) with n plus entries.
CMat form_matrix(int n);

/// <z, w> = sum_{i<=n} z_i conj(w_i) - z_{n+1} conj(w_{n+1}).
cplx hermitian_form(const LiftVector& z, const LiftVector& w);

/// Finite points map to (2 xi, 1 - w, 1 + w); infinity maps to (0,...,0,1,-1).
/// <lift(p), lift(p)> = -4u.
LiftVector lift(const HPoint& p);

/// Inverse of lift up to scale. Vectors with |z_n + z_{n+1}| <= tol*|z| are
/// infinity; boundary vectors (per point_location) come back with u == 0.
/// Throws NumericError for exterior vectors.
HPoint unlift(const LiftVector& z, double tol = kDefaultLocationTol);

Location point_location(const LiftVector& z, double tol = kDefaultLocationTol);

/// Bergman distance d = kappa * arccosh(sqrt(<P,Q><Q,P> / (<P,P><Q,Q>))).
/// Both points must be interior.
double bergman_distance(const HPoint& p, const HPoint& q, double kappa = kDefaultKappa);

/// Same distance evaluated on negative lifts. Uses the cancellation-free form
/// d = 2 kappa asinh(sqrt(<D,D>)/2), D = Q^ - P^ for unit lifts phased so that
/// <Q^,P^> is real negative.
double bergman_distance_lifts(const LiftVector& p, const LiftVector& q,
                              double kappa = kDefaultKappa);

/// Distance between unit negative lifts (<a,a> = <b,b> = -1).
double bergman_distance_unit(const CVec& a, const CVec& b, double kappa = kDefaultKappa);

/// Point at Bergman arclength s >= 0 from p on the geodesic through q.
HPoint geodesic_point(const HPoint& p, const HPoint& q, double s, double kappa = kDefaultKappa);

/// Unit-speed geodesic in lift form: gamma(s) = cosh(s/kappa) P^ + sinh(s/kappa) X^,
/// with <P^,P^> = -1, <X^,X^> = 1, <X^,P^> = 0.
struct GeodesicFrame {
  CVec base;       // P^
  CVec direction;  // X^
  double kappa = kDefaultKappa;

  LiftVector at(double s) const;
};

GeodesicFrame geodesic_frame(const LiftVector& p, const LiftVector& q, double kappa = kDefaultKappa);

/// Rescale p to <p,p> = -1. Throws if p is not negative.
CVec normalize_negative(const CVec& p);

/// True iff max|M* J M - J| <= tol after scaling M to |det M| = 1.
bool is_J_unitary(const CMat& m, double tol);

}  // namespace chyp

#pragma once

#include <vector>

#include "chyp/hermitian.hpp"

namespace chyp {

/// Element (xi, v) of the Heisenberg group H_n = C^{n-1} x R.
struct HeisElement {
  CVec xi = CVec::Zero(1);
  double v = 0.0;

  int n() const { return static_cast<int>(xi.size()) + 1; }
  static HeisElement identity(int n) { return {CVec::Zero(n - 1), 0.0}; }
};

/// <<a, b>> = sum_j a_j conj(b_j).
cplx heis_pairing(const CVec& a, const CVec& b);

/// (xi_a + xi_b, v_a + v_b + 2 Im<<xi_a, xi_b>>).
HeisElement h_mul(const HeisElement& a, const HeisElement& b);
HeisElement h_inv(const HeisElement& a);

/// Element (A, tau) of H(n) = H_n x| U(n-1), acting by p -> T_tau(A p).
struct HeisIsometry {
  CMat A = CMat::Identity(1, 1);
  HeisElement tau;

  int n() const { return tau.n(); }

  static HeisIsometry translation(HeisElement tau);
  static HeisIsometry rotation(CMat a);
  // Checks shapes and unitarity of A (max|A*A - I| <= 1e-10).
  static HeisIsometry make(CMat a, HeisElement tau);
};

HeisIsometry compose(const HeisIsometry& g, const HeisIsometry& h);  // g after h
HeisIsometry inverse(const HeisIsometry& g);

/// | |xi|^2 + u - i v |^{1/2}. Infinity is rejected.
double cygan_norm(const HPoint& p);

/// Left-invariant extension of the Cygan metric to the closed Siegel domain:
/// | |xi_p - xi_q|^2 + |u_p - u_q| - i(v_p - v_q - 2 Im<<xi_q, xi_p>>) |^{1/2}.
/// On the boundary this is ||q^{-1} p||_c.
double cygan_dist(const HPoint& p, const HPoint& q);

HPoint apply_heis_isometry(const HeisIsometry& g, const HPoint& p);
HPoint translate(const HeisElement& a, const HPoint& p);

/// Heisenberg inversion in the unit Cygan sphere about the origin, on the
/// boundary: (xi, v) -> (xi / (|xi|^2 - i v), -v / (v^2 + |xi|^4)), with
/// 0 <-> infinity. Interior points are rejected; use inversion_matrix().
HPoint h_inversion(const HPoint& p);

/// Matrix of the inversion about the origin: blockdiag(I_{n-1}, -1, 1).
CMat inversion_matrix(int n);

/// Matrix of the inversion I_p = T_p I T_p^{-1} in the unit Cygan sphere
/// centred at the boundary point p. Swaps p and infinity.
CMat inversion_matrix(const HPoint& p);

CMat embed(const HeisElement& tau);
CMat embed_rotation(const CMat& a);
/// embed(tau) * embed(A); J-unitary, and a homomorphism H(n) -> U(n,1).
CMat embed(const HeisIsometry& g);

/// A connected subgroup V of H_n of the supported shape: W (a real-linear
/// subspace of C^{n-1}, given by a spanning set) or W x center, together
/// with the conjugator b and the finite index k of the translation subgroup.
/// The set invariant under the original group is b^{-1} V.
struct SubgroupDescriptor {
  int n = 2;
  std::vector<CVec> basis;
  bool include_center = false;
  HeisElement conjugator;
  int index = 1;

  /// Orthonormal basis of W in the real inner product Re<<.,.>>.
  std::vector<CVec> orthonormal_basis() const;
  /// Real dimension of V.
  int dimension() const;
  /// Throws ValidationError if V is not a subgroup (W not isotropic without
  /// the center) or dimensions disagree.
  void validate() const;
  /// True iff the element lies in V (tolerance on coordinates).
  bool contains(const HeisElement& h, double tol = 1e-9) const;
};

/// inf over q in b^{-1} V of cygan_dist(p, q), in closed form: the horizontal
/// part is a projection onto W; the vertical part is minimised exactly when
/// the center is included, otherwise by the unique real root of a cubic.
double heis_dist_to_subgroup(const HPoint& p, const SubgroupDescriptor& V);

}  // namespace chyp

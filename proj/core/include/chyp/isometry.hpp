#pragma once

#include <vector>

#include "chyp/hermitian.hpp"

namespace chyp {

/// An element of PU(n,1), stored as a J-unitary (n+1)x(n+1) matrix in
/// canonical form: scaled to det = 1 by the principal root, then multiplied
/// by the phase that makes the first largest-modulus entry real positive.
/// Any two representatives of the same projective class share this form up
/// to rounding.
class Isometry {
public:
  Isometry() : Isometry(CMat::Identity(3, 3)) {}

  /// Canonicalises and checks J-unitarity with max|M*JM - J| <= tol * max(1, |M|^2).
  explicit Isometry(const CMat& m, double tol = 1e-8);

  static Isometry identity(int n) { return Isometry(CMat::Identity(n + 1, n + 1)); }
  /// Canonicalises without the J-unitarity check (products of checked elements).
  static Isometry unchecked(const CMat& m);

  const CMat& matrix() const { return m_; }
  int n() const { return static_cast<int>(m_.rows()) - 1; }

  Isometry operator*(const Isometry& other) const;
  Isometry inverse() const;

private:
  struct NoCheck {};
  Isometry(const CMat& m, NoCheck);
  CMat m_;
};

/// Canonical representative used by Isometry (exposed for table keys).
CMat canonical_form(const CMat& m);

enum class IsometryType { Identity, Elliptic, Parabolic, Loxodromic };

const char* to_string(IsometryType t);

struct ClassifyOptions {
  // Unimodularity test on eigenvalue cluster means: |mu| > 1 + tol is loxodromic.
  double tol = 1e-8;
  // Absolute floor for the eigenvalue clustering radius. The radius actually
  // used also scales with cbrt(eps)*|M|, the size of the spread a perturbed
  // 3x3 Jordan block (the largest in U(n,1)) shows in double precision.
  double cluster_radius = 1e-5;
  // Singular values of (M - mu I) below jordan_tol*|M| count as null.
  double jordan_tol = 1e-8;
};

struct EigenCluster {
  cplx mean;
  int multiplicity = 0;
  int geometric_multiplicity = 0;
  double spread = 0.0;
};

struct Classification {
  IsometryType type = IsometryType::Identity;
  // Parabolic only: the element rotates the contact plane at its fixed point
  // (ellipto-parabolic / screw-parabolic).
  bool has_nontrivial_rotation = false;
  std::vector<EigenCluster> clusters;
  double cluster_radius = 0.0;
};

Classification classify_detailed(const Isometry& g, const ClassifyOptions& opt = {});
IsometryType classify(const Isometry& g, const ClassifyOptions& opt = {});

struct FixedPoint {
  LiftVector z;
  Location location;
  cplx eigenvalue;
};

/// One representative eigenvector per eigenvalue cluster. When an eigenspace
/// has dimension > 1 the representative is the most negative direction of
/// the form restricted to it, so an interior fixed point is reported when the
/// eigenspace contains one. Throws ValidationError for the identity.
std::vector<FixedPoint> fixed_points(const Isometry& g, const ClassifyOptions& opt = {});

/// unlift(M lift(p)) for p on the boundary or infinity; the result is snapped
/// to the boundary.
HPoint boundary_action(const Isometry& g, const HPoint& p);

/// Action on any point of the closed domain (interior stays interior).
HPoint act(const Isometry& g, const HPoint& p);

/// Projective equality of two lift vectors: |a ^ b| <= tol |a||b|.
bool same_projective_point(const CVec& a, const CVec& b, double tol = 1e-9);

}  // namespace chyp

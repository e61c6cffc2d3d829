#include "chyp/isometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace chyp {

CMat canonical_form(const CMat& m) {
  const int dim = static_cast<int>(m.rows());
  const cplx det = m.determinant();
  if (std::abs(det) == 0.0 || !std::isfinite(std::abs(det)))
    throw NumericError("isometry: singular or non-finite matrix");
  CMat c = m / std::pow(det, 1.0 / dim);
  const double mx = c.cwiseAbs().maxCoeff();
  // First entry in row-major order within a relative 1e-6 of the maximum, so
  // rounding noise between near-equal entries does not flip the choice.
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const double a = std::abs(c(i, j));
      if (a >= mx * (1.0 - 1e-6)) {
        c *= std::conj(c(i, j)) / a;
        c(i, j) = a;
        return c;
      }
    }
  return c;
}

Isometry::Isometry(const CMat& m, double tol) {
  if (m.rows() != m.cols() || m.rows() < 3)
    throw ValidationError("isometry: expected a square matrix of size n+1 >= 3");
  m_ = canonical_form(m);
  const int n = static_cast<int>(m_.rows()) - 1;
  const CMat j = form_matrix(n);
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  const double err = (m_.adjoint() * j * m_ - j).cwiseAbs().maxCoeff();
  if (!(err <= tol * scale * scale)) throw NumericError("isometry: matrix is not J-unitary");
}

Isometry::Isometry(const CMat& m, NoCheck) : m_(canonical_form(m)) {}

Isometry Isometry::unchecked(const CMat& m) { return Isometry(m, NoCheck{}); }

Isometry Isometry::operator*(const Isometry& other) const {
  if (other.n() != n()) throw ValidationError("isometry: dimension mismatch");
  return unchecked(m_ * other.m_);
}

Isometry Isometry::inverse() const {
  // M^{-1} = J M* J for J-unitary M.
  const CMat j = form_matrix(n());
  return unchecked(j * m_.adjoint() * j);
}

const char* to_string(IsometryType t) {
  switch (t) {
    case IsometryType::Identity: return "Identity";
    case IsometryType::Elliptic: return "Elliptic";
    case IsometryType::Parabolic: return "Parabolic";
    case IsometryType::Loxodromic: return "Loxodromic";
  }
  return "?";
}

namespace {

struct Spectrum {
  Eigen::VectorXcd values;
  std::vector<std::vector<int>> members;
  Classification cls;
  double norm2 = 0.0;
};

std::vector<std::vector<int>> cluster_eigenvalues(const Eigen::VectorXcd& ev, double radius) {
  const int k = static_cast<int>(ev.size());
  std::vector<int> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (std::abs(ev(i) - ev(j)) <= radius) parent[find(i)] = find(j);
  std::vector<std::vector<int>> groups;
  std::vector<int> slot(k, -1);
  for (int i = 0; i < k; ++i) {
    const int r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[slot[r]].push_back(i);
  }
  return groups;
}

double null_threshold(const Spectrum& s, const EigenCluster& c, const ClassifyOptions& opt) {
  return std::max(opt.jordan_tol * s.norm2, 10.0 * c.spread);
}

Spectrum analyse(const CMat& m, const ClassifyOptions& opt) {
  Spectrum s;
  const int dim = static_cast<int>(m.rows());
  s.norm2 = Eigen::JacobiSVD<CMat>(m).singularValues()(0);

  const cplx lam = m.trace() / static_cast<double>(dim);
  const double off = (m - lam * CMat::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (off <= opt.tol * std::max(1.0, m.cwiseAbs().maxCoeff())) {
    s.cls.type = IsometryType::Identity;
    return s;
  }

  Eigen::ComplexEigenSolver<CMat> es(m, false);
  s.values = es.eigenvalues();
  const double eps = std::numeric_limits<double>::epsilon();
  s.cls.cluster_radius = std::max(opt.cluster_radius, 20.0 * std::cbrt(eps) * s.norm2);
  s.members = cluster_eigenvalues(s.values, s.cls.cluster_radius);

  for (const auto& grp : s.members) {
    EigenCluster c;
    c.multiplicity = static_cast<int>(grp.size());
    for (int i : grp) c.mean += s.values(i);
    c.mean /= static_cast<double>(grp.size());
    for (int i : grp) c.spread = std::max(c.spread, std::abs(s.values(i) - c.mean));
    s.cls.clusters.push_back(c);
  }
  for (auto& c : s.cls.clusters) {
    const CMat shifted = m - c.mean * CMat::Identity(dim, dim);
    const Eigen::VectorXd sv = Eigen::JacobiSVD<CMat>(shifted).singularValues();
    const double thr = null_threshold(s, c, opt);
    c.geometric_multiplicity = static_cast<int>((sv.array() <= thr).count());
  }

  bool loxodromic = false;
  for (const auto& c : s.cls.clusters) loxodromic |= std::abs(c.mean) > 1.0 + opt.tol;
  if (loxodromic) {
    s.cls.type = IsometryType::Loxodromic;
    return s;
  }
  int jordan = -1;
  for (std::size_t i = 0; i < s.cls.clusters.size(); ++i)
    if (s.cls.clusters[i].geometric_multiplicity < s.cls.clusters[i].multiplicity)
      jordan = static_cast<int>(i);
  if (jordan < 0) {
    s.cls.type = IsometryType::Elliptic;
    return s;
  }
  s.cls.type = IsometryType::Parabolic;
  s.cls.has_nontrivial_rotation = s.cls.clusters.size() > 1;
  return s;
}

}  // namespace

Classification classify_detailed(const Isometry& g, const ClassifyOptions& opt) {
  return analyse(g.matrix(), opt).cls;
}

IsometryType classify(const Isometry& g, const ClassifyOptions& opt) {
  return classify_detailed(g, opt).type;
}

std::vector<FixedPoint> fixed_points(const Isometry& g, const ClassifyOptions& opt) {
  const CMat& m = g.matrix();
  const Spectrum s = analyse(m, opt);
  if (s.cls.type == IsometryType::Identity)
    throw ValidationError("fixed_points: the identity fixes every point");
  const int dim = static_cast<int>(m.rows());
  const CMat j = form_matrix(dim - 1);

  std::vector<FixedPoint> out;
  for (const auto& c : s.cls.clusters) {
    const CMat shifted = m - c.mean * CMat::Identity(dim, dim);
    Eigen::JacobiSVD<CMat> svd(shifted, Eigen::ComputeFullV);
    const Eigen::VectorXd sv = svd.singularValues();
    const double thr = null_threshold(s, c, opt);
    int k = static_cast<int>((sv.array() <= thr).count());
    k = std::max(k, 1);
    const CMat basis = svd.matrixV().rightCols(k);
    const CMat gram = basis.adjoint() * j * basis;
    Eigen::SelfAdjointEigenSolver<CMat> ges(gram);
    CVec rep = basis * ges.eigenvectors().col(0);
    // Deterministic scale: unit length, largest entry real positive.
    Eigen::Index imax = 0;
    rep.cwiseAbs().maxCoeff(&imax);
    rep *= std::conj(rep(imax)) / std::abs(rep(imax)) / rep.norm();
    LiftVector z{rep};
    out.push_back({z, point_location(z, 1e-7), c.mean});
  }
  return out;
}

HPoint boundary_action(const Isometry& g, const HPoint& p) {
  if (!p.is_boundary()) throw ValidationError("boundary_action: point must be on the boundary");
  if (p.n() != g.n()) throw ValidationError("boundary_action: dimension mismatch");
  const HPoint q = unlift({g.matrix() * lift(p).z}, 1e-7);
  if (q.is_infinity() || q.u() == 0.0) return q;
  return HPoint::finite(q.xi(), q.v(), 0.0);
}

HPoint act(const Isometry& g, const HPoint& p) {
  if (p.is_boundary()) return boundary_action(g, p);
  if (p.n() != g.n()) throw ValidationError("act: dimension mismatch");
  return unlift({g.matrix() * lift(p).z});
}

bool same_projective_point(const CVec& a, const CVec& b, double tol) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return false;
  const CVec ah = a / na;
  const CVec bh = b / nb;
  const cplx c = ah.dot(bh);
  const cplx phase = std::abs(c) > 0.0 ? c / std::abs(c) : cplx{1.0};
  return (bh - phase * ah).norm() <= tol;
}

}  // namespace chyp

#pragma once

#include <cstdint>
#include <vector>

#include "chyp/groups.hpp"

namespace chyp {

/// Inversion in the unit Cygan sphere about p, sending p to infinity. The
/// identity when p is infinity.
Isometry cusp_chart(const HPoint& p);

/// Cygan distance from the chart image of x to V, i.e. the quantity compared
/// against 1/r. Infinity when the image is infinity. Throws ValidationError
/// for x = p.
double cusp_depth(const HPoint& p, const HPoint& x, const SubgroupDescriptor& V);

/// Membership in the standard cusp neighbourhood U_{p,r}: depth >= 1/r.
bool cusp_contains(const HPoint& p, double r, const HPoint& x, const SubgroupDescriptor& V);

/// Membership in the surface S_{p,r}: |depth - 1/r| <= delta_eq.
bool cusp_surface_contains(const HPoint& p, double r, const HPoint& x,
                           const SubgroupDescriptor& V, double delta_eq = 1e-7);

struct CuspAuditOptions {
  std::size_t samples = 10'000;
  std::uint64_t seed = 1;
  int threads = 1;
  double fix_tol = 1e-9;     // projective test for g p = p
  double depth_tol = 1e-9;   // slack on 1/r before a violation is recorded
  double boundary_fraction = 0.5;
  std::size_t max_witnesses = 1000;
};

enum class ViolationKind { StabilizerLeaves, OtherEnters };

const char* to_string(ViolationKind k);

struct CuspViolation {
  std::size_t sample = 0;
  std::size_t element = 0;  // table index
  Word word;
  ViolationKind kind = ViolationKind::StabilizerLeaves;
  HPoint x;
  double image_depth = 0.0;
};

struct CuspAuditReport {
  HPoint p;
  double r = 0.0;
  int radius = 0;
  SubgroupDescriptor V;
  std::size_t table_size = 0;
  std::size_t stabilizer_size = 0;  // including the identity
  std::size_t samples = 0;
  std::size_t checks = 0;
  std::size_t violation_count = 0;
  std::vector<CuspViolation> witnesses;  // first max_witnesses, in sample order
  CuspAuditOptions options;
};

/// Samples U_{p,r} (half on the boundary by default) and checks that the
/// stabiliser G_p of the L-table keeps every sample in U_{p,r} while every
/// other element moves it out.
CuspAuditReport precise_invariance_audit(const GroupSpec& g, const HPoint& p, double r, int L,
                                         const SubgroupDescriptor& V,
                                         const CuspAuditOptions& opt = {});

}  // namespace chyp

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chyp/groups.hpp"

namespace chyp {

/// Minimal invariant subgroup V of H_n for a group of Heisenberg isometries,
/// with the conjugated group that preserves it.
struct InvariantSubgroup {
  SubgroupDescriptor V;
  // 'a': all generators are translations; 'b': cyclic with a finite-order rotation part.
  char group_class = 'a';
  std::vector<HeisIsometry> conjugated_generators;  // b g b^{-1}
  std::vector<HeisIsometry> translation_generators; // generators of b Gamma* b^{-1}
};

/// Supported classes:
///  (a) all generators pure translations (xi_i, v_i): W = real span of the xi_i.
///      The center is needed iff W is not isotropic or no real-linear phi on W
///      has phi(xi_i) = v_i. Otherwise b is chosen so that b g_i b^{-1} = (xi_i, 0).
///  (b) one generator (A, tau) with A of finite order k: b moves the rotation
///      axis so that the translation part lies in Fix(A); Gamma* = <g^k> and
///      rule (a) is applied to it.
/// Anything else throws UnsupportedGroupClass.
InvariantSubgroup minimal_invariant_subgroup(const GroupSpec& g);

struct DensityReport {
  bool passed = false;
  double delta = 0.0;
  double worst_gap = 0.0;       // max over samples of the distance to the orbit in V
  std::size_t samples = 0;
  std::size_t lattice_points = 0;  // orbit points of the identity lying in V
  double half_width = 0.0;
};

/// delta-density of the orbit of the identity under the translation group
/// inside V: uniform samples from the coordinate box [-h, h]^dim V must lie
/// within Cygan distance delta of an orbit point in V.
/// delta <= 0 selects the sum of the Cygan norms of the generators, an upper
/// bound for the covering radius of a lattice they generate; h <= 0 selects
/// 3 delta. A V too large for the lattice leaves gaps growing with h.
DensityReport density_check(const SubgroupDescriptor& V,
                            const std::vector<HeisIsometry>& translations, int L, double delta,
                            std::size_t samples, std::uint64_t seed, double half_width = 0.0);

DensityReport cocompactness_check(const InvariantSubgroup& s, int L = 8, double delta = 0.0,
                                  std::size_t samples = 2000, std::uint64_t seed = 1);

/// max over conjugated generators and unit w in W of |(A - I) w|.
double rotation_defect_on_subgroup(const InvariantSubgroup& s);

}  // namespace chyp

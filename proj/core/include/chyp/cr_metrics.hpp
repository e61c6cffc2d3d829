#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "chyp/heisenberg.hpp"

namespace chyp {

/// Four boundary points (u = 0) or infinity.
struct Quad {
  std::array<HPoint, 4> x;
};

/// rho(x1,x2) rho(x3,x4) / (rho(x1,x3) rho(x2,x4)) with rho the Cygan
/// distance. A single infinite point is handled by cancelling the two factors
/// that contain it. Throws DegenerateQuad on a zero denominator or when more
/// than one point is infinite; a zero numerator gives 0.
double cross_ratio(const Quad& q);
double cross_ratio(const HPoint& x1, const HPoint& x2, const HPoint& x3, const HPoint& x4);

/// t^alpha for t >= 1, t^(1/alpha) for 0 <= t < 1.
double eta_alpha(double t, double alpha);

std::vector<double> default_alpha_grid();  // 1, 1.25, ..., 4

struct PointPair {
  HPoint x;
  HPoint fx;
};

struct CRAuditOptions {
  std::size_t quads = 100'000;
  std::vector<double> alphas = default_alpha_grid();
  std::uint64_t seed = 1;
  int threads = 1;
  std::size_t worst = 10;
};

struct QuadRecord {
  std::size_t index = 0;             // sample index
  std::array<std::size_t, 4> points{};  // indices into the pair list
  double cr = 0.0;
  double cr_image = 0.0;
  double ratio = 0.0;                // CR(f q) / eta_alpha(CR(q))
};

struct AlphaFit {
  double alpha = 1.0;
  double m_hat = 0.0;
  std::vector<QuadRecord> worst;  // descending ratio, ties by sample index
};

struct CRAudit {
  std::vector<AlphaFit> fits;
  std::size_t quads_sampled = 0;
  std::size_t quads_used = 0;
  std::size_t degenerate_source = 0;
  std::size_t degenerate_image = 0;
  // Some quad had CR(q) = 0 but CR(f q) > 0, so no finite M works.
  bool unbounded = false;
  CRAuditOptions options;
};

/// Fits M(alpha) = max CR(f q) / eta_alpha(CR(q)) over random 4-subsets.
CRAudit quasi_cr_audit(const std::vector<PointPair>& pairs, const CRAuditOptions& opt = {});

/// Which links are admissible in a mu-chain.
enum class ChainRule {
  OneSided,  // CR(a, x, y, b) <= mu
  TwoSided,  // 1/mu <= CR(a, x, y, b) <= mu
};

const char* to_string(ChainRule r);

/// Finite mu-chain from sigma[a] to sigma[b]. The interior candidates are the
/// other points. The chain starts at the candidate nearest a and ends at the
/// candidate nearest b (smallest index on ties), and every interior link
/// (x, y) must be admissible. Returns the indices a, x_1, ..., x_k, b of a
/// shortest such chain, or nullopt. With no candidates the chain is (a, b).
std::optional<std::vector<std::size_t>> mu_chain(const std::vector<HPoint>& sigma, std::size_t a,
                                                 std::size_t b, double mu,
                                                 ChainRule rule = ChainRule::OneSided);

struct MuDensityReport {
  bool dense = true;
  std::size_t pairs_checked = 0;
  std::vector<std::pair<std::size_t, std::size_t>> failing;  // ordered (a, b)
};

/// mu_chain for every ordered pair of distinct indices.
MuDensityReport mu_density(const std::vector<HPoint>& sigma, double mu,
                           ChainRule rule = ChainRule::OneSided, int threads = 1);

}  // namespace chyp

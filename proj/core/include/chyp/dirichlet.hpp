#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "chyp/groups.hpp"

namespace chyp {

struct DirichletOptions {
  double kappa = kDefaultKappa;
  double delta_eq = 1e-7;      // equidistance tolerance at a witness
  double delta_strict = 1e-9;  // required strict margin to every other element
  double t_max = 20.0;         // longest ray, in Bergman distance units
  int rays = 2000;
  std::uint64_t seed = 1;
  int threads = 1;
  bool check_stability = true;  // rerun with twice the rays
  // Per element, a simplex search over ray directions for one along which its
  // bisector is crossed first.
  bool targeted_search = true;
};

struct Margin {
  double value = 0.0;
  std::size_t element = 0;  // table index of the arg-min
};

/// min over non-identity g of d(x, g y) - d(x, y), with its arg-min. The
/// value is >= 0 exactly when x lies in the Dirichlet domain of the table.
/// Throws ValidationError if some table element fixes y.
Margin membership_margin(const HPoint& x, const HPoint& y, const ElementTable& t,
                         double kappa = kDefaultKappa);

struct Face {
  std::size_t element = 0;  // table index
  Word word;
  HPoint witness;
  double margin = 0.0;      // gap from the witness to the next nearest orbit point
  // Index of the first random ray hitting the face. Faces found only by the
  // targeted search have hits = 0 and first_ray = (stability ? 2 : 1) * rays + k
  // for the k-th non-identity table element.
  std::size_t first_ray = 0;
  std::size_t hits = 0;
};

/// Result of a radial face count. face_count() is a lower bound for the
/// number of sides of D_y of the truncated table.
struct SideReport {
  HPoint center;
  int radius = 0;
  std::size_t table_size = 0;
  std::vector<Face> faces;
  std::size_t rays_total = 0;  // random rays of the primary pass
  std::size_t rays_hit = 0;
  std::size_t rays_escaped = 0;
  std::size_t rays_ambiguous = 0;
  bool stability_checked = false;
  bool stable = false;
  std::size_t doubled_face_count = 0;
  bool t_max_too_small = false;
  DirichletOptions options;

  std::size_t face_count() const { return faces.size(); }
  double worst_margin() const;
};

SideReport dirichlet_sides(const ElementTable& t, const HPoint& y, const DirichletOptions& opt = {});
SideReport dirichlet_sides(const GroupSpec& g, const HPoint& y, int L,
                           const DirichletOptions& opt = {});

/// Recomputes every face margin against a (larger) table. A face stays valid
/// while its element is still the unique nearest orbit point at the witness;
/// invalid faces get a negative margin.
std::vector<double> revalidate_faces(const SideReport& r, const ElementTable& larger,
                                     double kappa = kDefaultKappa);

/// Coordinate ranges [re xi_1, im xi_1, ..., v, u] for the center search.
using Box = std::vector<std::pair<double, double>>;

struct CenterSearchOptions {
  int grid_points = 3;  // per coordinate, endpoints included
  int simplex_iterations = 60;
  // For a rotation of finite order, first try the point of its axis over the
  // middle of the box.
  bool axis_seed = true;
};

struct CenterSearchResult {
  HPoint center;
  SideReport report;
  bool success = false;  // stable face count of 2 found
  std::size_t evaluations = 0;
};

/// Axis seed, grid scan of the box, then downhill simplex on the face count with ties
/// broken by the worst face margin. Stops at the first center with a stable
/// count of 2. Requires a single parabolic generator.
CenterSearchResult two_sided_center_search(const GroupSpec& g, const Box& box, int L,
                                           const DirichletOptions& opt,
                                           const CenterSearchOptions& copt = {});

HPoint point_from_coordinates(const std::vector<double>& c, int n);
std::vector<double> coordinates_of(const HPoint& p);

}  // namespace chyp

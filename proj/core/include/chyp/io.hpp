#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "chyp/cr_metrics.hpp"
#include "chyp/cusp.hpp"
#include "chyp/dirichlet.hpp"
#include "chyp/subgroup.hpp"

namespace chyp {

// Group files are JSON:
//   {"n": 2,
//    "generators": [{"type": "heis", "A": [[1]], "xi": [[1, 0]], "v": 0},
//                   {"type": "matrix", "entries": [[...], ...]}],
//    "labels": ["a", "b"]}
// Complex numbers are [re, im] or a bare real. "A" defaults to the identity;
// matrix entries are nested rows or one flat row-major list. Errors name the
// offending field as a JSON pointer, or the line and column for syntax errors.
GroupSpec parse_group(const std::string& text);
GroupSpec load_group(const std::string& path);
std::string group_to_json(const GroupSpec& g);

/// Boundary points with optional images f(x). CSV columns
/// xi_re_1.., xi_im_1.., v and optionally f_xi_re_1.., f_xi_im_1.., f_v.
struct PointTable {
  int n = 2;
  std::vector<HPoint> points;
  std::vector<HPoint> images;  // empty when the file has no f_ columns

  std::vector<PointPair> pairs() const;
};

PointTable parse_points_csv(const std::string& text);
PointTable load_points_csv(const std::string& path);
void write_points_csv(std::ostream& os, const std::vector<HPoint>& pts,
                      const std::vector<HPoint>& images = {});

/// 17 significant digits.
std::string fmt(double x);

/// "# key=value" lines written ahead of the CSV header.
using Summary = std::vector<std::pair<std::string, std::string>>;

void write_summary(std::ostream& os, const Summary& s);

/// Column names for the coordinates of a point: prefix_xi_re_1.., prefix_xi_im_1..,
/// prefix_v, prefix_u, and the matching cells ("inf" for infinity).
std::vector<std::string> point_columns(const std::string& prefix, int n);
std::vector<std::string> point_cells(const HPoint& p);

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells);

void write_side_report_csv(std::ostream& os, const SideReport& r, const GroupSpec& g);
void write_orbit_csv(std::ostream& os, const ElementTable& t, const GroupSpec& g, const HPoint& y);
void write_limit_set_csv(std::ostream& os, const std::vector<LimitCluster>& c, int n);
void write_subgroup_csv(std::ostream& os, const InvariantSubgroup& s, const DensityReport& d);
void write_cusp_audit_csv(std::ostream& os, const CuspAuditReport& r, const GroupSpec& g);
void write_cr_audit_csv(std::ostream& os, const CRAudit& a);
void write_mu_density_csv(std::ostream& os, const MuDensityReport& r, double mu, ChainRule rule);

}  // namespace chyp

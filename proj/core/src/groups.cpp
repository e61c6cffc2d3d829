#include "chyp/groups.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace chyp {

CMat Generator::matrix() const {
  if (is_heis()) return embed(heis());
  return std::get<CMat>(element);
}

void GroupSpec::validate() const {
  if (n < 2) throw ValidationError("GroupSpec: n must be >= 2");
  if (generators.empty()) throw ValidationError("GroupSpec: at least one generator required");
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const Generator& g = generators[i];
    if (g.is_heis()) {
      if (g.heis().n() != n || g.heis().A.rows() != n - 1)
        throw ValidationError("GroupSpec: generator " + std::to_string(i) + " has wrong dimension");
    } else {
      const CMat& m = std::get<CMat>(g.element);
      if (m.rows() != n + 1 || m.cols() != n + 1)
        throw ValidationError("GroupSpec: generator " + std::to_string(i) + " has wrong dimension");
    }
  }
}

std::vector<Isometry> GroupSpec::isometries() const {
  validate();
  std::vector<Isometry> out;
  out.reserve(generators.size());
  for (const auto& g : generators) out.emplace_back(g.matrix());
  return out;
}

bool GroupSpec::all_heis() const {
  return std::all_of(generators.begin(), generators.end(),
                     [](const Generator& g) { return g.is_heis(); });
}

GroupSpec GroupSpec::from_heis(std::vector<HeisIsometry> gens, std::vector<std::string> labels) {
  GroupSpec spec;
  spec.n = gens.empty() ? 2 : gens.front().n();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::string label = i < labels.size() ? labels[i] : "g" + std::to_string(i + 1);
    spec.generators.push_back({std::move(gens[i]), std::move(label)});
  }
  spec.validate();
  return spec;
}

std::string word_to_string(const Word& w, const GroupSpec& g) {
  if (w.empty()) return "e";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    const int k = std::abs(w[i]) - 1;
    s += k < static_cast<int>(g.generators.size()) ? g.generators[k].label : "?";
    if (w[i] < 0) s += "^-1";
  }
  return s;
}

namespace {

using Key = std::vector<long long>;

Key grid_key(const CMat& m, double grid) {
  const double scale = grid * std::max(1.0, m.cwiseAbs().maxCoeff());
  Key k;
  k.reserve(2 * m.size());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      k.push_back(std::llround(m(i, j).real() / scale));
      k.push_back(std::llround(m(i, j).imag() / scale));
    }
  return k;
}

}  // namespace

ElementTable enumerate_elements(const GroupSpec& g, int L, const EnumerateOptions& opt) {
  if (L < 1) throw ValidationError("enumerate_elements: L must be >= 1");
  const std::vector<Isometry> gens = g.isometries();

  std::vector<std::pair<int, Isometry>> letters;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    letters.emplace_back(id, gens[i]);
    letters.emplace_back(-id, gens[i].inverse());
  }

  ElementTable t;
  t.n = g.n;
  t.radius = L;
  std::map<Key, std::size_t> seen;
  std::map<Key, std::size_t> coarse;

  auto insert = [&](Isometry e, Word w) {
    Key k = grid_key(e.matrix(), opt.grid);
    if (seen.count(k)) return;
    Key ck = grid_key(e.matrix(), opt.near_grid);
    if (coarse.count(ck)) ++t.near_duplicates;
    else coarse.emplace(std::move(ck), t.entries.size());
    seen.emplace(std::move(k), t.entries.size());
    t.entries.push_back({std::move(e), std::move(w)});
    if (t.entries.size() > opt.cap)
      throw ValidationError("enumerate_elements: table exceeds cap of " + std::to_string(opt.cap));
  };

  insert(Isometry::identity(g.n), {});
  std::size_t level_begin = 0, level_end = 1;
  for (int len = 1; len <= L; ++len) {
    for (std::size_t p = level_begin; p < level_end; ++p) {
      for (const auto& [id, m] : letters) {
        const Word& pw = t.entries[p].word;
        if (!pw.empty() && pw.back() == -id) continue;
        Word w = pw;
        w.push_back(id);
        insert(t.entries[p].element * m, std::move(w));
      }
    }
    level_begin = level_end;
    level_end = t.entries.size();
    if (level_begin == level_end) break;
  }
  return t;
}

std::vector<HPoint> orbit(const ElementTable& t, const HPoint& y) {
  if (!y.is_interior()) throw ValidationError("orbit: base point must be interior");
  if (y.n() != t.n) throw ValidationError("orbit: dimension mismatch");
  const CVec ly = lift(y).z;
  std::vector<HPoint> out;
  out.reserve(t.size());
  for (const auto& e : t.entries) out.push_back(unlift({e.element.matrix() * ly}));
  return out;
}

namespace {

// Ball-model coordinates z_{1..n} / z_{n+1}.
CVec ball_point(const CVec& z) {
  const Eigen::Index n = z.size() - 1;
  return z.head(n) / z(n);
}

}  // namespace

double chordal_distance(const HPoint& a, const HPoint& b) {
  if (!a.is_boundary() || !b.is_boundary())
    throw ValidationError("chordal_distance: boundary points expected");
  return (ball_point(lift(a).z) - ball_point(lift(b).z)).norm();
}

std::vector<LimitCluster> limit_set_sample(const GroupSpec& g, int L, const HPoint& y,
                                           const LimitSetOptions& opt) {
  if (!y.is_interior()) throw ValidationError("limit_set_sample: base point must be interior");
  const ElementTable t = enumerate_elements(g, L);
  const CVec ly = lift(y).z;
  const int n = g.n;

  struct Candidate {
    double depth;
    std::size_t index;
    CVec sphere;
  };
  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const CVec z = t.entries[i].element.matrix() * ly;
    const double ratio = -hermitian_form({z}, {z}).real() / z.squaredNorm();
    if (ratio >= opt.approach_ratio) continue;
    const CVec x = ball_point(z);
    if (x.norm() == 0.0) continue;
    cands.push_back({ratio, i, x / x.norm()});
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    return a.depth != b.depth ? a.depth < b.depth : a.index < b.index;
  });

  CVec inf_sphere = CVec::Zero(n);
  inf_sphere(n - 1) = -1.0;

  struct Group {
    CVec rep;
    std::size_t members;
  };
  std::vector<Group> groups;
  for (const auto& c : cands) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& gr) {
      return (gr.rep - c.sphere).norm() < opt.merge_radius;
    });
    if (it != groups.end()) ++it->members;
    else groups.push_back({c.sphere, 1});
  }

  std::vector<LimitCluster> out;
  std::size_t at_infinity = 0;
  double inf_dist = 0.0;
  for (const auto& gr : groups) {
    const double dinf = (gr.rep - inf_sphere).norm();
    if (dinf < opt.merge_radius) {
      if (at_infinity == 0) inf_dist = dinf;
      at_infinity += gr.members;
      continue;
    }
    CVec z(n + 1);
    z.head(n) = gr.rep;
    z(n) = 1.0;
    const HPoint p = unlift({z}, 1e-7);
    out.push_back({p.is_infinity() ? p : HPoint::finite(p.xi(), p.v(), 0.0), gr.members, dinf});
  }
  if (at_infinity > 0) out.insert(out.begin(), {HPoint::infinity(n), at_infinity, inf_dist});
  return out;
}

}  // namespace chyp

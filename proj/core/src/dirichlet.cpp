#include "chyp/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "chyp/parallel.hpp"
#include "chyp/subgroup.hpp"

namespace chyp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFixedTol = 1e-7;

cplx form(const CVec& z, const CVec& w) { return hermitian_form({z}, {w}); }

struct OrbitLifts {
  CVec y;
  std::vector<std::size_t> index;  // table indices of non-identity entries
  std::vector<CVec> images;        // unit lifts of g y
};

OrbitLifts orbit_lifts(const ElementTable& t, const HPoint& y, double kappa) {
  if (!y.is_interior()) throw ValidationError("Dirichlet center must be an interior point");
  if (y.n() != t.n) throw ValidationError("Dirichlet center has the wrong dimension");
  OrbitLifts o;
  o.y = normalize_negative(lift(y).z);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.entries[i].word.empty()) continue;
    CVec gy = normalize_negative(t.entries[i].element.matrix() * o.y);
    if (bergman_distance_unit(o.y, gy, kappa) <= kFixedTol)
      throw ValidationError("Dirichlet center is fixed by a table element");
    o.index.push_back(i);
    o.images.push_back(std::move(gy));
  }
  return o;
}

// Form-orthonormal basis of the tangent space y^perp at a unit negative y.
std::vector<CVec> tangent_basis(const CVec& y) {
  const Eigen::Index dim = y.size();
  std::vector<std::pair<double, CVec>> cands;
  for (Eigen::Index k = 0; k < dim; ++k) {
    CVec e = CVec::Zero(dim);
    e(k) = 1.0;
    cands.emplace_back(0.0, e + form(e, y) * y);
  }
  std::vector<CVec> basis;
  std::vector<bool> used(cands.size(), false);
  for (Eigen::Index step = 0; step + 1 < dim; ++step) {
    // Pick the candidate with the largest residual for conditioning.
    double best = -1.0;
    std::size_t arg = 0;
    CVec bestv;
    for (std::size_t c = 0; c < cands.size(); ++c) {
      if (used[c]) continue;
      CVec v = cands[c].second;
      for (int pass = 0; pass < 2; ++pass)
        for (const CVec& b : basis) v -= form(v, b) * b;
      const double nv = form(v, v).real();
      if (nv > best) {
        best = nv;
        arg = c;
        bestv = v;
      }
    }
    used[arg] = true;
    basis.push_back(bestv / std::sqrt(best));
  }
  return basis;
}

struct RayResult {
  enum Kind { Escaped, Face, Ambiguous } kind = Escaped;
  std::size_t element = 0;  // table index
  double s = 0.0;
  double margin = 0.0;
  CVec point;
};

CVec random_direction(const std::vector<CVec>& basis, std::size_t ray, std::uint64_t seed) {
  auto eng = stream_engine(seed, ray);
  std::normal_distribution<double> normal;
  CVec dir = CVec::Zero(basis.front().size());
  double nrm2 = 0.0;
  for (const CVec& b : basis) {
    const cplx c{normal(eng), normal(eng)};
    dir += c * b;
    nrm2 += std::norm(c);
  }
  return dir / std::sqrt(nrm2);
}

// Arc length at which the ray from y along dir meets the bisector of (y, g y).
// With unit lifts d(x, y) = d(x, g y) iff |<x, g y>| = |<x, y>|, and on
// x = cosh(s/k) y + sinh(s/k) X this reads |a + t b| = 1 with t = tanh(s/k).
// The left side starts above 1, so the first root is the crossing.
double crossing(const CVec& y, const CVec& dir, const CVec& gy, double kappa) {
  const cplx a = form(y, gy), b = form(dir, gy);
  const double c0 = std::norm(a) - 1.0;
  const double c1 = (a * std::conj(b)).real();
  const double c2 = std::norm(b);
  if (c1 >= 0.0) return kInf;
  const double disc = c1 * c1 - c2 * c0;
  if (disc < 0.0) return kInf;
  const double t = c0 / (-c1 + std::sqrt(disc));
  if (!(t < 1.0)) return kInf;
  return kappa * std::atanh(t);
}

struct FirstTwo {
  double first = kInf, second = kInf;
  std::size_t arg = 0;
};

FirstTwo first_crossings(const OrbitLifts& o, const CVec& dir, double kappa) {
  FirstTwo f;
  for (std::size_t k = 0; k < o.images.size(); ++k) {
    const double s = crossing(o.y, dir, o.images[k], kappa);
    if (s < f.first) {
      f.second = f.first;
      f.first = s;
      f.arg = k;
    } else if (s < f.second) {
      f.second = s;
    }
  }
  return f;
}

// The ray leaves D_y at its first bisector crossing. The witness there is a
// face point when exactly one orbit point is equidistant and every other one
// is strictly farther.
RayResult march_ray(const OrbitLifts& o, const CVec& dir, const DirichletOptions& opt) {
  RayResult r;
  const FirstTwo f = first_crossings(o, dir, opt.kappa);
  if (!(f.first <= opt.t_max)) return r;
  r.s = f.first;
  r.point = GeodesicFrame{o.y, dir, opt.kappa}.at(r.s).z;
  const double dy = bergman_distance_unit(r.point, o.y, opt.kappa);

  double best = kInf, second = kInf;
  std::size_t arg = 0, active = 0;
  for (std::size_t k = 0; k < o.images.size(); ++k) {
    const double fk = bergman_distance_unit(r.point, o.images[k], opt.kappa) - dy;
    if (std::abs(fk) < opt.delta_eq) ++active;
    if (fk < best) {
      second = best;
      best = fk;
      arg = k;
    } else if (fk < second) {
      second = fk;
    }
  }
  r.element = o.index[arg];
  r.margin = second;
  r.kind = (active == 1 && second >= opt.delta_strict) ? RayResult::Face : RayResult::Ambiguous;
  return r;
}

// Downhill simplex, minimising fn from x0 with initial step `step`.
template <class Fn>
std::vector<double> simplex_minimise(Fn&& fn, std::vector<double> x0, double step, int iterations) {
  const std::size_t d = x0.size();
  std::vector<std::pair<double, std::vector<double>>> pts;
  pts.emplace_back(fn(x0), x0);
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<double> x = x0;
    x[k] += step;
    pts.emplace_back(fn(x), std::move(x));
  }
  auto by_value = [](const auto& a, const auto& b) { return a.first < b.first; };
  for (int it = 0; it < iterations; ++it) {
    std::stable_sort(pts.begin(), pts.end(), by_value);
    if (pts.back().first - pts.front().first <= 1e-13 * (1.0 + std::abs(pts.front().first))) break;
    std::vector<double> c(d, 0.0);
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t j = 0; j < d; ++j) c[j] += pts[k].second[j] / static_cast<double>(d);
    auto along = [&](double t) {
      std::vector<double> x(d);
      for (std::size_t j = 0; j < d; ++j) x[j] = c[j] + t * (pts[d].second[j] - c[j]);
      return x;
    };
    auto xr = along(-1.0);
    const double fr = fn(xr);
    if (fr < pts[0].first) {
      auto xe = along(-2.0);
      const double fe = fn(xe);
      pts[d] = fe < fr ? std::make_pair(fe, std::move(xe)) : std::make_pair(fr, std::move(xr));
    } else if (fr < pts[d - 1].first) {
      pts[d] = {fr, std::move(xr)};
    } else {
      auto xc = along(0.5);
      const double fc = fn(xc);
      if (fc < pts[d].first) {
        pts[d] = {fc, std::move(xc)};
      } else {
        for (std::size_t k = 1; k <= d; ++k) {
          for (std::size_t j = 0; j < d; ++j)
            pts[k].second[j] = pts[0].second[j] + 0.5 * (pts[k].second[j] - pts[0].second[j]);
          pts[k].first = fn(pts[k].second);
        }
      }
    }
  }
  std::stable_sort(pts.begin(), pts.end(), by_value);
  return pts.front().second;
}

// Looks for a direction along which the bisector of element k is met first,
// maximising the lead of its crossing over all others.
RayResult targeted_ray(const OrbitLifts& o, const std::vector<CVec>& basis, std::size_t k,
                       const std::vector<CVec>& starts, const DirichletOptions& opt) {
  auto direction = [&](const std::vector<double>& c) {
    CVec dir = CVec::Zero(o.y.size());
    for (std::size_t j = 0; j < basis.size(); ++j) dir += cplx{c[2 * j], c[2 * j + 1]} * basis[j];
    const double nrm = std::sqrt(std::max(0.0, form(dir, dir).real()));
    return nrm > 0.0 ? CVec(dir / nrm) : CVec(basis.front());
  };
  auto loss = [&](const std::vector<double>& c) {
    const CVec dir = direction(c);
    const double own = crossing(o.y, dir, o.images[k], opt.kappa);
    if (!(own <= opt.t_max)) return 1e6;
    double other = kInf;
    for (std::size_t h = 0; h < o.images.size(); ++h)
      if (h != k) other = std::min(other, crossing(o.y, dir, o.images[h], opt.kappa));
    return -std::min(other - own, 1e3);
  };

  RayResult best;
  double best_loss = kInf;
  for (const CVec& s : starts) {
    std::vector<double> c;
    for (const CVec& b : basis) {
      const cplx beta = form(s, b);
      c.push_back(beta.real());
      c.push_back(beta.imag());
    }
    const auto x = simplex_minimise(loss, c, 0.25, 150 * static_cast<int>(c.size()));
    const double l = loss(x);
    if (l < best_loss) {
      best_loss = l;
      best = march_ray(o, direction(x), opt);
    }
  }
  if (best.kind == RayResult::Face && best.element != o.index[k]) best.kind = RayResult::Ambiguous;
  return best;
}

}  // namespace

Margin membership_margin(const HPoint& x, const HPoint& y, const ElementTable& t, double kappa) {
  if (!x.is_interior()) throw ValidationError("membership_margin: x must be interior");
  const OrbitLifts o = orbit_lifts(t, y, kappa);
  const CVec xl = normalize_negative(lift(x).z);
  const double dy = bergman_distance_unit(xl, o.y, kappa);
  Margin m{kInf, 0};
  for (std::size_t k = 0; k < o.images.size(); ++k) {
    const double f = bergman_distance_unit(xl, o.images[k], kappa) - dy;
    if (f < m.value) m = {f, o.index[k]};
  }
  return m;
}

double SideReport::worst_margin() const {
  double w = kInf;
  for (const auto& f : faces) w = std::min(w, f.margin);
  return faces.empty() ? 0.0 : w;
}

SideReport dirichlet_sides(const ElementTable& t, const HPoint& y, const DirichletOptions& opt) {
  if (opt.rays < 1) throw ValidationError("dirichlet_sides: rays must be >= 1");
  if (!(opt.t_max > 0.0)) throw ValidationError("dirichlet_sides: t_max must be positive");
  const OrbitLifts o = orbit_lifts(t, y, opt.kappa);
  const std::vector<CVec> basis = tangent_basis(o.y);

  const std::size_t primary = static_cast<std::size_t>(opt.rays);
  const std::size_t total = opt.check_stability ? 2 * primary : primary;
  std::vector<CVec> dirs(total);
  std::vector<RayResult> results(total);
  std::vector<FirstTwo> firsts(total);
  parallel_for(total, opt.threads, [&](std::size_t i) {
    dirs[i] = random_direction(basis, i, opt.seed);
    results[i] = march_ray(o, dirs[i], opt);
    firsts[i] = first_crossings(o, dirs[i], opt.kappa);
  });

  // Targeted search, started from the ray towards g y and from the primary
  // ray on which g comes closest to being met first.
  const std::size_t m = o.images.size();
  std::vector<RayResult> targeted(opt.targeted_search ? m : 0);
  parallel_for(targeted.size(), opt.threads, [&](std::size_t k) {
    double lead = -kInf;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < primary; ++i) {
      const double own = crossing(o.y, dirs[i], o.images[k], opt.kappa);
      const double other = firsts[i].arg == k ? firsts[i].second : firsts[i].first;
      const double l = std::isinf(own) ? -kInf : other - own;
      if (l > lead) {
        lead = l;
        arg = i;
      }
    }
    std::vector<CVec> starts{geodesic_frame({o.y}, {o.images[k]}, opt.kappa).direction};
    if (lead > -kInf) starts.push_back(dirs[arg]);
    targeted[k] = targeted_ray(o, basis, k, starts, opt);
  });

  SideReport rep;
  rep.center = y;
  rep.radius = t.radius;
  rep.table_size = t.size();
  rep.rays_total = primary;
  rep.options = opt;

  std::map<std::size_t, Face> faces;
  std::map<std::size_t, bool> doubled;
  auto add_face = [&](const RayResult& r, std::size_t label, bool hit) {
    auto it = faces.find(r.element);
    if (it == faces.end()) {
      Face f;
      f.element = r.element;
      f.word = t.entries[r.element].word;
      f.witness = unlift({r.point});
      f.margin = r.margin;
      f.first_ray = label;
      it = faces.emplace(r.element, std::move(f)).first;
    }
    if (hit) ++it->second.hits;
  };
  for (std::size_t i = 0; i < total; ++i) {
    const RayResult& r = results[i];
    const bool in_primary = i < primary;
    if (in_primary) {
      if (r.kind == RayResult::Escaped) ++rep.rays_escaped;
      else if (r.kind == RayResult::Ambiguous) ++rep.rays_ambiguous;
      else ++rep.rays_hit;
    }
    if (r.kind != RayResult::Face) continue;
    doubled[r.element] = true;
    if (in_primary) add_face(r, i, true);
  }
  for (std::size_t k = 0; k < targeted.size(); ++k) {
    if (targeted[k].kind != RayResult::Face) continue;
    doubled[targeted[k].element] = true;
    add_face(targeted[k], total + k, false);
  }
  for (auto& [k, f] : faces) rep.faces.push_back(std::move(f));
  rep.stability_checked = opt.check_stability;
  rep.doubled_face_count = doubled.size();
  rep.stable = opt.check_stability && doubled.size() == rep.faces.size();
  rep.t_max_too_small = rep.faces.empty() && rep.rays_escaped == 0;
  return rep;
}

SideReport dirichlet_sides(const GroupSpec& g, const HPoint& y, int L, const DirichletOptions& opt) {
  return dirichlet_sides(enumerate_elements(g, L), y, opt);
}

std::vector<double> revalidate_faces(const SideReport& r, const ElementTable& larger, double kappa) {
  const OrbitLifts o = orbit_lifts(larger, r.center, kappa);
  std::vector<double> out;
  for (const Face& f : r.faces) {
    const CVec x = normalize_negative(lift(f.witness).z);
    const double dy = bergman_distance_unit(x, o.y, kappa);
    // Shortest words are canonical, so the face element is found by its word.
    double own = kInf, other = kInf;
    for (std::size_t k = 0; k < o.images.size(); ++k) {
      const double fval = bergman_distance_unit(x, o.images[k], kappa) - dy;
      if (larger.entries[o.index[k]].word == f.word) own = fval;
      else other = std::min(other, fval);
    }
    out.push_back(std::abs(own) <= r.options.delta_eq ? other : -1.0);
  }
  return out;
}

HPoint point_from_coordinates(const std::vector<double>& c, int n) {
  if (static_cast<int>(c.size()) != 2 * (n - 1) + 2)
    throw ValidationError("expected 2(n-1)+2 coordinates (re/im of xi, v, u)");
  CVec xi(n - 1);
  for (int k = 0; k < n - 1; ++k) xi(k) = cplx{c[2 * k], c[2 * k + 1]};
  return HPoint::finite(std::move(xi), c[2 * (n - 1)], c[2 * (n - 1) + 1]);
}

std::vector<double> coordinates_of(const HPoint& p) {
  std::vector<double> c;
  for (Eigen::Index k = 0; k < p.xi().size(); ++k) {
    c.push_back(p.xi()(k).real());
    c.push_back(p.xi()(k).imag());
  }
  c.push_back(p.v());
  c.push_back(p.u());
  return c;
}

namespace {

struct Evaluation {
  double score = kInf;
  bool success = false;
  SideReport report;
};

}  // namespace

CenterSearchResult two_sided_center_search(const GroupSpec& g, const Box& box, int L,
                                           const DirichletOptions& opt,
                                           const CenterSearchOptions& copt) {
  g.validate();
  if (g.generators.size() != 1)
    throw ValidationError("center search: the group must be cyclic (one generator)");
  if (classify(Isometry(g.generators[0].matrix())) != IsometryType::Parabolic)
    throw ValidationError("center search: the generator must be parabolic");
  const std::size_t dims = static_cast<std::size_t>(2 * (g.n - 1) + 2);
  if (box.size() != dims) throw ValidationError("center search: box needs 2(n-1)+2 ranges");
  for (const auto& [lo, hi] : box)
    if (!(lo <= hi)) throw ValidationError("center search: empty coordinate range");
  if (!(box.back().first > 0.0)) throw ValidationError("center search: u range must be positive");
  if (copt.grid_points < 1) throw ValidationError("center search: grid_points must be >= 1");

  DirichletOptions o = opt;
  o.check_stability = true;
  const ElementTable table = enumerate_elements(g, L);

  CenterSearchResult res;
  auto evaluate = [&](const std::vector<double>& c) {
    Evaluation e;
    ++res.evaluations;
    try {
      e.report = dirichlet_sides(table, point_from_coordinates(c, g.n), o);
    } catch (const ValidationError&) {
      return e;
    }
    const double count = static_cast<double>(e.report.face_count());
    e.success = e.report.face_count() == 2 && e.report.stable;
    e.score = count + (e.report.stable ? 0.0 : 0.5) - 0.25 * std::tanh(e.report.worst_margin());
    return e;
  };

  auto clamp = [&](std::vector<double> c) {
    for (std::size_t d = 0; d < dims; ++d) c[d] = std::clamp(c[d], box[d].first, box[d].second);
    return c;
  };

  std::vector<double> best_c;
  Evaluation best;

  // A finite-order rotation part has an axis; centers on it are tried first.
  if (g.all_heis() && copt.axis_seed) {
    try {
      const InvariantSubgroup s = minimal_invariant_subgroup(g);
      if (s.group_class == 'b') {
        std::vector<double> mid(dims);
        for (std::size_t d = 0; d < dims; ++d) mid[d] = 0.5 * (box[d].first + box[d].second);
        const HPoint on_axis = translate(
            h_inv(s.V.conjugator), HPoint::finite(CVec::Zero(g.n - 1), mid[dims - 2], mid[dims - 1]));
        const std::vector<double> c = clamp(coordinates_of(on_axis));
        Evaluation e = evaluate(c);
        if (e.success) {
          res.center = point_from_coordinates(c, g.n);
          res.report = std::move(e.report);
          res.success = true;
          return res;
        }
        best = std::move(e);
        best_c = c;
      }
    } catch (const UnsupportedGroupClass&) {
    }
  }

  // Grid scan in lexicographic order.
  std::vector<int> idx(dims, 0);
  const int gp = copt.grid_points;
  while (true) {
    std::vector<double> c(dims);
    for (std::size_t d = 0; d < dims; ++d) {
      const auto [lo, hi] = box[d];
      c[d] = gp == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * idx[d] / (gp - 1);
    }
    Evaluation e = evaluate(c);
    if (e.success) {
      res.center = point_from_coordinates(c, g.n);
      res.report = std::move(e.report);
      res.success = true;
      return res;
    }
    if (e.score < best.score) {
      best = std::move(e);
      best_c = c;
    }
    std::size_t d = 0;
    while (d < dims && ++idx[d] == gp) idx[d++] = 0;
    if (d == dims) break;
  }

  // Downhill simplex over the non-degenerate coordinates.
  if (best_c.empty()) best_c = clamp(std::vector<double>(dims, 0.0));
  std::vector<std::size_t> free_dims;
  for (std::size_t d = 0; d < dims; ++d)
    if (box[d].second > box[d].first) free_dims.push_back(d);

  std::vector<std::pair<std::vector<double>, Evaluation>> simplex;
  simplex.emplace_back(best_c, best);
  for (std::size_t d : free_dims) {
    std::vector<double> c = best_c;
    const double step = (box[d].second - box[d].first) / (2.0 * std::max(gp, 2));
    c[d] = c[d] + step <= box[d].second ? c[d] + step : c[d] - step;
    Evaluation e = evaluate(c);
    if (e.success) {
      res.center = point_from_coordinates(c, g.n);
      res.report = std::move(e.report);
      res.success = true;
      return res;
    }
    simplex.emplace_back(c, std::move(e));
  }

  auto finish = [&](const std::vector<double>& c, Evaluation&& e) {
    res.center = point_from_coordinates(c, g.n);
    res.report = std::move(e.report);
    res.success = e.success;
    return res;
  };

  for (int it = 0; it < copt.simplex_iterations && simplex.size() > 1; ++it) {
    std::stable_sort(simplex.begin(), simplex.end(),
                     [](const auto& a, const auto& b) { return a.second.score < b.second.score; });
    const std::size_t last = simplex.size() - 1;
    std::vector<double> centroid(dims, 0.0);
    for (std::size_t k = 0; k < last; ++k)
      for (std::size_t d = 0; d < dims; ++d) centroid[d] += simplex[k].first[d] / last;
    auto along = [&](double t) {
      std::vector<double> c(dims);
      for (std::size_t d = 0; d < dims; ++d)
        c[d] = centroid[d] + t * (simplex[last].first[d] - centroid[d]);
      return clamp(c);
    };
    auto try_point = [&](const std::vector<double>& c, Evaluation& out) {
      out = evaluate(c);
      return out.success;
    };

    Evaluation er;
    const auto xr = along(-1.0);
    if (try_point(xr, er)) return finish(xr, std::move(er));
    if (er.score < simplex[0].second.score) {
      Evaluation ee;
      const auto xe = along(-2.0);
      if (try_point(xe, ee)) return finish(xe, std::move(ee));
      if (ee.score < er.score) simplex[last] = {xe, std::move(ee)};
      else simplex[last] = {xr, std::move(er)};
      continue;
    }
    if (er.score < simplex[last - 1].second.score) {
      simplex[last] = {xr, std::move(er)};
      continue;
    }
    Evaluation ec;
    const auto xc = along(0.5);
    if (try_point(xc, ec)) return finish(xc, std::move(ec));
    if (ec.score < simplex[last].second.score) {
      simplex[last] = {xc, std::move(ec)};
      continue;
    }
    for (std::size_t k = 1; k < simplex.size(); ++k) {
      std::vector<double> c(dims);
      for (std::size_t d = 0; d < dims; ++d)
        c[d] = simplex[0].first[d] + 0.5 * (simplex[k].first[d] - simplex[0].first[d]);
      Evaluation es;
      if (try_point(c, es)) return finish(c, std::move(es));
      simplex[k] = {c, std::move(es)};
    }
  }
  std::stable_sort(simplex.begin(), simplex.end(),
                   [](const auto& a, const auto& b) { return a.second.score < b.second.score; });
  return finish(simplex[0].first, std::move(simplex[0].second));
}

}  // namespace chyp

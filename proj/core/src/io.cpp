#include "chyp/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace chyp {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& ptr, const std::string& what) {
  throw ValidationError("group file field " + (ptr.empty() ? std::string("/") : ptr) + ": " + what);
}

double real_at(const json& j, const std::string& ptr) {
  if (!j.is_number()) field_error(ptr, "expected a number");
  return j.get<double>();
}

cplx complex_at(const json& j, const std::string& ptr) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2)
    return {real_at(j[0], ptr + "/0"), real_at(j[1], ptr + "/1")};
  field_error(ptr, "expected a complex number [re, im] or a real");
}

CVec vector_at(const json& j, const std::string& ptr, Eigen::Index len) {
  if (!j.is_array()) field_error(ptr, "expected an array");
  if (static_cast<Eigen::Index>(j.size()) != len)
    field_error(ptr, "expected " + std::to_string(len) + " entries, got " + std::to_string(j.size()));
  CVec v(len);
  for (Eigen::Index i = 0; i < len; ++i) v(i) = complex_at(j[i], ptr + "/" + std::to_string(i));
  return v;
}

CMat matrix_at(const json& j, const std::string& ptr, Eigen::Index dim) {
  if (!j.is_array()) field_error(ptr, "expected an array");
  CMat m(dim, dim);
  // dim*dim entries is a flat list, except [[z]] for dim 1 which is one row.
  const bool flat = static_cast<Eigen::Index>(j.size()) == dim * dim &&
                    !(dim == 1 && j[0].is_array() && j[0].size() == 1);
  if (flat) {
    for (Eigen::Index k = 0; k < dim * dim; ++k)
      m(k / dim, k % dim) = complex_at(j[k], ptr + "/" + std::to_string(k));
    return m;
  }
  if (static_cast<Eigen::Index>(j.size()) == dim) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      const CVec row = vector_at(j[r], ptr + "/" + std::to_string(r), dim);
      m.row(r) = row.transpose();
    }
    return m;
  }
  field_error(ptr, "expected " + std::to_string(dim) + " rows or " + std::to_string(dim * dim) +
                       " row-major entries");
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const CMat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

GroupSpec parse_group(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("group file: ") + e.what());
  }
  if (!doc.is_object()) field_error("", "expected an object");
  if (!doc.contains("n")) field_error("/n", "missing");
  if (!doc["n"].is_number_integer()) field_error("/n", "expected an integer");
  GroupSpec g;
  g.n = doc["n"].get<int>();
  if (g.n < 2) field_error("/n", "must be >= 2");
  if (!doc.contains("generators") || !doc["generators"].is_array())
    field_error("/generators", "expected an array");
  const json& gens = doc["generators"];
  if (gens.empty()) field_error("/generators", "at least one generator required");
  const json* labels = doc.contains("labels") ? &doc["labels"] : nullptr;
  if (labels && (!labels->is_array() || labels->size() != gens.size()))
    field_error("/labels", "expected one label per generator");

  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::string gp = "/generators/" + std::to_string(i);
    const json& x = gens[i];
    if (!x.is_object()) field_error(gp, "expected an object");
    if (!x.contains("type") || !x["type"].is_string()) field_error(gp + "/type", "missing");
    const std::string type = x["type"].get<std::string>();
    Generator gen;
    if (labels) {
      if (!(*labels)[i].is_string()) field_error("/labels/" + std::to_string(i), "expected a string");
      gen.label = (*labels)[i].get<std::string>();
    } else if (x.contains("label") && x["label"].is_string()) {
      gen.label = x["label"].get<std::string>();
    } else {
      gen.label = "g" + std::to_string(i + 1);
    }
    if (type == "heis") {
      CMat a = CMat::Identity(g.n - 1, g.n - 1);
      if (x.contains("A")) a = matrix_at(x["A"], gp + "/A", g.n - 1);
      if (!x.contains("xi")) field_error(gp + "/xi", "missing");
      CVec xi = vector_at(x["xi"], gp + "/xi", g.n - 1);
      const double v = x.contains("v") ? real_at(x["v"], gp + "/v") : 0.0;
      try {
        gen.element = HeisIsometry::make(std::move(a), {std::move(xi), v});
      } catch (const NumericError& e) {
        throw NumericError(gp + "/A: " + e.what());
      } catch (const ValidationError& e) {
        field_error(gp, e.what());
      }
    } else if (type == "matrix") {
      if (!x.contains("entries")) field_error(gp + "/entries", "missing");
      CMat m = matrix_at(x["entries"], gp + "/entries", g.n + 1);
      try {
        Isometry check(m);
      } catch (const NumericError& e) {
        throw NumericError(gp + "/entries: " + e.what());
      }
      gen.element = std::move(m);
    } else {
      field_error(gp + "/type", "unknown generator type '" + type + "'");
    }
    g.generators.push_back(std::move(gen));
  }
  g.validate();
  return g;
}

GroupSpec load_group(const std::string& path) {
  try {
    return parse_group(read_file(path));
  } catch (const NumericError& e) {
    throw NumericError(path + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

std::string group_to_json(const GroupSpec& g) {
  json doc;
  doc["n"] = g.n;
  doc["generators"] = json::array();
  doc["labels"] = json::array();
  for (const auto& gen : g.generators) {
    json x;
    if (gen.is_heis()) {
      const HeisIsometry& h = gen.heis();
      x["type"] = "heis";
      x["A"] = matrix_json(h.A);
      x["xi"] = json::array();
      for (Eigen::Index k = 0; k < h.tau.xi.size(); ++k) x["xi"].push_back(complex_json(h.tau.xi(k)));
      x["v"] = h.tau.v;
    } else {
      x["type"] = "matrix";
      x["entries"] = matrix_json(gen.matrix());
    }
    doc["generators"].push_back(x);
    doc["labels"].push_back(gen.label);
  }
  return doc.dump(2);
}

// ---- points ----

std::vector<PointPair> PointTable::pairs() const {
  if (images.size() != points.size()) throw ValidationError("point table has no image columns");
  std::vector<PointPair> out;
  out.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out.push_back({points[i], images[i]});
  return out;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return out;
}

double parse_cell(const std::string& s, std::size_t line, const std::string& col) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(x))
    throw ValidationError("points line " + std::to_string(line) + ", column " + col +
                          ": not a number '" + s + "'");
  return x;
}

}  // namespace

PointTable parse_points_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  std::map<std::string, std::size_t> col;
  PointTable t;
  int m = 0;
  bool images = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    const auto cells = split(line);
    if (header.empty()) {
      header = cells;
      for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
      while (col.count("xi_re_" + std::to_string(m + 1))) ++m;
      if (m == 0) throw ValidationError("points line " + std::to_string(lineno) + ": no xi_re_1 column");
      for (int k = 1; k <= m; ++k)
        if (!col.count("xi_im_" + std::to_string(k)))
          throw ValidationError("points line " + std::to_string(lineno) + ": missing column xi_im_" +
                                std::to_string(k));
      if (!col.count("v")) throw ValidationError("points line " + std::to_string(lineno) + ": missing column v");
      images = col.count("f_xi_re_1") > 0;
      if (images) {
        for (int k = 1; k <= m; ++k)
          for (const char* p : {"f_xi_re_", "f_xi_im_"})
            if (!col.count(p + std::to_string(k)))
              throw ValidationError("points line " + std::to_string(lineno) + ": missing column " + p +
                                    std::to_string(k));
        if (!col.count("f_v")) throw ValidationError("points line " + std::to_string(lineno) + ": missing column f_v");
      }
      t.n = m + 1;
      continue;
    }
    if (cells.size() != header.size())
      throw ValidationError("points line " + std::to_string(lineno) + ": expected " +
                            std::to_string(header.size()) + " cells, got " + std::to_string(cells.size()));
    auto read = [&](const std::string& prefix) {
      if (cells[col.at(prefix + "v")] == "inf") return HPoint::infinity(t.n);
      CVec xi(m);
      for (int k = 1; k <= m; ++k) {
        const std::string re = prefix + "xi_re_" + std::to_string(k), im = prefix + "xi_im_" + std::to_string(k);
        xi(k - 1) = {parse_cell(cells[col.at(re)], lineno, re), parse_cell(cells[col.at(im)], lineno, im)};
      }
      return HPoint::finite(xi, parse_cell(cells[col.at(prefix + "v")], lineno, prefix + "v"), 0.0);
    };
    t.points.push_back(read(""));
    if (images) t.images.push_back(read("f_"));
  }
  if (header.empty()) throw ValidationError("points file is empty");
  return t;
}

PointTable load_points_csv(const std::string& path) {
  try {
    return parse_points_csv(read_file(path));
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

// ---- CSV output ----

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_summary(std::ostream& os, const Summary& s) {
  for (const auto& [k, v] : s) os << "# " << k << '=' << v << '\n';
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

std::vector<std::string> point_columns(const std::string& prefix, int n) {
  std::vector<std::string> c;
  for (int k = 1; k < n; ++k) c.push_back(prefix + "xi_re_" + std::to_string(k));
  for (int k = 1; k < n; ++k) c.push_back(prefix + "xi_im_" + std::to_string(k));
  c.push_back(prefix + "v");
  c.push_back(prefix + "u");
  return c;
}

std::vector<std::string> point_cells(const HPoint& p) {
  const int n = p.n();
  if (p.is_infinity()) return std::vector<std::string>(2 * (n - 1) + 2, "inf");
  std::vector<std::string> c;
  for (int k = 0; k < n - 1; ++k) c.push_back(fmt(p.xi()(k).real()));
  for (int k = 0; k < n - 1; ++k) c.push_back(fmt(p.xi()(k).imag()));
  c.push_back(fmt(p.v()));
  c.push_back(fmt(p.u()));
  return c;
}

void write_points_csv(std::ostream& os, const std::vector<HPoint>& pts,
                      const std::vector<HPoint>& images) {
  if (pts.empty()) throw ValidationError("write_points_csv: no points");
  const int n = pts.front().n();
  auto cells = [&](const HPoint& p) {
    std::vector<std::string> c = point_cells(p);
    c.pop_back();  // u is always 0 here
    if (p.is_infinity()) std::fill(c.begin(), c.end() - 1, "0");
    return c;
  };
  std::vector<std::string> head = point_columns("", n);
  head.pop_back();
  if (!images.empty()) {
    auto f = point_columns("f_", n);
    head.insert(head.end(), f.begin(), f.end() - 1);
  }
  write_csv_row(os, head);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<std::string> row = cells(pts[i]);
    if (!images.empty()) {
      auto f = cells(images.at(i));
      row.insert(row.end(), f.begin(), f.end());
    }
    write_csv_row(os, row);
  }
}

void write_side_report_csv(std::ostream& os, const SideReport& r, const GroupSpec& g) {
  const DirichletOptions& o = r.options;
  Summary s{{"center", ""}, {"L", std::to_string(r.radius)},
            {"table_size", std::to_string(r.table_size)},
            {"face_count", std::to_string(r.face_count())},
            {"rays_total", std::to_string(r.rays_total)},
            {"rays_hit", std::to_string(r.rays_hit)},
            {"rays_escaped", std::to_string(r.rays_escaped)},
            {"rays_ambiguous", std::to_string(r.rays_ambiguous)},
            {"stability_checked", r.stability_checked ? "true" : "false"},
            {"stable", r.stable ? "true" : "false"},
            {"doubled_face_count", std::to_string(r.doubled_face_count)},
            {"t_max_too_small", r.t_max_too_small ? "true" : "false"},
            {"kappa", fmt(o.kappa)}, {"delta_eq", fmt(o.delta_eq)},
            {"delta_strict", fmt(o.delta_strict)}, {"targeted_search", o.targeted_search ? "true" : "false"},
            {"t_max", fmt(o.t_max)}, {"rays", std::to_string(o.rays)},
            {"seed", std::to_string(o.seed)}};
  std::string c;
  for (const auto& x : point_cells(r.center)) c += (c.empty() ? "" : " ") + x;
  s[0].second = c;
  write_summary(os, s);
  std::vector<std::string> head{"face", "element", "word"};
  for (auto& x : point_columns("witness_", g.n)) head.push_back(x);
  for (const char* x : {"margin", "first_ray", "hits", "face_count"}) head.push_back(x);
  write_csv_row(os, head);
  for (std::size_t i = 0; i < r.faces.size(); ++i) {
    const Face& f = r.faces[i];
    std::vector<std::string> row{std::to_string(i), std::to_string(f.element), word_to_string(f.word, g)};
    for (auto& x : point_cells(f.witness)) row.push_back(x);
    row.push_back(fmt(f.margin));
    row.push_back(std::to_string(f.first_ray));
    row.push_back(std::to_string(f.hits));
    row.push_back(std::to_string(r.face_count()));
    write_csv_row(os, row);
  }
}

void write_orbit_csv(std::ostream& os, const ElementTable& t, const GroupSpec& g, const HPoint& y) {
  write_summary(os, {{"L", std::to_string(t.radius)},
                     {"table_size", std::to_string(t.size())},
                     {"near_duplicates", std::to_string(t.near_duplicates)}});
  std::vector<std::string> head{"index", "word", "word_length"};
  for (auto& x : point_columns("", g.n)) head.push_back(x);
  write_csv_row(os, head);
  const std::vector<HPoint> pts = orbit(t, y);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<std::string> row{std::to_string(i), word_to_string(t.entries[i].word, g),
                                 std::to_string(t.entries[i].word.size())};
    for (auto& x : point_cells(pts[i])) row.push_back(x);
    write_csv_row(os, row);
  }
}

void write_limit_set_csv(std::ostream& os, const std::vector<LimitCluster>& c, int n) {
  write_summary(os, {{"clusters", std::to_string(c.size())}});
  std::vector<std::string> head{"cluster", "is_infinity"};
  for (auto& x : point_columns("", n)) head.push_back(x);
  head.push_back("members");
  head.push_back("chordal_to_infinity");
  write_csv_row(os, head);
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::vector<std::string> row{std::to_string(i), c[i].point.is_infinity() ? "1" : "0"};
    for (auto& x : point_cells(c[i].point)) row.push_back(x);
    row.push_back(std::to_string(c[i].members));
    row.push_back(fmt(c[i].chordal_to_infinity));
    write_csv_row(os, row);
  }
}

void write_subgroup_csv(std::ostream& os, const InvariantSubgroup& s, const DensityReport& d) {
  const int n = s.V.n;
  std::string b;
  for (auto& x : point_cells(HPoint::finite(s.V.conjugator.xi, s.V.conjugator.v, 0.0)))
    b += (b.empty() ? "" : " ") + x;
  write_summary(os, {{"class", std::string(1, s.group_class)},
                     {"dimension", std::to_string(s.V.dimension())},
                     {"include_center", s.V.include_center ? "true" : "false"},
                     {"index", std::to_string(s.V.index)},
                     {"conjugator", b},
                     {"density_passed", d.passed ? "true" : "false"},
                     {"density_delta", fmt(d.delta)},
                     {"density_worst_gap", fmt(d.worst_gap)},
                     {"density_samples", std::to_string(d.samples)},
                     {"rotation_defect", fmt(rotation_defect_on_subgroup(s))}});
  std::vector<std::string> head{"basis"};
  for (int k = 1; k < n; ++k) head.push_back("re_" + std::to_string(k));
  for (int k = 1; k < n; ++k) head.push_back("im_" + std::to_string(k));
  write_csv_row(os, head);
  const auto e = s.V.orthonormal_basis();
  for (std::size_t i = 0; i < e.size(); ++i) {
    std::vector<std::string> row{std::to_string(i)};
    for (int k = 0; k < n - 1; ++k) row.push_back(fmt(e[i](k).real()));
    for (int k = 0; k < n - 1; ++k) row.push_back(fmt(e[i](k).imag()));
    write_csv_row(os, row);
  }
}

void write_cusp_audit_csv(std::ostream& os, const CuspAuditReport& r, const GroupSpec& g) {
  std::string p;
  for (auto& x : point_cells(r.p)) p += (p.empty() ? "" : " ") + x;
  write_summary(os, {{"p", p}, {"r", fmt(r.r)}, {"L", std::to_string(r.radius)},
                     {"table_size", std::to_string(r.table_size)},
                     {"stabilizer_size", std::to_string(r.stabilizer_size)},
                     {"samples", std::to_string(r.samples)},
                     {"checks", std::to_string(r.checks)},
                     {"violations", std::to_string(r.violation_count)},
                     {"fix_tol", fmt(r.options.fix_tol)},
                     {"depth_tol", fmt(r.options.depth_tol)},
                     {"seed", std::to_string(r.options.seed)}});
  std::vector<std::string> head{"sample", "element", "word", "kind"};
  for (auto& x : point_columns("x_", g.n)) head.push_back(x);
  head.push_back("image_depth");
  write_csv_row(os, head);
  for (const auto& v : r.witnesses) {
    std::vector<std::string> row{std::to_string(v.sample), std::to_string(v.element),
                                 word_to_string(v.word, g), to_string(v.kind)};
    for (auto& x : point_cells(v.x)) row.push_back(x);
    row.push_back(fmt(v.image_depth));
    write_csv_row(os, row);
  }
}

void write_cr_audit_csv(std::ostream& os, const CRAudit& a) {
  write_summary(os, {{"quads", std::to_string(a.quads_sampled)},
                     {"quads_used", std::to_string(a.quads_used)},
                     {"degenerate_source", std::to_string(a.degenerate_source)},
                     {"degenerate_image", std::to_string(a.degenerate_image)},
                     {"unbounded", a.unbounded ? "true" : "false"},
                     {"seed", std::to_string(a.options.seed)}});
  write_csv_row(os, {"alpha", "M_hat", "worst_quads"});
  for (const auto& f : a.fits) {
    std::string w;
    for (const auto& q : f.worst) {
      if (!w.empty()) w += ' ';
      w += std::to_string(q.points[0]) + '-' + std::to_string(q.points[1]) + '-' +
           std::to_string(q.points[2]) + '-' + std::to_string(q.points[3]);
    }
    write_csv_row(os, {fmt(f.alpha), fmt(f.m_hat), w});
  }
}

void write_mu_density_csv(std::ostream& os, const MuDensityReport& r, double mu, ChainRule rule) {
  write_summary(os, {{"mu", fmt(mu)},
                     {"rule", to_string(rule)},
                     {"dense", r.dense ? "true" : "false"},
                     {"pairs_checked", std::to_string(r.pairs_checked)},
                     {"failing_pairs", std::to_string(r.failing.size())}});
  write_csv_row(os, {"a", "b"});
  for (const auto& [a, b] : r.failing) write_csv_row(os, {std::to_string(a), std::to_string(b)});
}

}  // namespace chyp

// Command-line front end: one subcommand per experiment or audit.

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "chyp/io.hpp"

using namespace chyp;
using nlohmann::json;

namespace {

struct Common {
  std::string group;
  std::string points;
  std::string out;
  std::vector<double> center;
  int L = 4;
  int rays = 2000;
  std::uint64_t seed = 1;
  double tol = 1e-8;
  double kappa = kDefaultKappa;
  int threads = 1;
  double mu = 2.0;
  std::vector<double> alphas = default_alpha_grid();
  // subcommand specific
  std::vector<double> box;
  int grid = 3;
  std::string p = "inf";
  double r = 1.0;
  std::size_t samples = 10'000;
  std::size_t quads = 100'000;
  std::string subgroup = "center";
  double t_max = 20.0;
  bool no_stability = false;
  bool two_sided = false;
  double delta = 0.0;
};

HPoint parse_center(const std::vector<double>& c, int n) {
  const std::size_t full = static_cast<std::size_t>(2 * (n - 1) + 2);
  const std::size_t real = static_cast<std::size_t>(n - 1 + 2);
  if (c.size() == full) return point_from_coordinates(c, n);
  if (c.size() == real) {
    CVec xi(n - 1);
    for (int k = 0; k < n - 1; ++k) xi(k) = c[k];
    return HPoint::finite(xi, c[n - 1], c[n]);
  }
  throw ValidationError("--center: expected " + std::to_string(real) + " (real xi) or " +
                        std::to_string(full) + " numbers (re/im of xi, v, u)");
}

// "inf" or the boundary coordinates re/im of xi, v.
HPoint parse_cusp_point(const std::string& s, int n) {
  if (s == "inf" || s == "infinity") return HPoint::infinity(n);
  std::vector<double> c;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      c.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw ValidationError("--p: not a number '" + cell + "'");
    }
  }
  if (c.size() != static_cast<std::size_t>(2 * (n - 1) + 1))
    throw ValidationError("--p: expected 'inf' or 2(n-1)+1 numbers (re/im of xi, v)");
  c.push_back(0.0);
  return point_from_coordinates(c, n);
}

class Output {
public:
  explicit Output(const std::string& path) : path_(path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw ValidationError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
};

void write_manifest(const std::string& out, const std::string& sub, const Common& c,
                    const json& extra, double seconds, const std::vector<std::string>& argv) {
  if (out.empty()) return;
  json m;
  m["subcommand"] = sub;
  m["argv"] = argv;
  m["inputs"] = {{"group", c.group}, {"points", c.points}};
  m["seed"] = c.seed;
  m["kappa"] = c.kappa;
  m["threads"] = c.threads;
  m["tolerances"] = extra;
  m["version"] = CHYP_VERSION;
  m["wall_time_seconds"] = seconds;
  std::ofstream f(out + ".manifest.json", std::ios::binary);
  f << m.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complex hyperbolic and Heisenberg geometry experiments"};
  app.require_subcommand(1);
  Common c;
  json tolerances;

  auto add_group = [&](CLI::App* s) {
    s->add_option("--group", c.group, "group file (JSON)")->required()->check(CLI::ExistingFile);
  };
  auto add_out = [&](CLI::App* s) { s->add_option("--out", c.out, "output CSV (stdout if omitted)"); };
  auto add_threads = [&](CLI::App* s) {
    s->add_option("--threads", c.threads, "worker threads; output does not depend on it")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  };
  auto add_seed = [&](CLI::App* s) { s->add_option("--seed", c.seed, "master seed")->capture_default_str(); };
  auto add_kappa = [&](CLI::App* s) {
    s->add_option("--kappa", c.kappa, "Bergman scale: d = kappa * arccosh(...)")
        ->capture_default_str()
        ->check(CLI::IsMember({2.0, 4.0}));
  };
  auto add_center = [&](CLI::App* s, bool required) {
    auto* o = s->add_option("--center", c.center, "interior point: xi (real or re,im pairs), v, u")
                  ->delimiter(',');
    if (required) o->required();
  };
  auto add_L = [&](CLI::App* s, int def) {
    c.L = def;
    s->add_option("--L", c.L, "word length radius")->capture_default_str()->check(CLI::NonNegativeNumber);
  };

  auto* classify_cmd = app.add_subcommand("classify", "type of each generator");
  add_group(classify_cmd);
  classify_cmd->add_option("--tol", c.tol, "unimodularity tolerance on eigenvalue moduli")->capture_default_str();

  auto* orbit_cmd = app.add_subcommand("orbit", "orbit of a point under the words of length <= L");
  add_group(orbit_cmd);
  add_center(orbit_cmd, true);
  add_L(orbit_cmd, 4);
  add_out(orbit_cmd);

  auto* limit_cmd = app.add_subcommand("limitset", "boundary clusters of a word-ball orbit");
  add_group(limit_cmd);
  add_center(limit_cmd, true);
  add_L(limit_cmd, 6);
  add_out(limit_cmd);

  auto* sides_cmd = app.add_subcommand("dirichlet-sides", "face count of a Dirichlet domain");
  add_group(sides_cmd);
  add_center(sides_cmd, true);
  add_L(sides_cmd, 4);
  sides_cmd->add_option("--rays", c.rays, "random rays")->capture_default_str()->check(CLI::PositiveNumber);
  add_seed(sides_cmd);
  add_kappa(sides_cmd);
  sides_cmd->add_option("--tol", c.tol, "equidistance tolerance delta_eq");
  sides_cmd->add_option("--t-max", c.t_max, "longest ray")->capture_default_str();
  sides_cmd->add_flag("--no-stability", c.no_stability, "skip the doubled-ray rerun");
  add_threads(sides_cmd);
  add_out(sides_cmd);

  auto* search_cmd = app.add_subcommand("center-search", "look for a two-sided Dirichlet center");
  add_group(search_cmd);
  search_cmd->add_option("--box", c.box, "lo,hi per coordinate (re/im of xi, v, u)")->required()->delimiter(',');
  search_cmd->add_option("--grid", c.grid, "grid points per coordinate")->capture_default_str();
  add_L(search_cmd, 4);
  search_cmd->add_option("--rays", c.rays, "random rays")->capture_default_str()->check(CLI::PositiveNumber);
  add_seed(search_cmd);
  add_kappa(search_cmd);
  add_threads(search_cmd);
  add_out(search_cmd);

  auto* sub_cmd = app.add_subcommand("invariant-subgroup", "minimal invariant subgroup and density check");
  add_group(sub_cmd);
  add_L(sub_cmd, 8);
  sub_cmd->add_option("--samples", c.samples, "density samples")->capture_default_str();
  sub_cmd->add_option("--delta", c.delta, "density radius (0 = sum of generator norms)")->capture_default_str();
  add_seed(sub_cmd);
  add_out(sub_cmd);

  auto* cusp_cmd = app.add_subcommand("cusp-audit", "precise invariance of a cusp neighbourhood");
  add_group(cusp_cmd);
  cusp_cmd->add_option("--p", c.p, "cusp point: inf or re/im of xi, v")->capture_default_str();
  cusp_cmd->add_option("--r", c.r, "radius")->capture_default_str()->check(CLI::PositiveNumber);
  add_L(cusp_cmd, 4);
  cusp_cmd->add_option("--samples", c.samples, "points of U_{p,r}")->capture_default_str();
  cusp_cmd->add_option("--subgroup", c.subgroup, "V: center, or auto (from the generators at p = inf)")
      ->capture_default_str()
      ->check(CLI::IsMember({"center", "auto"}));
  cusp_cmd->add_option("--tol", c.tol, "fixed-point tolerance")->capture_default_str();
  add_seed(cusp_cmd);
  add_threads(cusp_cmd);
  add_out(cusp_cmd);

  auto* cr_cmd = app.add_subcommand("cr-audit", "fit (M, alpha) cross-ratio distortion of a map");
  cr_cmd->add_option("--points", c.points, "points CSV with f_ image columns")->required()->check(CLI::ExistingFile);
  cr_cmd->add_option("--quads", c.quads, "random quadruples")->capture_default_str();
  cr_cmd->add_option("--alphas", c.alphas, "alpha grid")->delimiter(',')->capture_default_str();
  add_seed(cr_cmd);
  add_threads(cr_cmd);
  add_out(cr_cmd);

  auto* mu_cmd = app.add_subcommand("mu-density", "mu-chains between all pairs of a point set");
  mu_cmd->add_option("--points", c.points, "points CSV")->required()->check(CLI::ExistingFile);
  mu_cmd->add_option("--mu", c.mu, "chain bound, > 1")->capture_default_str();
  mu_cmd->add_flag("--two-sided", c.two_sided, "require 1/mu <= CR <= mu on every link");
  add_threads(mu_cmd);
  add_out(mu_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::string> args(argv, argv + argc);
  std::string name;
  try {
    if (*classify_cmd) {
      name = "classify";
      const GroupSpec g = load_group(c.group);
      ClassifyOptions opt;
      opt.tol = c.tol;
      const auto isos = g.isometries();
      for (std::size_t i = 0; i < isos.size(); ++i) {
        const char* type = to_string(classify(isos[i], opt));
        if (isos.size() == 1) std::cout << type << '\n';
        else std::cout << g.generators[i].label << ": " << type << '\n';
      }
      return 0;
    }

    Output out(c.out);
    std::ostream& os = out.stream();
    if (*orbit_cmd || *limit_cmd) {
      name = *orbit_cmd ? "orbit" : "limitset";
      const GroupSpec g = load_group(c.group);
      const HPoint y = parse_center(c.center, g.n);
      if (*orbit_cmd) {
        write_orbit_csv(os, enumerate_elements(g, c.L), g, y);
      } else {
        LimitSetOptions opt;
        write_limit_set_csv(os, limit_set_sample(g, c.L, y, opt), g.n);
        tolerances = {{"approach_ratio", opt.approach_ratio}, {"merge_radius", opt.merge_radius}};
      }
    } else if (*sides_cmd) {
      name = "dirichlet-sides";
      const GroupSpec g = load_group(c.group);
      DirichletOptions opt;
      opt.kappa = c.kappa;
      opt.rays = c.rays;
      opt.seed = c.seed;
      opt.threads = c.threads;
      opt.t_max = c.t_max;
      opt.check_stability = !c.no_stability;
      if (sides_cmd->count("--tol")) opt.delta_eq = c.tol;
      const SideReport r = dirichlet_sides(g, parse_center(c.center, g.n), c.L, opt);
      write_side_report_csv(os, r, g);
      tolerances = {{"delta_eq", opt.delta_eq}, {"delta_strict", opt.delta_strict}, {"t_max", opt.t_max}};
    } else if (*search_cmd) {
      name = "center-search";
      const GroupSpec g = load_group(c.group);
      if (c.box.size() % 2) throw ValidationError("--box: expected lo,hi pairs");
      Box box;
      for (std::size_t i = 0; i < c.box.size(); i += 2) box.emplace_back(c.box[i], c.box[i + 1]);
      DirichletOptions opt;
      opt.kappa = c.kappa;
      opt.rays = c.rays;
      opt.seed = c.seed;
      opt.threads = c.threads;
      CenterSearchOptions copt;
      copt.grid_points = c.grid;
      const CenterSearchResult res = two_sided_center_search(g, box, c.L, opt, copt);
      write_summary(os, {{"success", res.success ? "true" : "false"},
                         {"evaluations", std::to_string(res.evaluations)}});
      write_side_report_csv(os, res.report, g);
      std::cerr << (res.success ? "two-sided center found" : "no two-sided center found in the box")
                << '\n';
      tolerances = {{"delta_eq", opt.delta_eq}, {"delta_strict", opt.delta_strict}, {"t_max", opt.t_max}};
    } else if (*sub_cmd) {
      name = "invariant-subgroup";
      const GroupSpec g = load_group(c.group);
      const InvariantSubgroup s = minimal_invariant_subgroup(g);
      const DensityReport d = cocompactness_check(s, c.L, c.delta, c.samples, c.seed);
      write_subgroup_csv(os, s, d);
      std::cerr << "class " << s.group_class << ", dim V = " << s.V.dimension()
                << (s.V.include_center ? " (with center)" : "") << ", density "
                << (d.passed ? "passed" : "failed") << '\n';
      tolerances = {{"density_delta", d.delta}, {"half_width", d.half_width}};
    } else if (*cusp_cmd) {
      name = "cusp-audit";
      const GroupSpec g = load_group(c.group);
      const HPoint p = parse_cusp_point(c.p, g.n);
      SubgroupDescriptor V;
      V.n = g.n;
      V.conjugator = HeisElement::identity(g.n);
      V.include_center = true;
      if (c.subgroup == "auto") {
        if (!p.is_infinity()) throw ValidationError("--subgroup auto needs --p inf");
        V = minimal_invariant_subgroup(g).V;
      }
      CuspAuditOptions opt;
      opt.samples = c.samples;
      opt.seed = c.seed;
      opt.threads = c.threads;
      if (cusp_cmd->count("--tol")) opt.fix_tol = c.tol;
      const CuspAuditReport r = precise_invariance_audit(g, p, c.r, c.L, V, opt);
      write_cusp_audit_csv(os, r, g);
      std::cerr << "violations: " << r.violation_count << '\n';
      tolerances = {{"fix_tol", opt.fix_tol}, {"depth_tol", opt.depth_tol}};
    } else if (*cr_cmd) {
      name = "cr-audit";
      const PointTable t = load_points_csv(c.points);
      CRAuditOptions opt;
      opt.quads = c.quads;
      opt.alphas = c.alphas;
      opt.seed = c.seed;
      opt.threads = c.threads;
      const CRAudit a = quasi_cr_audit(t.pairs(), opt);
      write_cr_audit_csv(os, a);
    } else if (*mu_cmd) {
      name = "mu-density";
      const PointTable t = load_points_csv(c.points);
      const ChainRule rule = c.two_sided ? ChainRule::TwoSided : ChainRule::OneSided;
      const MuDensityReport r = mu_density(t.points, c.mu, rule, c.threads);
      std::cout << "dense: " << (r.dense ? "true" : "false") << '\n';
      if (!c.out.empty()) write_mu_density_csv(os, r, c.mu, rule);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(c.out, name, c, tolerances, secs, args);
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

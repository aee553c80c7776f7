#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "chf/domain_io.hpp"
#include "chf/needles.hpp"
#include "chf/svg.hpp"
#include "chf/verification.hpp"

namespace fs = std::filesystem;

namespace {

// exit codes: 0 pass, 1 assertion failure, 2 usage error, 3 numerical failure
constexpr int kExitAssert = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct RunConfig {
  std::string command;
  std::string domain_file;
  std::string gallery_name;
  std::vector<int> n_list{4};
  std::vector<std::string> grid_specs;
  std::string points_file;
  double tol = 1e-10;
  std::string precision = "auto";
  unsigned long long seed = 1;
  std::string out_dir;

  std::string canonical() const {
    std::ostringstream os;
    os << command << "|" << domain_file << "|" << gallery_name << "|";
    for (int n : n_list) os << n << ",";
    os << "|";
    for (const auto& g : grid_specs) os << g << ";";
    os << "|" << points_file << "|" << tol << "|" << precision << "|" << seed;
    return os.str();
  }
  std::string hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical()) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
  }
};

chf::Domain load_domain(const RunConfig& cfg) {
  if (!cfg.domain_file.empty()) return chf::load_domain_file(cfg.domain_file);
  if (!cfg.gallery_name.empty()) return chf::gallery(cfg.gallery_name);
  throw chf::Error("no domain given (use --domain or --gallery)");
}

chf::GridSpec parse_grid(const std::string& s) {
  chf::GridSpec g;
  auto colon = s.find(':');
  if (colon == std::string::npos)
    throw chf::Error("bad grid spec '" + s + "' (want cart:NX,NY or corner:J,K)");
  std::string kind = s.substr(0, colon), rest = s.substr(colon + 1);
  auto comma = rest.find(',');
  if (comma == std::string::npos)
    throw chf::Error("bad grid spec '" + s + "'");
  int a = std::stoi(rest.substr(0, comma));
  int b = std::stoi(rest.substr(comma + 1));
  if (kind == "cart") {
    g.kind = chf::GridSpec::Kind::Cartesian;
    g.nx = a;
    g.ny = b;
  } else if (kind == "corner") {
    g.kind = chf::GridSpec::Kind::CornerApproach;
    g.corner = a;
    g.levels = b;
  } else {
    throw chf::Error("bad grid kind '" + kind + "'");
  }
  return g;
}

std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
  fs::path p = cfg.out_dir.empty() ? fs::path(name)
                                   : fs::path(cfg.out_dir) / name;
  if (!cfg.out_dir.empty()) fs::create_directories(cfg.out_dir);
  std::ofstream os(p);
  if (!os) throw chf::Error("cannot open " + p.string());
  os << "# config " << cfg.hash() << "\n";
  return os;
}

std::optional<chf::PrecisionMode> precision_mode(const RunConfig& cfg) {
  if (cfg.precision == "double") return chf::PrecisionMode::Double;
  if (cfg.precision == "extended") return chf::PrecisionMode::Extended;
  if (cfg.precision == "auto") return std::nullopt;
  throw chf::Error("bad --precision (double|extended|auto)");
}

int cmd_lambda(const RunConfig& cfg) {
  chf::Domain domain = load_domain(cfg);
  int n = cfg.n_list.front();
  chf::QuadratureSpec qs;
  qs.outer_tol = cfg.tol;
  chf::ChristoffelEvaluator ev =
      chf::ChristoffelEvaluator::build(domain, n, qs, precision_mode(cfg));

  std::vector<chf::Point2> pts;
  if (!cfg.points_file.empty()) {
    std::ifstream in(cfg.points_file);
    if (!in) throw chf::Error("cannot read " + cfg.points_file);
    double x, y;
    while (in >> x >> y) {
      if (domain.contains({x, y}) != chf::Membership::Outside)
        pts.push_back({x, y});
    }
  }
  for (const auto& gs : cfg.grid_specs) {
    auto p = chf::grid_points(domain, parse_grid(gs), n);
    pts.insert(pts.end(), p.begin(), p.end());
  }

  std::ofstream os = open_out(cfg, "lambda.csv");
  os << "x,y,lambda,formula,ratio,cond,precision_mode\n";
  os.precision(17);
  chf::FormulaMode mode = domain.all_angles_convex()
                              ? chf::FormulaMode::Full
                              : chf::FormulaMode::AwayFromCorners;
  for (const auto& x : pts) {
    double lam = ev.lambda(x);
    os << x.x << "," << x.y << "," << lam << ",";
    if (n >= 1) {
      chf::FormulaBreakdown fb = chf::theorem_rhs(domain, x, n, mode);
      os << fb.lambda_formula << "," << lam / fb.lambda_formula;
    } else {
      os << ",";  // the formula needs n >= 1
    }
    os << "," << ev.cond_estimate() << ","
       << (ev.precision_mode() == chf::PrecisionMode::Double ? "double"
                                                             : "extended")
       << "\n";
  }
  return 0;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite, double beta,
               int trials, double h) {
  static const std::set<std::string> known = {
      "core", "ratio", "ball", "grain", "videnskii",
      "norm", "affine", "sandwich"};
  if (!known.count(suite)) throw chf::Error("unknown suite '" + suite + "'");
  chf::QuadratureSpec qs;
  qs.outer_tol = cfg.tol;
  std::vector<chf::GridSpec> grids;
  for (const auto& gs : cfg.grid_specs) grids.push_back(parse_grid(gs));
  if (grids.empty()) grids.push_back(chf::GridSpec{});

  bool pass = true;
  std::ofstream sum = open_out(cfg, "summary.json");
  sum << "{\"suite\":\"" << suite << "\",\"checks\":[";
  bool first = true;
  auto emit = [&](const std::string& name, bool ok, const std::string& info) {
    sum << (first ? "" : ",") << "{\"name\":\"" << name << "\",\"pass\":"
        << (ok ? "true" : "false") << ",\"info\":" << info << "}";
    first = false;
    if (!ok) pass = false;
    std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
  };

  if (suite == "ratio" || suite == "core") {
    chf::Domain domain = load_domain(cfg);
    auto rep = chf::ratio_study(domain, cfg.n_list, grids, qs);
    rep.domain_id = cfg.gallery_name.empty() ? cfg.domain_file
                                             : cfg.gallery_name;
    std::ofstream csv = open_out(cfg, "ratio.csv");
    rep.write_csv(csv);
    emit("ratio_spread_finite",
         rep.overall_spread > 0.0 && std::isfinite(rep.overall_spread),
         rep.summary_json());
  }
  if (suite == "ball" || suite == "core") {
    auto rep = chf::ball_behavior_check(cfg.n_list, 4, qs);
    std::ofstream csv = open_out(cfg, "ball.csv");
    rep.write_csv(csv);
    std::ostringstream info;
    info << "{\"overall_spread\":" << rep.overall_spread
         << ",\"boundary_slope\":" << rep.boundary_slope << "}";
    emit("ball_spread_le_25", rep.overall_spread <= 25.0, info.str());
  }
  if (suite == "grain") {
    auto rep = chf::grain_lower_check(h, cfg.n_list, grids, qs);
    std::ostringstream info;
    info << "{\"per_n\":[";
    bool ok = true;
    double fit = 0.0;
    for (std::size_t i = 0; i < rep.per_n.size(); ++i) {
      const auto& r = rep.per_n[i];
      if (i == 0)
        fit = r.min_ratio;
      else
        ok = ok && r.min_ratio * 1.5 >= fit;
      ok = ok && r.min_ratio > 0.0;
      info << (i ? "," : "") << "{\"n\":" << r.n
           << ",\"min\":" << r.min_ratio << ",\"max\":" << r.max_ratio << "}";
    }
    info << "]}";
    emit("grain_lower_bounded", ok, info.str());
  }
  if (suite == "videnskii") {
    auto rep = chf::videnskii_check(cfg.n_list, beta, trials, cfg.seed);
    std::ostringstream info;
    info << "{\"per_n\":[";
    bool ok = true;
    double fit = 0.0;
    for (std::size_t i = 0; i < rep.per_n.size(); ++i) {
      if (i == 0)
        fit = rep.per_n[i].c_tilde;
      else
        ok = ok && rep.per_n[i].c_tilde <= fit * 1.5;
      info << (i ? "," : "") << "{\"n\":" << rep.per_n[i].n
           << ",\"c_tilde\":" << rep.per_n[i].c_tilde << "}";
    }
    info << "]}";
    emit("videnskii_bounded", ok, info.str());
  }
  if (suite == "norm" || suite == "core") {
    chf::Domain domain =
        cfg.gallery_name.empty() && cfg.domain_file.empty()
            ? chf::gallery("disc")
            : load_domain(cfg);
    std::vector<chf::Point2> xs;
    for (auto& p : chf::grid_points(domain, chf::GridSpec{}, 4)) {
      if (xs.size() < 10) xs.push_back(p);
    }
    auto rep = chf::norm_control_check(domain, xs, {0.25, 0.5},
                                       cfg.n_list.front(), qs);
    emit("norm_control", rep.all_within(1e-6), "{}");
  }
  if (suite == "affine") {
    chf::Domain domain = load_domain(cfg);
    auto rep = chf::affine_invariance_check(domain, cfg.n_list.front(), 20,
                                            cfg.seed, qs);
    std::ostringstream info;
    info << "{\"max_rel_error\":" << rep.max_rel_error << "}";
    emit("affine_invariance", rep.max_rel_error <= 1e-6, info.str());
  }
  if (suite == "sandwich" || suite == "core") {
    chf::Domain domain =
        cfg.gallery_name.empty() && cfg.domain_file.empty()
            ? chf::gallery("square")
            : load_domain(cfg);
    auto rep = chf::sandwich_check(domain, cfg.n_list, grids, qs);
    std::ofstream csv = open_out(cfg, "sandwich.csv");
    rep.write_csv(csv);
    std::ostringstream info;
    info << "{\"witness_dev\":" << rep.worst_witness_deviation() << "}";
    emit("sandwich_ordered", rep.ordered(1e-8), info.str());
    emit("witness_admissible", rep.worst_witness_deviation() <= 1e-10,
         info.str());
  }
  sum << "]}";
  return pass ? 0 : kExitAssert;
}

int cmd_needle(const RunConfig& cfg, const std::string& kind, int n, double r1,
               double r2, double lam, double h, double px, double py,
               const std::string& profile_out) {
  chf::NeedleReport rep;
  chf::BivariatePoly p;
  if (kind == "radial") {
    p = chf::radial_needle(n, r1, r2, lam, &rep);
  } else if (kind == "narrowed") {
    p = chf::narrowed_annulus_needle(n, r1, r2, lam, &rep);
  } else if (kind == "two-annuli") {
    p = chf::two_annuli_needle(n, r1, r2, h, {px, py}, 0.1, &rep);
  } else {
    throw chf::Error("bad --kind (radial|narrowed|two-annuli)");
  }
  std::ofstream os = cfg.out_dir.empty() && !profile_out.empty()
                         ? std::ofstream(profile_out)
                         : open_out(cfg, profile_out.empty() ? "needle.csv"
                                                             : profile_out);
  os << "r,abs_P,envelope\n";
  os.precision(17);
  double t = (lam * lam - r1 * r1) / (r2 * r2 - r1 * r1);
  double rho = chf::rho_star(n, std::min(1.0, std::max(0.0, t)));
  for (int i = 0; i <= 2000; ++i) {
    double r = r1 + (r2 - r1) * i / 2000.0;
    double u = (r2 * r2 - r * r) / (r2 * r2 - r1 * r1);
    double a = 1.0 - t;
    double env = rep.c_fit * rho / (rho + std::abs(a - u));
    os << r << "," << std::abs(p({r, 0.0})) << "," << env << "\n";
  }
  std::cout << "c_fit " << rep.c_fit << " l2 " << rep.l2_norm_on_domain
            << "\n";
  return 0;
}

int cmd_plot(const RunConfig& cfg, const std::string& input,
             const std::string& kind) {
  std::ifstream in(input);
  if (!in) throw chf::Error("cannot read " + input);
  std::string line;
  if (kind == "ratio") {
    chf::Domain domain = load_domain(cfg);
    std::map<int, std::vector<chf::HeatmapCell>> per_n;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line[0] == 'x') continue;
      std::istringstream ls(line);
      std::string tok;
      std::vector<std::string> cols;
      while (std::getline(ls, tok, ',')) cols.push_back(tok);
      if (cols.size() < 6) continue;
      chf::HeatmapCell c{{std::stod(cols[0]), std::stod(cols[1])},
                         std::stod(cols[5])};
      per_n[std::stoi(cols[2])].push_back(c);
    }
    if (per_n.empty()) throw chf::Error("no rows in " + input);
    for (const auto& [n, cells] : per_n) {
      fs::path p = cfg.out_dir.empty() ? fs::path(".") : fs::path(cfg.out_dir);
      fs::create_directories(p);
      chf::write_heatmap_svg((p / ("ratio_n" + std::to_string(n) + ".svg"))
                                 .string(),
                             domain, cells, "log ratio, n=" + std::to_string(n),
                             "config " + cfg.hash());
    }
    return 0;
  }
  if (kind == "needle") {
    std::vector<chf::ProfileSample> samples;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line[0] == 'r') continue;
      std::istringstream ls(line);
      std::string a, b, c;
      if (std::getline(ls, a, ',') && std::getline(ls, b, ',') &&
          std::getline(ls, c, ','))
        samples.push_back({std::stod(a), std::stod(b), std::stod(c)});
    }
    if (samples.empty()) throw chf::Error("no rows in " + input);
    fs::path p = cfg.out_dir.empty() ? fs::path(".") : fs::path(cfg.out_dir);
    fs::create_directories(p);
    chf::write_profile_svg((p / "needle_profile.svg").string(), samples,
                           "needle decay", "config " + cfg.hash());
    return 0;
  }
  throw chf::Error("bad plot kind (ratio|needle)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Christoffel function toolkit"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string suite = "core", kind, input, profile_out;
  double beta = M_PI / 2, h = 1.0, r1 = 0.25, r2 = 4.0, lam = 0.5;
  double px = 0.0, py = 0.0;
  int trials = 200, needle_n = 8;

  auto add_common = [&](CLI::App* c) {
    c->add_option("--domain", cfg.domain_file, "domain description file")
        ->envname("CHF_DOMAIN");
    c->add_option("--gallery", cfg.gallery_name, "gallery domain name")
        ->envname("CHF_GALLERY");
    c->add_option("--n", cfg.n_list, "degree list")->envname("CHF_N");
    c->add_option("--grid", cfg.grid_specs,
                  "grid specs (cart:NX,NY or corner:J,K)")
        ->envname("CHF_GRID");
    c->add_option("--tol", cfg.tol, "quadrature tolerance")
        ->envname("CHF_TOL");
    c->add_option("--precision", cfg.precision, "double|extended|auto")
        ->envname("CHF_PRECISION");
    c->add_option("--seed", cfg.seed, "random seed")->envname("CHF_SEED");
    c->add_option("--out", cfg.out_dir, "output directory")
        ->envname("CHF_OUT");
  };

  CLI::App* lam_cmd = app.add_subcommand("lambda", "evaluate lambda_n");
  add_common(lam_cmd);
  lam_cmd->add_option("--points", cfg.points_file, "whitespace x y pairs");

  CLI::App* verify_cmd = app.add_subcommand("verify", "run check suites");
  add_common(verify_cmd);
  verify_cmd->add_option("--suite", suite,
                         "core|ratio|ball|grain|videnskii|norm|affine|sandwich");
  verify_cmd->add_option("--beta", beta, "arc half-length");
  verify_cmd->add_option("--trials", trials, "random trials");
  verify_cmd->add_option("--sep", h, "grain separation");

  CLI::App* needle_cmd = app.add_subcommand("needle", "emit needle profile");
  add_common(needle_cmd);
  needle_cmd->add_option("--kind", kind, "radial|narrowed|two-annuli")
      ->required();
  needle_cmd->add_option("--needle-n", needle_n, "construction degree");
  needle_cmd->add_option("--r1", r1);
  needle_cmd->add_option("--r2", r2);
  needle_cmd->add_option("--lam", lam);
  needle_cmd->add_option("--sep", h);
  needle_cmd->add_option("--x", px);
  needle_cmd->add_option("--y", py);
  needle_cmd->add_option("--emit-profile", profile_out, "profile CSV path");

  CLI::App* plot_cmd = app.add_subcommand("plot", "render SVG from CSV");
  add_common(plot_cmd);
  plot_cmd->add_option("--in", input, "input CSV")->required();
  plot_cmd->add_option("--kind", kind, "ratio|needle")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (lam_cmd->parsed()) {
      cfg.command = "lambda";
      return cmd_lambda(cfg);
    }
    if (verify_cmd->parsed()) {
      cfg.command = "verify";
      return cmd_verify(cfg, suite, beta, trials, h);
    }
    if (needle_cmd->parsed()) {
      cfg.command = "needle";
      return cmd_needle(cfg, kind, needle_n, r1, r2, lam, h, px, py,
                        profile_out);
    }
    if (plot_cmd->parsed()) {
      cfg.command = "plot";
      return cmd_plot(cfg, input, kind);
    }
  } catch (const chf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

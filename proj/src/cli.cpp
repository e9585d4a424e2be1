#include "lane_emden/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include "lane_emden/io.hpp"

namespace lane_emden {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

struct LoadedBranch {
  RunConfig config;
  GridPtr grid;
  RadialMeshPtr mesh;
  std::vector<Solution> lattice;
  std::vector<RadialSolution> radial;

  bool is_radial() const { return config.discretization == Discretization::kRadial; }
  std::size_t size() const { return is_radial() ? radial.size() : lattice.size(); }
  double p(std::size_t i) const { return is_radial() ? radial[i].p : lattice[i].p; }
  double spacing() const {
    return is_radial() ? mesh->radius() * (1.0 - std::exp(-mesh->dt())) : grid->h();
  }
  std::unique_ptr<SolutionView> view(std::size_t i) const {
    if (is_radial()) return std::make_unique<RadialSolutionView>(radial[i].u);
    return std::make_unique<GridSolutionView>(lattice[i].u);
  }
};

fs::path checkpoint_dir(const fs::path& out) { return out / "checkpoint"; }

GridPtr grid_for(const RunConfig& c) { return make_grid(c.domain, c.h); }
RadialMeshPtr mesh_for(const RunConfig& c) {
  return std::make_shared<const RadialMesh>(0.5 * c.domain.diameter(), c.radial_t_min,
                                            c.radial_nodes);
}

CheckpointEntry to_entry(const Solution& s) {
  return {s.p, s.residual_norm, s.newton_iters, s.underresolved, s.u.values()};
}
CheckpointEntry to_entry(const RadialSolution& s) {
  return {s.p, s.residual_norm, s.newton_iters, false, s.u.values()};
}

LoadedBranch reconstruct(const RunConfig& config, const std::vector<CheckpointEntry>& entries) {
  LoadedBranch b;
  b.config = config;
  try {
    if (b.is_radial())
      b.mesh = mesh_for(config);
    else
      b.grid = grid_for(config);
  } catch (const Error& e) {
    throw CorruptCheckpoint(std::string("cannot rebuild the discretization: ") + e.what());
  }
  for (const auto& e : entries) {
    if (b.is_radial()) {
      if (e.values.size() != b.mesh->size())
        throw CorruptCheckpoint("snapshot length does not match the radial mesh");
      b.radial.push_back({e.p, RadialProfile(b.mesh, e.values), e.residual, e.newton_iters,
                          e.values.minCoeff() > 0.0});
    } else {
      if (e.values.size() != b.grid->size())
        throw CorruptCheckpoint("snapshot length does not match the grid");
      b.lattice.push_back({e.p, Field(b.grid, e.values), e.residual, e.newton_iters,
                           e.values.minCoeff() > 0.0, e.underresolved});
    }
  }
  return b;
}

LoadedBranch load_branch(const fs::path& dir) {
  const fs::path cp_dir = fs::exists(checkpoint_dir(dir) / "manifest.json") ? checkpoint_dir(dir) : dir;
  const Checkpoint cp = load_checkpoint(cp_dir);
  if (cp.entries.empty()) throw CorruptCheckpoint("checkpoint holds no solutions");
  return reconstruct(cp.config, cp.entries);
}

GreenEvaluator make_green(const LoadedBranch& b) {
  if (b.config.domain.is_disk()) return GreenEvaluator::analytic(b.config.domain);
  return GreenEvaluator::numeric(b.grid);
}

ReportOptions report_options(const RunConfig& c) {
  ReportOptions o;
  o.peaks.r_min = c.r_min;
  // the identity is judged by verify, not enforced while tabulating
  o.identity_tol = std::numeric_limits<double>::infinity();
  return o;
}

std::vector<AsymptoticsReport> compute_reports(const LoadedBranch& b) {
  const GreenEvaluator green = make_green(b);
  const ReportOptions opts = report_options(b.config);
  std::vector<AsymptoticsReport> out;
  for (std::size_t i = 0; i < b.size(); ++i)
    out.push_back(b.is_radial() ? analyze(b.radial[i], green, opts)
                                : analyze(b.lattice[i], green, opts));
  return out;
}

json limits_json(const std::vector<AsymptoticsReport>& reports) {
  try {
    return limits_to_json(estimate_limits(reports));
  } catch (const InsufficientSamples& e) {
    return {{"status", "insufficient points"}, {"points", reports.size()}, {"reason", e.what()}};
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  out << text;
  if (!out) throw Error("cannot write " + path.string());
}

void write_outputs(const fs::path& out, const LoadedBranch& b,
                   const std::vector<AsymptoticsReport>& reports) {
  if (b.config.report) {
    std::ostringstream csv;
    write_report_csv(csv, reports);
    write_text(out / "report.csv", csv.str());
  }
  if (b.config.limits) write_text(out / "limits.json", limits_json(reports).dump(2) + "\n");
}

// ---------------------------------------------------------------------------

int cmd_solve(const RunConfig& cfg, const fs::path& out, bool resume, bool quiet,
              std::ostream& os, std::ostream& err) {
  fs::create_directories(out);
  std::vector<CheckpointEntry> kept;
  if (resume) {
    const Checkpoint cp = load_checkpoint(checkpoint_dir(out));
    json a = to_json(cp.config), b = to_json(cfg);
    for (json* j : {&a, &b}) {
      j->erase("schedule");
      j->erase("output");
    }
    if (a != b) throw ConfigError("resume: config differs from the checkpointed run");
    if (cp.entries.size() > cfg.schedule.size()) throw ConfigError("resume: schedule is shorter than the checkpoint");
    for (std::size_t i = 0; i < cp.entries.size(); ++i)
      if (cp.entries[i].p != cfg.schedule[i])
        throw ConfigError("resume: checkpointed exponents are not a prefix of the schedule");
    kept = cp.entries;
  }
  write_text(out / "config.json", to_json(cfg).dump(2) + "\n");
  CheckpointWriter writer(checkpoint_dir(out), cfg, kept);

  const std::vector<double> todo(cfg.schedule.begin() + static_cast<long>(kept.size()),
                                 cfg.schedule.end());
  std::vector<double> sched = todo;
  if (!kept.empty()) sched.insert(sched.begin(), kept.back().p);
  const double skip_p = kept.empty() ? -1.0 : kept.back().p;

  auto progress = [&](double p, double sup, int iters) {
    if (!quiet) err << "p = " << format_double(p) << "  sup = " << format_double(sup)
                    << "  newton iterations = " << iters << '\n';
  };

  int status = kExitOk;
  if (!todo.empty()) {
    try {
      if (cfg.discretization == Discretization::kLattice) {
        const GridPtr grid = grid_for(cfg);
        const LaplaceOperator A = assemble(grid);
        ContinuationOptions opts;
        opts.newton.tol = cfg.newton_tol;
        opts.max_bisections = cfg.max_bisections;
        opts.on_solution = [&](const Solution& s) {
          if (s.p == skip_p) return;
          writer.append(to_entry(s));
          progress(s.p, s.u.sup_norm(), s.newton_iters);
        };
        if (!kept.empty())
          opts.first_guess = Field(grid, kept.back().values);
        else if (!cfg.guess_points.empty())
          opts.first_guess = multi_peak_guess(grid, cfg.guess_points, sched.front());
        const Eigenpair eig = opts.first_guess
                                  ? Eigenpair{0.0, Field::zeros(grid), 0.0, 0}
                                  : principal_eigenpair(A, cfg.linear_tol);
        continue_branch(*grid, A, eig, sched, opts);
      } else {
        const RadialMeshPtr mesh = mesh_for(cfg);
        RadialContinuationOptions opts;
        opts.newton.tol = cfg.newton_tol;
        opts.max_bisections = cfg.max_bisections;
        opts.on_solution = [&](const RadialSolution& s) {
          if (s.p == skip_p) return;
          writer.append(to_entry(s));
          progress(s.p, s.u.sup_norm(), s.newton_iters);
        };
        if (!kept.empty()) opts.first_guess = RadialProfile(mesh, kept.back().values);
        continue_radial_branch(mesh, sched, opts);
      }
    } catch (const BranchBroken& e) {
      err << e.what() << '\n';
      status = kExitPartialBranch;
    } catch (const RadialBranchBroken& e) {
      err << e.what() << '\n';
      status = kExitPartialBranch;
    }
  }

  const LoadedBranch b = reconstruct(cfg, writer.entries());
  if (b.size() > 0) write_outputs(out, b, compute_reports(b));
  if (!quiet)
    os << "solved " << b.size() << " of " << cfg.schedule.size() << " exponents into "
       << out.string() << '\n';
  return status;
}

// ---------------------------------------------------------------------------

struct VerdictRow {
  std::string criterion;
  std::string status;  // pass | fail | n/a
  double observed;
  std::string threshold;
};

int cmd_verify(const fs::path& dir, const fs::path& out, bool quiet, std::ostream& os) {
  const LoadedBranch b = load_branch(dir);
  const std::vector<AsymptoticsReport> reports = compute_reports(b);
  const double spacing = b.spacing();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double kEnergy = 8.0 * kPi * kE, kMass = 8.0 * kPi, kHeight = std::sqrt(kE);

  std::vector<VerdictRow> rows;
  auto add = [&](std::string name, bool applicable, bool ok, double observed,
                 std::string threshold) {
    rows.push_back({std::move(name), applicable ? (ok ? "pass" : "fail") : "n/a",
                    applicable ? observed : nan, std::move(threshold)});
  };
  auto at = [&](double p) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < reports.size(); ++i)
      if (std::abs(reports[i].p - p) <= 1e-9 * p) return i;
    return std::nullopt;
  };
  auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };

  // solution identity on every point
  const double id_tol = b.is_radial() ? 1e-6 : 2e-2;
  double id_worst = 0.0;
  for (const auto& r : reports)
    id_worst = std::max(id_worst, std::abs(r.energy.dirichlet - r.energy.mass_p1) /
                                      std::max(r.energy.dirichlet, r.energy.mass_p1));
  add("identity p|grad u|^2 = p|u|^(p+1)", true, id_worst <= id_tol, id_worst,
      "<= " + format_double(id_tol));

  const auto i20 = at(20.0), i50 = at(50.0), i100 = at(100.0);
  const bool sufficient = i100.has_value() && reports.size() >= 4;

  std::optional<LimitEstimates> limits;
  if (reports.size() >= 4) limits = estimate_limits(reports);

  if (i100) {
    const auto& r = reports[*i100];
    const double g = rel(r.energy.dirichlet, kEnergy);
    add("energy at p=100 vs 8 pi e", true, g <= 0.15, g, "<= 0.15");
  } else {
    add("energy at p=100 vs 8 pi e", false, false, nan, "<= 0.15");
  }
  {
    double low = std::numeric_limits<double>::infinity();
    for (const auto& r : reports)
      if (r.p >= 50.0) low = std::min(low, r.energy.dirichlet / kEnergy);
    const bool app = std::isfinite(low);
    add("energy lower bound p>=50 (ratio to 8 pi e)", app, low >= 0.85, low, ">= 0.85");
  }
  add("beta_hat vs 8 pi e", sufficient && limits, limits && rel(limits->beta_hat.limit, kEnergy) <= 0.05,
      limits ? rel(limits->beta_hat.limit, kEnergy) : nan, "<= 0.05");

  if (i100) {
    const double g = rel(reports[*i100].energy.sup, kHeight);
    add("sup norm at p=100 vs sqrt(e)", true, g <= 0.10, g, "<= 0.10");
  } else {
    add("sup norm at p=100 vs sqrt(e)", false, false, nan, "<= 0.10");
  }
  const bool have_m = sufficient && limits && !limits->m_hats.empty();
  const double m_hat = have_m ? limits->m_hats.front().limit : nan;
  add("m_hat vs sqrt(e)", have_m, have_m && rel(m_hat, kHeight) <= 0.03,
      have_m ? rel(m_hat, kHeight) : nan, "<= 0.03");
  add("m_hat / sqrt(e)", have_m, have_m && m_hat >= 0.97 * kHeight, m_hat / kHeight, ">= 0.97");

  if (i100) {
    const auto& r = reports[*i100];
    const double g = rel(r.beta_local.front(), kMass);
    add("beta_local at p=100 vs 8 pi", true, g <= 0.10, g, "<= 0.10");
    const auto view = b.view(*i100);
    const double r_min = b.config.r_min > 0.0 ? b.config.r_min : 0.1 * b.config.domain.diameter();
    std::vector<double> betas;
    for (double f : {0.25, 0.5, 1.0}) betas.push_back(beta_local(*view, r.peaks.front(), r.p, f * r_min));
    const auto [lo, hi] = std::minmax_element(betas.begin(), betas.end());
    const double spread = (*hi - *lo) / (0.5 * (*hi + *lo));
    add("beta_local r-sensitivity spread", true, spread <= 0.05, spread, "<= 0.05");
    const double dev = r.bubble_deviation.front();
    add("bubble deviation at p=100", true, dev <= 0.15, dev, "<= 0.15");
    const bool dec = i50 && dev < reports[*i50].bubble_deviation.front();
    add("bubble deviation decreasing p=50 -> 100", i50.has_value(), dec, dev, "< value at p=50");
    const QuantizationCheck q = quantization_check(r);
    add("quantization gap at p=100", true, q.gap <= 0.15, q.gap, "<= 0.15");
  } else {
    for (const char* n : {"beta_local at p=100 vs 8 pi", "beta_local r-sensitivity spread",
                          "bubble deviation at p=100", "bubble deviation decreasing p=50 -> 100",
                          "quantization gap at p=100"})
      add(n, false, false, nan, "-");
  }

  {
    // judged at the largest exponent the discretization still resolves
    std::size_t last = reports.size() - 1;
    for (std::size_t i = reports.size(); i-- > 0;)
      if (!reports[i].underresolved) {
        last = i;
        break;
      }
    const auto& r = reports[last];
    const Point c = b.config.domain.center();
    const bool centered = b.config.domain.contains(c);
    const double off = (r.peaks.front().location - c).norm();
    add("peak distance to center at max resolved p (/ spacing)", centered, off <= 2.0 * spacing,
        off / spacing, "<= 2");
    double worst = 0.0;
    for (std::size_t i = 0; i < r.peaks.size(); ++i)
      worst = std::max(worst, r.concentration_residuals[i].norm() / r.peaks[i].height);
    add("concentration residual / m at max resolved p", true, worst <= 1e-3, worst, "<= 1e-3");
  }

  if (limits) {
    const double cap = std::floor(limits->beta_hat.limit / (kEnergy * 0.8));
    std::size_t k_max = 0;
    for (const auto& r : reports) k_max = std::max(k_max, r.peaks.size());
    add("peak count vs floor(beta_hat / (0.8 * 8 pi e))", true, static_cast<double>(k_max) <= cap,
        static_cast<double>(k_max), "<= " + format_double(cap));
  } else {
    add("peak count vs floor(beta_hat / (0.8 * 8 pi e))", false, false, nan, "-");
  }

  {
    double dmin = std::numeric_limits<double>::infinity();
    for (const auto& r : reports) dmin = std::min(dmin, r.boundary_distance_min);
    add("min peak distance to boundary (/ spacing)", true, dmin >= 10.0 * spacing, dmin / spacing,
        ">= 10");
  }
  if (i20) {
    const double r20 = reports[*i20].boundary_distance_min / reports[*i20].mu();
    bool inc = true, p3_ok = true, p4_ok = true, off_dec = true;
    double prev = r20, p3_worst = 0.0, p4_worst = 0.0, prev_off = reports[*i20].off_peak_max;
    for (std::size_t i = *i20 + 1; i < reports.size(); ++i) {
      const double q = reports[i].boundary_distance_min / reports[i].mu();
      if (!(q > prev)) inc = false;
      prev = q;
      const double off = reports[i].off_peak_max;
      if (!(off < prev_off)) off_dec = false;
      prev_off = off;
    }
    for (std::size_t i = *i20; i < reports.size(); ++i) {
      p3_worst = std::max(p3_worst, reports[i].p3 / reports[*i20].p3);
      p4_worst = std::max(p4_worst, reports[i].p4 / reports[*i20].p4);
    }
    p3_ok = p3_worst <= 2.0;
    p4_ok = p4_worst <= 2.0;
    add("dist / eps at p=20", true, r20 >= 5.0, r20, ">= 5");
    add("dist / eps increasing for p>=20", true, inc, prev, "increasing");
    add("p3 relative to p=20", true, p3_ok, p3_worst, "<= 2");
    add("p4 relative to p=20", true, p4_ok, p4_worst, "<= 2");
    add("off-peak sqrt(p) u decreasing for p>=20", true, off_dec, prev_off, "decreasing");
  } else {
    for (const char* n : {"dist / eps at p=20", "dist / eps increasing for p>=20",
                          "p3 relative to p=20", "p4 relative to p=20",
                          "off-peak sqrt(p) u decreasing for p>=20"})
      add(n, false, false, nan, "-");
  }
  {
    double hmin = std::numeric_limits<double>::infinity();
    for (const auto& r : reports)
      if (r.p >= 50.0)
        for (const Peak& pk : r.peaks) hmin = std::min(hmin, pk.height);
    add("peak height floor p>=50", std::isfinite(hmin), hmin >= 0.9, hmin, ">= 0.9");
  }

  bool failed = false;
  std::ostringstream table;
  table << "criterion,status,observed,threshold\n";
  for (const auto& r : rows) {
    table << '"' << r.criterion << "\"," << r.status << ',' << format_double(r.observed) << ",\""
          << r.threshold << "\"\n";
    failed = failed || r.status == "fail";
  }
  const std::string verdict =
      failed ? "fail" : (sufficient ? "pass" : "insufficient asymptotic range");
  fs::create_directories(out);
  write_text(out / "verdict.csv", table.str());
  write_text(out / "limits.json", limits_json(reports).dump(2) + "\n");
  if (!quiet) os << table.str();
  os << "verdict: " << verdict << '\n';
  return failed ? kExitVerificationFailed : kExitOk;
}

int cmd_report(const fs::path& dir, const std::string& out, std::ostream& os) {
  const LoadedBranch b = load_branch(dir);
  const auto reports = compute_reports(b);
  if (out.empty()) {
    write_report_csv(os, reports);
  } else {
    fs::create_directories(out);
    std::ostringstream csv;
    write_report_csv(csv, reports);
    write_text(fs::path(out) / "report.csv", csv.str());
  }
  return kExitOk;
}

Point parse_point(const std::string& s) {
  std::istringstream in(s);
  double x, y;
  char comma;
  if (!(in >> x >> comma >> y) || comma != ',') throw ConfigError("source must be 'x,y': " + s);
  return Point(x, y);
}

int cmd_greens(const RunConfig& cfg, const fs::path& out, const std::vector<std::string>& src,
               int n, bool quiet, std::ostream& os) {
  const GridPtr grid = grid_for(cfg);
  const GreenEvaluator numeric = GreenEvaluator::numeric(grid);
  std::vector<Point> sources;
  for (const auto& s : src) sources.push_back(parse_point(s));
  if (sources.empty()) sources.push_back(cfg.domain.center());
  const double margin = 4.0 * cfg.h;
  for (const Point& y : sources)
    if (!cfg.domain.contains(y) || cfg.domain.boundary_distance(y) < 2.0 * cfg.h)
      throw ConfigError("source point must lie 2h inside the domain");

  std::optional<GreenEvaluator> analytic;
  if (cfg.domain.is_disk()) analytic = GreenEvaluator::analytic(cfg.domain);

  fs::create_directories(out);
  std::ostringstream g;
  g << "source_x,source_y,x,y,G,H\n";
  double worst = 0.0;
  const std::vector<RobinSample> lattice = robin_landscape(numeric, n, margin);
  for (const Point& y : sources)
    for (const RobinSample& s : lattice) {
      const Point& x = s.x;
      if ((x - y).norm() < 2.0 * cfg.h) continue;
      const double G = numeric.G(x, y);
      g << format_double(y.x()) << ',' << format_double(y.y()) << ',' << format_double(x.x())
        << ',' << format_double(x.y()) << ',' << format_double(G) << ','
        << format_double(numeric.H(x, y)) << '\n';
      if (analytic && (x - y).norm() >= 0.1) {
        const double Ga = analytic->G(x, y);
        worst = std::max(worst, std::abs(G - Ga) / std::abs(Ga));
      }
    }
  write_text(out / "greens.csv", g.str());

  std::ostringstream r;
  r << "x,y,R,dRdx,dRdy\n";
  const RobinSample* best = nullptr;
  for (const RobinSample& s : lattice) {
    r << format_double(s.x.x()) << ',' << format_double(s.x.y()) << ',' << format_double(s.value)
      << ',' << format_double(s.gradient.x()) << ',' << format_double(s.gradient.y()) << '\n';
    if (!best || s.value > best->value) best = &s;
  }
  write_text(out / "robin.csv", r.str());

  if (!quiet) {
    for (const Point& y : sources)
      os << "robin(" << format_double(y.x()) << ", " << format_double(y.y())
         << ") = " << format_double(numeric.robin(y)) << '\n';
    if (best)
      os << "robin maximum on the landscape at (" << format_double(best->x.x()) << ", "
         << format_double(best->x.y()) << ")\n";
  }
  if (analytic) os << "max relative G discrepancy analytic vs numeric: " << format_double(worst) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Positive Lane-Emden branches on planar domains and their concentration diagnostics",
               "lane_emden"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);

  std::string config_path, out_dir, dir;
  double max_p = 0.0, h = 0.0;
  bool quiet = false, resume = false;
  std::vector<std::string> sources;
  int n = 21;

  auto* solve = app.add_subcommand("solve", "continue a branch and write checkpoints and reports");
  solve->add_option("--config", config_path, "JSON run configuration")->required();
  solve->add_option("--out", out_dir, "output directory (overrides the config)");
  solve->add_option("--max-p", max_p, "drop schedule entries above this exponent");
  solve->add_option("--h", h, "lattice spacing override");
  solve->add_flag("--quiet", quiet);
  solve->add_flag("--resume", resume, "continue from the checkpoint in the output directory");

  auto* greens = app.add_subcommand("greens", "Green's function and Robin landscapes as CSV");
  greens->add_option("--config", config_path)->required();
  greens->add_option("--out", out_dir);
  greens->add_option("--h", h);
  greens->add_option("--source", sources, "source point x,y (repeatable)");
  greens->add_option("--n", n, "landscape samples per axis")->check(CLI::Range(2, 1000));
  greens->add_flag("--quiet", quiet);

  auto* verify = app.add_subcommand("verify", "recompute diagnostics and judge a checkpointed branch");
  verify->add_option("dir", dir, "branch directory")->required();
  verify->add_option("--out", out_dir);
  verify->add_flag("--quiet", quiet);

  auto* report = app.add_subcommand("report", "per-exponent diagnostics table");
  report->add_option("dir", dir, "branch directory")->required();
  report->add_option("--out", out_dir);
  report->add_flag("--quiet", quiet);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  auto configure = [&]() {
    RunConfig cfg = load_config(config_path);
    json j = to_json(cfg);
    if (h > 0.0) j["h"] = h;
    if (!out_dir.empty()) j["output"] = out_dir;
    cfg = parse_config(j);
    if (max_p > 0.0) truncate_schedule(cfg, max_p);
    return cfg;
  };

  try {
    if (*solve) {
      const RunConfig cfg = configure();
      return cmd_solve(cfg, cfg.output, resume, quiet, out, err);
    }
    if (*greens) {
      const RunConfig cfg = configure();
      return cmd_greens(cfg, cfg.output, sources, n, quiet, out);
    }
    if (*verify) return cmd_verify(dir, out_dir.empty() ? fs::path(dir) : fs::path(out_dir), quiet, out);
    if (*report) return cmd_report(dir, out_dir, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CorruptCheckpoint& e) {
    err << "corrupt checkpoint: " << e.what() << '\n';
    return kExitCorruptData;
  } catch (const BadSpacing& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const EmptyGrid& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace lane_emden

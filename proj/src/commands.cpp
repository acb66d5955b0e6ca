#include "fracstab/commands.hpp"

#include "fracstab/dynamics.hpp"
#include "fracstab/io.hpp"
#include "fracstab/logistic.hpp"
#include "fracstab/parallel.hpp"
#include "fracstab/reference.hpp"
#include "fracstab/stability.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace fracstab {

namespace {

using nlohmann::json;

struct RunConfig {
  bool one_term = false;
  bool two_term = false;
  std::optional<double> alpha, beta, a, mu;
  std::optional<int> order;
  std::optional<std::string> b, c, x0, x1;
  std::vector<std::string> init;
  std::size_t steps = 500;
  std::size_t resolution = 4096;
  double tol = 1e-3;
  double bound = 1e6;
  double tail = 0.2;
  double eps = 1e-3;
  std::string history = "zero";
  std::optional<unsigned> jobs;
  std::string output;
  std::string format;
};

class Usage : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

template <class T>
T need(const std::optional<T>& v, const char* flag) {
  if (!v) throw Usage(std::string("missing required option ") + flag);
  return *v;
}

bool wants_one_term(const RunConfig& cfg) {
  if (cfg.one_term && cfg.two_term) throw Usage("--one-term and --two-term are exclusive");
  return cfg.one_term;
}

FractionalOrderPair orders_of(const RunConfig& cfg) {
  return FractionalOrderPair::make(need(cfg.alpha, "--alpha"), need(cfg.beta, "--beta"));
}

Family family_of(const RunConfig& cfg) {
  if (wants_one_term(cfg)) {
    Family f = OneTermFamily{need(cfg.alpha, "--alpha"), need(cfg.order, "--N")};
    validate(f);
    return f;
  }
  const double a = need(cfg.a, "--a");
  if (!std::isfinite(a)) throw Usage("--a must be finite");
  return TwoTermFamily{orders_of(cfg), a};
}

ClassifyThresholds thresholds_of(const RunConfig& cfg) {
  if (!(cfg.tol > 0.0) || !(cfg.bound > 0.0) || !(cfg.tail > 0.0 && cfg.tail <= 1.0)) {
    throw Usage("thresholds need --tol > 0, --bound > 0 and 0 < --tail <= 1");
  }
  return {cfg.tol, cfg.bound, cfg.tail};
}

History history_of(const RunConfig& cfg) {
  if (cfg.history == "zero") return History::ZeroExtended;
  if (cfg.history == "caputo") return History::Caputo;
  throw Usage("--history must be 'zero' or 'caputo'");
}

std::vector<std::string> config_lines(const CLI::App& app, const std::string& command) {
  std::vector<std::string> out{"command=" + command};
  std::istringstream ss(app.config_to_str(true, false));
  for (std::string line; std::getline(ss, line);) {
    if (line.empty() || line.front() == '[' || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || line.rfind("config=", 0) == 0 || line.substr(eq + 1) == "\"\"") continue;
    // options of other subcommands appear as "name.key=value"
    if (const auto dot = line.find('.'); dot < eq && line.compare(0, dot, command) != 0) continue;
    out.push_back(line);
  }
  return out;
}

json params_json(const RunConfig& cfg) {
  json p = json::object();
  if (cfg.alpha) p["alpha"] = *cfg.alpha;
  if (cfg.beta) p["beta"] = *cfg.beta;
  if (cfg.a) p["a"] = *cfg.a;
  if (cfg.order) p["N"] = *cfg.order;
  if (cfg.b) p["b"] = *cfg.b;
  if (cfg.c) p["c"] = *cfg.c;
  if (cfg.mu) p["mu"] = *cfg.mu;
  return p;
}

void emit_csv(const std::string& path, std::ostream& fallback, CsvTable table, const std::vector<std::string>& header,
              const std::vector<std::string>& trailer = {}) {
  table.comments.insert(table.comments.begin(), header.begin(), header.end());
  OutputTarget target(path, fallback);
  write_csv(target.stream(), table);
  for (const auto& t : trailer) target.stream() << "# " << t << '\n';
  target.close();
}

// ---- subcommands ----

struct BoundaryArgs {
  std::string svg;
  bool fill = false;
  std::size_t fill_grid = 300;
};

void cmd_boundary(const RunConfig& cfg, const BoundaryArgs& args, const std::vector<std::string>& header,
                  std::ostream& out) {
  const Family fam = family_of(cfg);
  const BoundaryCurve curve = sample_boundary(fam, cfg.resolution);
  const bool svg_out = !args.svg.empty() || cfg.format == "svg";
  if (svg_out) {
    SvgOptions so;
    so.comments = header;
    std::vector<int> w;
    if (args.fill) {
      so.box = bounding_box(curve, 0.05);
      so.nx = so.ny = args.fill_grid;
      w = winding_grid(curve, so.box, so.nx, so.ny, resolve_jobs(cfg.jobs));
      so.winding = &w;
      so.fill_winding = stable_winding(fam);
    }
    OutputTarget target(args.svg.empty() ? cfg.output : args.svg, out);
    write_svg(target.stream(), curve, so);
    target.close();
  }
  if (!svg_out || (!args.svg.empty() && !cfg.output.empty())) {
    emit_csv(cfg.output, out, boundary_table(curve), header);
  }
}

void cmd_classify(const RunConfig& cfg, std::ostream& out) {
  const Family fam = family_of(cfg);
  const bool one = std::holds_alternative<OneTermFamily>(fam);
  const cplx param = parse_complex(one ? need(cfg.c, "--c") : need(cfg.b, "--b"));
  if (!(cfg.eps >= 0.0)) throw Usage("--eps must be non-negative");
  const StabilityVerdict v = classify_point(fam, param, {cfg.eps, cfg.resolution});
  json j;
  j["verdict"] = to_string(v.kind);
  j["winding"] = v.winding;
  j["min_distance"] = v.min_distance;
  j["params"] = params_json(cfg);
  OutputTarget target(cfg.output, out);
  target.stream() << j.dump(2) << '\n';
  target.close();
}

std::string verdict_line(const TrajectoryVerdict& v) {
  std::string s = std::string("verdict=") + to_string(v.kind) + " n_used=" + std::to_string(v.n_used) +
                  " final_magnitude=" + format_double(v.final_magnitude);
  if (v.kind == TrajectoryKind::ConvergedTo) s += " value=" + format_complex(v.value);
  return s;
}

void cmd_simulate(const RunConfig& cfg, const std::vector<std::string>& header, std::ostream& out) {
  if (cfg.steps < 20) throw Usage("--steps must be at least 20");
  const ClassifyThresholds th = thresholds_of(cfg);
  SimOptions so;
  so.history = history_of(cfg);
  so.halt_above = th.bound_escape;

  Trajectory traj;
  if (wants_one_term(cfg)) {
    const auto fam = std::get<OneTermFamily>(family_of(cfg));
    std::vector<cplx> init;
    for (const auto& s : cfg.init) init.push_back(parse_complex(s));
    if (init.empty()) throw Usage("one-term simulation needs --init with N values");
    traj = simulate_one_term(OneTermSystem{fam.alpha, fam.order, parse_complex(need(cfg.c, "--c"))}, init, cfg.steps, so);
  } else {
    if (cfg.b.has_value() == cfg.mu.has_value()) throw Usage("give exactly one of --b (linear) or --mu (logistic)");
    Forcing f = cfg.b ? Forcing{LinearForcing{parse_complex(*cfg.b)}} : Forcing{LogisticForcing{*cfg.mu}};
    const double a = need(cfg.a, "--a");
    const cplx x0 = parse_complex(cfg.x0.value_or("0.1"));
    const cplx x1 = parse_complex(cfg.x1.value_or("0.2"));
    traj = simulate_two_term(TwoTermSystem{orders_of(cfg), a, f}, x0, x1, cfg.steps, so);
  }
  const TrajectoryVerdict v = classify_trajectory(traj, th);
  const std::string line = verdict_line(v);
  emit_csv(cfg.output, out, trajectory_table(traj), header, {line});
  if (!cfg.output.empty() && cfg.output != "-") out << line << '\n';
}

void cmd_bifurcations(const RunConfig& cfg, std::ostream& out) {
  const BifurcationReport r = bifurcation_values(orders_of(cfg));
  if (cfg.format == "json") {
    json j{{"a1", r.a1}, {"a2", r.a2}, {"params", params_json(cfg)}};
    if (cfg.a) j["regime"] = to_string(r.regime_of(*cfg.a));
    out << j.dump(2) << '\n';
    return;
  }
  out << "a1=" << format_double(r.a1) << " a2=" << format_double(r.a2);
  if (cfg.a) out << " regime=" << to_string(r.regime_of(*cfg.a));
  out << '\n';
}

void cmd_interval(const RunConfig& cfg, std::ostream& out) {
  std::optional<std::pair<double, double>> iv;
  json diag = json::object();
  if (wants_one_term(cfg)) {
    if (cfg.order.value_or(1) != 1) throw Usage("the closed-form real interval exists for N = 1 only");
    iv = one_term_real_interval(need(cfg.alpha, "--alpha"));
  } else {
    const auto r = real_interval(orders_of(cfg), need(cfg.a, "--a"));
    if (r) {
      iv = std::pair{r->left, r->right};
      diag = {{"theta", r->theta}, {"sign_changes", r->sign_changes}};
    }
  }
  if (cfg.format == "json") {
    json j{{"params", params_json(cfg)}, {"empty", !iv.has_value()}};
    if (iv) {
      j["left"] = iv->first;
      j["right"] = iv->second;
      j["diagnostics"] = diag;
    }
    out << j.dump(2) << '\n';
    return;
  }
  if (!iv) {
    out << "empty\n";
    return;
  }
  out << '(' << format_double(iv->first) << ", " << format_double(iv->second) << ")\n";
}

struct LogisticArgs {
  bool a_star = false;
};

void cmd_logistic(const RunConfig& cfg, const LogisticArgs& args, std::ostream& out) {
  const FractionalOrderPair orders = orders_of(cfg);
  if (args.a_star) {
    AStarOptions opt;
    opt.n_steps = cfg.steps < 2000 ? 2000 : cfg.steps;
    opt.jobs = resolve_jobs(cfg.jobs);
    const AStarEstimate est = estimate_a_star(orders, opt);
    for (const auto& row : est.rows) {
      std::size_t run = 0, conv = 0;
      for (const auto& p : row.probes) {
        if (p.inside) ++run, conv += p.converged;
      }
      out << "a=" << format_double(row.a) << " mu=(" << format_double(row.mu_lo) << ", " << format_double(row.mu_hi)
          << ") inside_probes=" << run << " settled=" << conv << '\n';
    }
    out << "a_star=" << format_double(est.a_star) << " grid_step=" << format_double(est.grid_step) << '\n';
    return;
  }

  const double a = need(cfg.a, "--a");
  const double mu = need(cfg.mu, "--mu");
  const LogisticAnalysis eq = equilibria(mu);
  out << "x1*=" << format_double(eq.x1_star) << " x2*=" << format_double(eq.x2_star) << '\n';
  for (int which : {1, 2}) {
    const StabilityVerdict v = classify_equilibrium(orders, a, mu, which, {cfg.eps, cfg.resolution});
    const auto iv = stable_mu_interval(orders, a, which);
    out << "x" << which << "*: linearized " << to_string(v.kind) << ", stable mu ";
    if (iv) {
      out << '(' << format_double(iv->first) << ", " << format_double(iv->second) << ")\n";
    } else {
      out << "none\n";
    }
  }
  if (cfg.steps < 20) throw Usage("--steps must be at least 20");
  const double x0 = cfg.x0 ? parse_complex(*cfg.x0).real() : eq.x2_star + 0.1;
  const double x1 = cfg.x1 ? parse_complex(*cfg.x1).real() : eq.x2_star - 0.1;
  SimOptions so;
  so.history = history_of(cfg);
  so.halt_above = cfg.bound;
  const Trajectory traj = simulate_two_term(TwoTermSystem{orders, a, LogisticForcing{mu}}, x0, x1, cfg.steps, so);
  const TrajectoryVerdict v = classify_trajectory(traj, thresholds_of(cfg));
  out << "trajectory from (" << format_double(x0) << ", " << format_double(x1) << "): " << verdict_line(v) << '\n';
}

struct AtlasArgs {
  double a_min = 0.05;
  std::optional<double> a_max;
  double a_step = 0.05;
  std::string svg;
};

void cmd_atlas(const RunConfig& cfg, const AtlasArgs& args, const std::vector<std::string>& header, std::ostream& out) {
  const FractionalOrderPair orders = orders_of(cfg);
  const BifurcationReport bif = bifurcation_values(orders);
  const double a_max = args.a_max.value_or(bif.a2);
  if (!(args.a_min > 0.0) || !(args.a_step > 0.0) || !(a_max > args.a_min)) {
    throw Usage("atlas needs 0 < --a-min < --a-max and --a-step > 0");
  }
  std::vector<double> grid;
  for (std::size_t k = 0;; ++k) {
    const double a = args.a_min + static_cast<double>(k) * args.a_step;
    if (a > a_max + 1e-12 || a >= bif.a2) break;
    grid.push_back(a);
  }
  std::vector<std::optional<RealInterval>> rows(grid.size());
  parallel_for(grid.size(), resolve_jobs(cfg.jobs), [&](std::size_t i) { rows[i] = real_interval(orders, grid[i]); });

  CsvTable t;
  t.columns = {"a", "b_left", "b_right"};
  std::vector<cplx> left, right;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!rows[i]) continue;
    t.rows.push_back({grid[i], rows[i]->left, rows[i]->right});
    left.emplace_back(rows[i]->left, grid[i]);
    right.emplace_back(rows[i]->right, grid[i]);
  }
  emit_csv(cfg.output, out, t, header);
  if (!args.svg.empty() && !left.empty()) {
    // the band outline: up the left edge, back down the right edge
    std::vector<cplx> outline = left;
    outline.insert(outline.end(), right.rbegin(), right.rend());
    SvgOptions so;
    so.comments = header;
    so.comments.push_back("horizontal axis b, vertical axis a");
    OutputTarget target(args.svg, out);
    write_svg(target.stream(), BoundaryCurve::polygon(std::move(outline)), so);
    target.close();
  }
}

struct ReproduceArgs {
  std::string out_dir = "reproduce_out";
  bool skip_a_star = false;
};

int cmd_reproduce(const RunConfig& cfg, const ReproduceArgs& args, const std::vector<std::string>& header,
                  std::ostream& out) {
  std::error_code ec;
  std::filesystem::create_directories(args.out_dir, ec);
  if (ec) throw IoError("cannot create '" + args.out_dir + "': " + ec.message());

  const ReferenceReport rep = run_reference_checks(resolve_jobs(cfg.jobs), !args.skip_a_star);
  json checks = json::array();
  for (const auto& c : rep.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : ": " + c.detail) << '\n';
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  CsvTable t;
  t.columns = {"alpha", "beta", "a_star_expected", "a_star_computed", "agree"};
  for (const auto& r : rep.a_star) {
    out << (r.agree ? "PASS " : "FAIL ") << "a* alpha=" << format_double(r.alpha) << " beta=" << format_double(r.beta)
        << ": got " << format_double(r.computed) << ", want " << format_double(r.expected) << " +/- 0.1\n";
    t.rows.push_back({r.alpha, r.beta, r.expected, r.computed, r.agree ? 1.0 : 0.0});
  }
  const auto dir = std::filesystem::path(args.out_dir);
  {
    OutputTarget target((dir / "report.json").string(), out);
    target.stream() << json{{"config", header}, {"checks", checks}, {"all_passed", rep.all_passed()}}.dump(2) << '\n';
    target.close();
  }
  if (!rep.a_star.empty()) emit_csv((dir / "a_star.csv").string(), out, t, header);

  std::size_t failed = 0;
  for (const auto& c : rep.checks) failed += !c.passed;
  for (const auto& r : rep.a_star) failed += !r.agree;
  out << (failed == 0 ? "all reference checks passed" : std::to_string(failed) + " reference checks failed") << '\n';
  return failed == 0 ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stability regions and simulation of fractional-order difference equations", "fracstab"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file with option defaults (command-line flags win)");

  RunConfig cfg;
  app.add_flag("--two-term", cfg.two_term, "two-term model (default)");
  app.add_flag("--one-term", cfg.one_term, "one-term model of order N");
  app.add_option("--alpha", cfg.alpha, "fractional order alpha");
  app.add_option("--beta", cfg.beta, "fractional order beta (two-term)");
  app.add_option("--a", cfg.a, "coefficient a (two-term)");
  app.add_option("--N", cfg.order, "integer order N (one-term)");
  app.add_option("--b", cfg.b, "linear forcing parameter b, e.g. 1.891-0.624i");
  app.add_option("--c", cfg.c, "one-term parameter c");
  app.add_option("--mu", cfg.mu, "logistic parameter mu");
  app.add_option("--x0", cfg.x0, "x(0) for two-term runs");
  app.add_option("--x1", cfg.x1, "x(1) for two-term runs");
  app.add_option("--init", cfg.init, "x(0..N-1) for one-term runs")->delimiter(',');
  app.add_option("--steps", cfg.steps, "number of steps")->capture_default_str();
  app.add_option("--resolution", cfg.resolution, "boundary samples (>= 1024)")->capture_default_str();
  app.add_option("--tol", cfg.tol, "convergence tolerance")->capture_default_str();
  app.add_option("--bound", cfg.bound, "escape bound")->capture_default_str();
  app.add_option("--tail", cfg.tail, "tail fraction for classification")->capture_default_str();
  app.add_option("--eps", cfg.eps, "boundary margin for point classification")->capture_default_str();
  app.add_option("--history", cfg.history, "history convention: zero or caputo")->capture_default_str();
  app.add_option("--jobs", cfg.jobs, "worker threads (default: FRACSTAB_JOBS or all cores)");
  app.add_option("-o,--output", cfg.output, "output file (default stdout)");
  app.add_option("--format", cfg.format, "csv, json or svg where supported");

  BoundaryArgs bargs;
  auto* boundary = app.add_subcommand("boundary", "sample the stability boundary locus");
  boundary->add_option("--svg", bargs.svg, "write an SVG plot to this file");
  boundary->add_flag("--fill", bargs.fill, "shade the stable region in the SVG");
  boundary->add_option("--fill-grid", bargs.fill_grid, "raster size for --fill")->capture_default_str();
  auto* classify = app.add_subcommand("classify", "stability verdict for one parameter value");
  auto* simulate = app.add_subcommand("simulate", "simulate a trajectory and classify it");
  auto* bifurcations = app.add_subcommand("bifurcations", "bifurcation values a1, a2");
  auto* interval = app.add_subcommand("interval", "stable interval on the real axis");
  LogisticArgs largs;
  auto* logistic = app.add_subcommand("logistic", "equilibria and stability of the logistic forcing");
  logistic->add_flag("--a-star", largs.a_star, "scan a for the empirical stability bound a*");
  AtlasArgs aargs;
  auto* atlas = app.add_subcommand("atlas", "stable b band over a grid of a");
  atlas->add_option("--a-min", aargs.a_min)->capture_default_str();
  atlas->add_option("--a-max", aargs.a_max, "default a2");
  atlas->add_option("--a-step", aargs.a_step)->capture_default_str();
  atlas->add_option("--svg", aargs.svg, "write the band outline as SVG");
  ReproduceArgs rargs;
  auto* reproduce = app.add_subcommand("reproduce-paper", "run every reference case and report pass/fail");
  reproduce->add_option("--out", rargs.out_dir, "report directory")->capture_default_str();
  reproduce->add_flag("--skip-a-star", rargs.skip_a_star, "skip the slow a* scan");
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    // a missing or unreadable --config file is an I/O failure
    err << "error: " << e.what() << '\n';
    return dynamic_cast<const CLI::FileError*>(&e) ? kExitIo : kExitInvalid;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::vector<std::string> header = config_lines(app, sub->get_name());
    if (sub == boundary) cmd_boundary(cfg, bargs, header, out);
    else if (sub == classify) cmd_classify(cfg, out);
    else if (sub == simulate) cmd_simulate(cfg, header, out);
    else if (sub == bifurcations) cmd_bifurcations(cfg, out);
    else if (sub == interval) cmd_interval(cfg, out);
    else if (sub == logistic) cmd_logistic(cfg, largs, out);
    else if (sub == atlas) cmd_atlas(cfg, aargs, header, out);
    else if (sub == reproduce) return cmd_reproduce(cfg, rargs, header, out);
    return kExitOk;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const RootNotFound& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::invalid_argument& e) {
    err << "invalid parameters: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::domain_error& e) {
    err << "invalid parameters: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace fracstab

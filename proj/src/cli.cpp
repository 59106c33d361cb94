#include "gaussbell/cli.hpp"

#include "gaussbell/bell.hpp"
#include "gaussbell/csv.hpp"
#include "gaussbell/errors.hpp"
#include "gaussbell/gaussian_core.hpp"
#include "gaussbell/oracles.hpp"
#include "gaussbell/pseudospin.hpp"
#include "gaussbell/scan.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

namespace gaussbell::cli {

namespace {

struct SeriesOpts {
  double tail_tol = 1e-9;
  int quad_order = 32;
  int sum_radius = 512;

  SeriesControl control() const {
    SeriesControl c;
    c.tail_tol = tail_tol;
    c.z_quad_order = quad_order;
    c.sum_radius = sum_radius;
    c.validate();
    return c;
  }
  void echo(ConfigEcho& e) const {
    e.emplace_back("tail_tol", format_double(tail_tol));
    e.emplace_back("quad_order", std::to_string(quad_order));
    e.emplace_back("sum_radius", std::to_string(sum_radius));
  }
};

struct BellOpts {
  std::string op = "binned";
  double r = 0.0;
  double t = 0.0;
  std::optional<double> l;
  int d = 1;
  double omega = 1.0;
  bool optimize = false;
  SeriesOpts series;
  std::string out;
};

struct GridOpts {
  std::vector<double> r_list;
  std::vector<double> t_list;
  double r_min = 0.0, r_max = 5.0, r_step = 0.05;
  double t_min = 0.0, t_max = 3.0, t_step = 0.05;
  double l_log_min = -2.0, l_log_max = 2.0;
  int l_points = 81;
  bool no_refine = false;
  std::string op = "binned";
  double omega = 1.0;
  unsigned threads = 1;
  SeriesOpts series;
  std::string out;
  std::string boundary_out;
  double r_tol = 1e-3;
  std::vector<double> levels{0.5, 1.0, 1.5, 2.0};
  int t_samples = 31;
  double contour_t_max = 3.0;
};

struct SelftestCli {
  bool quick = false;
  std::uint64_t seed = 42;
  std::int64_t samples = 200'000;
  std::string out;
};

void add_series_options(CLI::App* app, SeriesOpts& s) {
  app->add_option("--tail-tol", s.tail_tol, "Absolute truncation tolerance of the series");
  app->add_option("--quad-order", s.quad_order, "Gauss-Legendre points per z-panel");
  app->add_option("--sum-radius", s.sum_radius, "Largest index radius of the bin sums");
}

OperatorChoice parse_operator(const std::string& name, double l, int d) {
  if (name == "binned") return Binned{l};
  if (name == "unbinned") return Unbinned{};
  if (name == "fock-pair") return FockPair{};
  if (name == "fock-grouped") return FockGrouped{d};
  throw InvalidInput("unknown operator '" + name + "'");
}

// Opens the destination before any computation so bad paths fail fast.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::out | std::ios::trunc | std::ios::binary);
      if (!file_) throw InvalidInput("cannot open output path '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : fallback_; }

 private:
  std::ofstream file_;
  std::ostream& fallback_;
};

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += format_double(v[i]);
  }
  return s;
}

void apply_config(CLI::App* leaf, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  for (const auto& [key, value] : parse_config_text(ss.str())) {
    CLI::Option* opt = leaf->get_option_no_throw("--" + key);
    if (opt == nullptr) throw InvalidInput("unknown config key '" + key + "'");
    if (opt->count() > 0) continue;
    opt->add_result(value);
    opt->run_callback();
  }
}

GridSpec build_grid(const GridOpts& g, bool default_b_vs_l) {
  GridSpec spec;
  if (!g.r_list.empty()) {
    spec.r_values = g.r_list;
  } else if (default_b_vs_l) {
    spec.r_values = {1.0, 2.0, 3.0, 4.0};
  } else {
    spec.r_values = linear_range(g.r_min, g.r_max, g.r_step);
  }
  if (!g.t_list.empty()) {
    spec.t_values = g.t_list;
  } else if (default_b_vs_l) {
    spec.t_values = {0.0};
  } else {
    spec.t_values = linear_range(g.t_min, g.t_max, g.t_step);
  }
  spec.l_grid.log10_l_min = g.l_log_min;
  spec.l_grid.log10_l_max = g.l_log_max;
  spec.l_grid.points = g.l_points;
  spec.l_grid.refine = !g.no_refine;
  spec.op = parse_operator(g.op, 1.0, 1);
  spec.ctrl = g.series.control();
  spec.omega = g.omega;
  spec.threads = g.threads;
  spec.validate();
  return spec;
}

ConfigEcho grid_echo(const std::string& cmd, const GridSpec& spec, const GridOpts& g) {
  ConfigEcho e;
  e.emplace_back("command", cmd);
  e.emplace_back("op", g.op);
  e.emplace_back("r", join(spec.r_values));
  e.emplace_back("t", join(spec.t_values));
  e.emplace_back("omega", format_double(spec.omega));
  e.emplace_back("l_log_min", format_double(spec.l_grid.log10_l_min));
  e.emplace_back("l_log_max", format_double(spec.l_grid.log10_l_max));
  e.emplace_back("l_points", std::to_string(spec.l_grid.points));
  e.emplace_back("refine", spec.l_grid.refine ? "1" : "0");
  g.series.echo(e);
  return e;
}

int cmd_bell(const BellOpts& o, std::ostream& out) {
  TmstParams p;
  p.r = o.r;
  p.temperature = o.t;
  p.omega_a = p.omega_b = o.omega;
  p.validate();
  const SeriesControl ctrl = o.series.control();
  if (o.op == "binned" && !o.l && !o.optimize) {
    throw InvalidInput("--op binned requires --l (or --optimize)");
  }
  const OperatorChoice op = parse_operator(o.op, o.l.value_or(1.0), o.d);
  validate_operator(op);
  Sink sink(o.out, out);

  BellResult res;
  if (o.op == "binned" && o.optimize) {
    res = bell_optimize_l(p, LGrid{}, ctrl);
  } else {
    res = bell_for_operator(p, op, ctrl);
  }
  ConfigEcho echo{{"command", "bell"}, {"op", o.op}, {"r", format_double(o.r)},
                  {"t", format_double(o.t)}, {"omega", format_double(o.omega)}};
  if (o.l) echo.emplace_back("l", format_double(*o.l));
  if (o.op == "fock-grouped") echo.emplace_back("d", std::to_string(o.d));
  echo.emplace_back("optimize", o.optimize ? "1" : "0");
  o.series.echo(echo);
  Table t;
  t.columns = {"b", "theta2", "szz", "sxx", "est_error", "l_opt", "violated"};
  t.rows.push_back({res.b_value, res.theta2_opt, res.correlators.szz, res.correlators.sxx,
                    res.correlators.est_error,
                    res.l_opt ? Table::Cell{*res.l_opt} : Table::Cell{std::monostate{}},
                    res.violated});
  write_csv(sink.stream(), t, echo);
  return kExitOk;
}

int cmd_scan(const std::string& which, const GridOpts& g, std::ostream& out) {
  const GridSpec spec = build_grid(g, which == "b-vs-l");
  ContourSpec cspec;
  if (which == "contours") {
    cspec.en_levels = g.levels;
    cspec.t_samples = g.t_samples;
    cspec.t_max = g.contour_t_max;
    cspec.validate();
  }
  if (!(g.r_tol > 0.0)) throw InvalidInput("--r-tol must be > 0");
  Sink sink(g.out, out);
  std::optional<Sink> boundary_sink;
  if (!g.boundary_out.empty()) boundary_sink.emplace(g.boundary_out, out);

  ConfigEcho echo = grid_echo("scan " + which, spec, g);
  if (which == "b-vs-l") {
    write_csv(sink.stream(), sweep_b_vs_l(spec), echo);
  } else if (which == "violation-map") {
    echo.emplace_back("r_tol", format_double(g.r_tol));
    const ViolationMap vm = violation_map(spec, g.r_tol);
    write_csv(sink.stream(), vm.map, echo);
    if (boundary_sink) write_csv(boundary_sink->stream(), vm.boundary, echo);
  } else if (which == "en-map") {
    write_csv(sink.stream(), en_map_and_contours(spec, ContourSpec{{1.0}, 1, 0.0}).en_map, echo);
  } else {
    echo.emplace_back("levels", join(cspec.en_levels));
    echo.emplace_back("t_samples", std::to_string(cspec.t_samples));
    echo.emplace_back("contour_t_max", format_double(cspec.t_max));
    write_csv(sink.stream(), en_map_and_contours(spec, cspec).contours, echo);
  }
  return kExitOk;
}

int cmd_selftest(const SelftestCli& s, std::ostream& out) {
  if (s.samples < 10'000) throw InvalidInput("--samples must be >= 10000");
  Sink sink(s.out, out);
  SelftestOptions opts{s.quick, s.seed, s.samples};
  const auto results = run_selftest(opts);
  bool ok = true;
  std::ostream& os = sink.stream();
  os << "# command=selftest\n# quick=" << (s.quick ? 1 : 0) << "\n# seed=" << s.seed
     << "\n# samples=" << s.samples << '\n';
  os << "suite,status,detail\n";
  for (const auto& r : results) {
    const char* status = r.skipped ? "skip" : (r.pass ? "pass" : "FAIL");
    if (!r.skipped && !r.pass) ok = false;
    os << r.name << ',' << status << ',' << r.detail << '\n';
  }
  os << "overall," << (ok ? "pass" : "FAIL") << ",\n";
  return ok ? kExitOk : kExitSelftest;
}

unsigned default_threads() {
  if (const char* env = std::getenv("GAUSSBELL_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw InvalidInput("GAUSSBELL_THREADS must be a positive integer");
  }
  return 1;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidInput("config line " + std::to_string(lineno) + " is not key=value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    if (key.empty()) throw InvalidInput("config line " + std::to_string(lineno) + " has no key");
    out.emplace_back(key, value);
  }
  return out;
}

std::vector<SuiteResult> run_selftest(const SelftestOptions& opts) {
  std::vector<SuiteResult> out;
  auto record = [&](const std::string& name, auto&& body) {
    SuiteResult r{name, false, false, ""};
    try {
      body(r);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    out.push_back(r);
  };
  auto deviation = [](SuiteResult& r, double dev, double tol) {
    r.pass = dev <= tol;
    r.detail = "deviation=" + format_double(dev) + " tol=" + format_double(tol);
  };

  record("log_negativity_tmsv", [&](SuiteResult& r) {
    double dev = 0.0;
    for (double sq : {0.5, 1.0, 2.0}) {
      TmstParams p;
      p.r = sq;
      dev = std::max(dev, std::abs(log_negativity(tmst_state(p)) - 2.0 * sq / std::numbers::ln2));
    }
    deviation(r, dev, 1e-9);
  });
  record("large_l_asymptote", [&](SuiteResult& r) {
    TmstParams p;
    p.r = 2.0;
    const double b = bell_binned(p, 100.0).b_value;
    deviation(r, std::abs(b - binned_limits(p).b_large_l), 2e-3);
  });
  record("small_l_limit", [&](SuiteResult& r) {
    TmstParams p;
    p.r = 1.0;
    const double b = bell_binned(p, 0.01).b_value;
    deviation(r, std::abs(b - 2.0), 1e-2);
  });
  record("routes_agree", [&](SuiteResult& r) {
    TmstParams p;
    p.r = 1.0;
    SeriesControl a, h;
    a.route = SeriesControl::Route::BinSum;
    h.route = SeriesControl::Route::Harmonic;
    const double dev = std::max(std::abs(szz_correlator(p, 1.0, a).value - szz_correlator(p, 1.0, h).value),
                                std::abs(sxx_correlator(p, 1.0, a).value - sxx_correlator(p, 1.0, h).value));
    deviation(r, dev, 1e-8);
  });
  record("series_vs_quadrature", [&](SuiteResult& r) {
    TmstParams p;
    p.r = 1.0;
    p.temperature = 0.3;
    const QuadratureResult q = quadrature_correlators(p, 1.5);
    const CorrelatorSet c = binned_correlators(p, 1.5);
    deviation(r, std::max(std::abs(q.szz - c.szz), std::abs(q.sxx - c.sxx)), 1e-5);
  });
  record("cross_correlators_vanish", [&](SuiteResult& r) {
    TmstParams p;
    p.r = 2.0;
    p.temperature = 0.5;
    const CrossCorrelators cc = cross_correlators(p, 0.8);
    deviation(r, std::max({std::abs(cc.zx.value), std::abs(cc.yz.value), std::abs(cc.xy.value)}), 1e-6);
  });
  record("fock_grouped_closed_form", [&](SuiteResult& r) {
    double dev = 0.0;
    for (int d : {1, 2, 3}) {
      dev = std::max(dev, std::abs(fock_bell_grouped(0.8, d) - grouped_bell_closed_form(0.8, d)));
    }
    deviation(r, dev, 1e-6);
  });
  record("unbinned_closed_form", [&](SuiteResult& r) {
    TmstParams p;
    p.r = 1.0;
    p.temperature = 0.5;
    const double nu = thermal_nu(1.0, 0.5);
    const double f = 2.0 / std::numbers::pi * std::atan(std::sinh(2.0));
    deviation(r, std::abs(bell_unbinned(p).b_value - 2.0 * std::sqrt(std::pow(nu, -4) + f * f)), 1e-12);
  });
  if (opts.quick) {
    out.push_back({"monte_carlo_agreement", true, false, "skipped (--quick)"});
  } else {
    record("monte_carlo_agreement", [&](SuiteResult& r) {
      TmstParams p;
      p.r = 1.0;
      p.temperature = 0.3;
      McControl mc;
      mc.samples = opts.samples;
      mc.seed = opts.seed;
      const McResult m = mc_correlators(p, 1.5, mc);
      const CorrelatorSet c = binned_correlators(p, 1.5);
      const double z = std::max(std::abs(m.szz - c.szz) / m.stderr_szz,
                                std::abs(m.sxx - c.sxx) / m.stderr_sxx);
      r.pass = z <= 4.0;
      r.detail = "max_z_score=" + format_double(z) + " limit=4";
    });
  }
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"CHSH violation of two-mode squeezed thermal states", "gaussbell"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key=value file; command-line flags take precedence");

  BellOpts bell;
  CLI::App* sub_bell = app.add_subcommand("bell", "Bell value for one parameter point");
  sub_bell->add_option("--op", bell.op, "binned | unbinned | fock-pair | fock-grouped");
  sub_bell->add_option("--r", bell.r, "Squeezing parameter");
  sub_bell->add_option("--t", bell.t, "Temperature");
  sub_bell->add_option("--l", bell.l, "Bin size (binned operator)");
  sub_bell->add_option("--d", bell.d, "Group size (fock-grouped operator)");
  sub_bell->add_option("--omega", bell.omega, "Mode frequency");
  sub_bell->add_flag("--optimize", bell.optimize, "Optimize the bin size instead of using --l");
  sub_bell->add_option("--out", bell.out, "Output file (default stdout)");
  sub_bell->add_option("--config", config_path, "key=value file");
  add_series_options(sub_bell, bell.series);

  GridOpts grid;
  unsigned threads_cli = 0;
  CLI::App* sub_scan = app.add_subcommand("scan", "Parameter sweeps");
  sub_scan->require_subcommand(1);
  std::vector<CLI::App*> scans;
  for (const char* name : {"b-vs-l", "violation-map", "en-map", "contours"}) {
    CLI::App* s = sub_scan->add_subcommand(name, std::string("scan ") + name);
    s->add_option("--r", grid.r_list, "Comma-separated r values")->delimiter(',');
    s->add_option("--t", grid.t_list, "Comma-separated T values")->delimiter(',');
    s->add_option("--r-min", grid.r_min, "Lower end of the r range");
    s->add_option("--r-max", grid.r_max, "Upper end of the r range");
    s->add_option("--r-step", grid.r_step, "Step of the r range");
    s->add_option("--t-min", grid.t_min, "Lower end of the T range");
    s->add_option("--t-max", grid.t_max, "Upper end of the T range");
    s->add_option("--t-step", grid.t_step, "Step of the T range");
    s->add_option("--l-log-min", grid.l_log_min, "log10 of the smallest bin size");
    s->add_option("--l-log-max", grid.l_log_max, "log10 of the largest bin size");
    s->add_option("--l-points", grid.l_points, "Number of log-spaced bin sizes");
    s->add_flag("--no-refine", grid.no_refine, "Skip golden-section refinement of l");
    s->add_option("--op", grid.op, "binned | unbinned");
    s->add_option("--omega", grid.omega, "Mode frequency");
    s->add_option("--threads", threads_cli, "Worker threads (env GAUSSBELL_THREADS)");
    s->add_option("--out", grid.out, "Output file (default stdout)");
    s->add_option("--config", config_path, "key=value file");
    add_series_options(s, grid.series);
    if (std::string(name) == "violation-map") {
      s->add_option("--r-tol", grid.r_tol, "Bisection tolerance of the boundary in r");
      s->add_option("--boundary-out", grid.boundary_out, "Output file for the boundary table");
    }
    if (std::string(name) == "contours") {
      s->add_option("--levels", grid.levels, "Comma-separated E_N levels")->delimiter(',');
      s->add_option("--t-samples", grid.t_samples, "Temperatures per contour");
      s->add_option("--contour-t-max", grid.contour_t_max, "Largest contour temperature");
    }
    scans.push_back(s);
  }

  SelftestCli st;
  CLI::App* sub_self = app.add_subcommand("selftest", "Oracle-agreement and asymptote checks");
  sub_self->add_flag("--quick", st.quick, "Skip Monte Carlo suites");
  sub_self->add_option("--seed", st.seed, "Monte Carlo seed");
  sub_self->add_option("--samples", st.samples, "Monte Carlo samples");
  sub_self->add_option("--out", st.out, "Output file (default stdout)");
  sub_self->add_option("--config", config_path, "key=value file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalid;
  }

  try {
    CLI::App* leaf = sub_bell->parsed() ? sub_bell : (sub_self->parsed() ? sub_self : nullptr);
    std::string scan_name;
    for (CLI::App* s : scans) {
      if (s->parsed()) {
        leaf = s;
        scan_name = s->get_name();
      }
    }
    if (leaf == nullptr) throw InvalidInput("no command given");
    if (!config_path.empty()) apply_config(leaf, config_path);
    grid.threads = threads_cli > 0 ? threads_cli : default_threads();

    if (leaf == sub_bell) return cmd_bell(bell, out);
    if (leaf == sub_self) return cmd_selftest(st, out);
    return cmd_scan(scan_name, grid, out);
  } catch (const AccuracyError& e) {
    err << "accuracy error: " << e.what() << '\n';
    return kExitAccuracy;
  } catch (const CLI::ParseError& e) {
    err << "invalid config value: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace gaussbell::cli

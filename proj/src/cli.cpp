#include "jetadv/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "jetadv/diagnostics.hpp"
#include "jetadv/functions.hpp"
#include "jetadv/harness.hpp"

namespace jetadv::cli {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_seconds(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

double parse_number(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (s.empty() || res.ec != std::errc() || res.ptr != end)
    throw std::invalid_argument("not a number: " + std::string(s));
  return v;
}

const char* kReportHeader = "scheme,k,strategy,h,dt,t_final,T,linf_error,seconds,steps";

std::string report_row(const RunReport& r) {
  return r.scheme + ',' + std::to_string(r.k) + ',' + r.strategy + ',' + fmt(r.h) + ',' +
         fmt(r.dt) + ',' + fmt(r.t_final) + ',' + fmt(r.period) + ',' + fmt(r.linf_error) +
         ',' + fmt_seconds(r.seconds) + ',' + std::to_string(r.steps);
}

void warn_experimental(SchemeId id, std::ostream& err) {
  const auto& info = scheme_info(id);
  if (info.experimental)
    err << "warning: scheme " << info.name << " is experimental/unstable\n";
}

// Shared flags of the simulation commands.
struct SimFlags {
  std::string scheme;
  std::string t_period = "1";
  std::string t_final = "1";
  std::string ic = "cosine";
  std::string velocity = "swirl";
};

void add_sim_flags(CLI::App* cmd, SimFlags& f, bool with_tfinal) {
  std::string names;
  for (const auto& s : scheme_table()) names += (names.empty() ? "" : "|") + std::string(s.name);
  cmd->add_option("--scheme", f.scheme, "Scheme: " + names)->required();
  cmd->add_option("--T", f.t_period, "Swirl period T")->capture_default_str();
  if (with_tfinal) cmd->add_option("--tfinal", f.t_final, "Final time")->capture_default_str();
  cmd->add_option("--ic", f.ic, "Initial condition: cosine|hump")->capture_default_str();
  cmd->add_option("--velocity", f.velocity, "Velocity: swirl|zero")->capture_default_str();
}

SwirlRun make_run(const SimFlags& f, double h) {
  SwirlRun run;
  run.scheme = parse_scheme(f.scheme);
  run.h = h;
  run.period = parse_fraction(f.t_period);
  run.t_final = parse_fraction(f.t_final);
  run.ic = parse_initial_condition(f.ic);
  run.velocity = parse_velocity(f.velocity);
  nodes_for_resolution(h);
  if (!(run.period > 0.0)) throw std::invalid_argument("--T must be positive");
  if (!(run.t_final >= 0.0)) throw std::invalid_argument("--tfinal must be non-negative");
  return run;
}

// Usage problems discovered after parsing.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

int cmd_converge(const SimFlags& f, const std::string& h_list, std::ostream& out,
                 std::ostream& err) {
  std::vector<SwirlRun> runs;
  try {
    for (double h : parse_fraction_list(h_list)) runs.push_back(make_run(f, h));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  warn_experimental(runs.front().scheme, err);
  out << kReportHeader << ",order\n";
  double h_prev = 0.0, e_prev = 0.0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto rep = run_swirl(runs[i]).report;
    out << report_row(rep) << ',';
    if (i > 0) out << fmt(observed_order(h_prev, e_prev, rep.h, rep.linf_error));
    out << '\n';
    h_prev = rep.h;
    e_prev = rep.linf_error;
  }
  return kExitOk;
}

int cmd_run(const SimFlags& f, const std::string& h_text, const std::string& path,
            std::ostream& out, std::ostream& err) {
  SwirlRun run;
  try {
    run = make_run(f, parse_fraction(h_text));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::ofstream file(path);
  if (!file) {
    err << "error: cannot write " << path << '\n';
    return kExitIo;
  }
  warn_experimental(run.scheme, err);
  const auto result = run_swirl(run);
  write_field_csv(file, result.field);
  file.close();
  if (!file) {
    err << "error: failed writing " << path << '\n';
    return kExitIo;
  }
  out << kReportHeader << '\n' << report_row(result.report) << '\n';
  return kExitOk;
}

int cmd_contour(const SimFlags& f, const std::string& h_text, const std::string& when,
                const std::string& prefix, int refine, int markers, std::ostream& out,
                std::ostream& err) {
  SwirlRun run;
  try {
    SimFlags g = f;
    g.ic = "hump";
    run = make_run(g, parse_fraction(h_text));
    if (when == "half") {
      run.t_final = 0.5 * run.period;
    } else if (when == "final") {
      run.t_final = run.period;
    } else {
      throw std::invalid_argument("--time must be half or final");
    }
    if (refine < 1) throw std::invalid_argument("--refine must be >= 1");
    if (markers < 3) throw std::invalid_argument("--markers must be >= 3");
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const std::string jet_path = prefix + "_jet.csv";
  const std::string marker_path = prefix + "_markers.csv";
  std::ofstream jet_file(jet_path), marker_file(marker_path);
  if (!jet_file || !marker_file) {
    err << "error: cannot write " << (jet_file ? marker_path : jet_path) << '\n';
    return kExitIo;
  }
  warn_experimental(run.scheme, err);
  const auto result = run_swirl(run);
  const auto contour = extract_contour(result.field, hump_level(), refine);

  const auto circle = circle_polyline({kHumpCentreX, kHumpCentreY}, kHumpRadius, markers);
  std::unique_ptr<VelocityModel<2>> vel;
  if (run.velocity == VelocityKind::zero)
    vel = std::make_unique<ConstantVelocity<2>>(Point<2>{0.0, 0.0});
  else
    vel = std::make_unique<SwirlVelocity>(run.period);
  const auto marker_line = marker_oracle(circle, *vel, run.t_final);

  write_polylines_csv(jet_file, contour);
  write_polylines_csv(marker_file, {marker_line});
  if (!jet_file || !marker_file) {
    err << "error: failed writing contour files\n";
    return kExitIo;
  }
  const auto merged = merge_polylines(contour);
  out << "scheme,h,T,time,level,jet_polylines,jet_vertices,marker_vertices,"
         "hausdorff_jet_markers,hausdorff_jet_initial\n";
  out << result.report.scheme << ',' << fmt(result.report.h) << ',' << fmt(run.period) << ','
      << fmt(run.t_final) << ',' << fmt(hump_level()) << ',' << contour.size() << ','
      << merged.points.size() << ',' << marker_line.points.size() << ',';
  if (merged.points.empty()) {
    out << "nan,nan\n";
  } else {
    out << fmt(hausdorff_distance(merged, marker_line)) << ','
        << fmt(hausdorff_distance(merged, circle)) << '\n';
  }
  return kExitOk;
}

struct DiagnoseFlags {
  std::string suite;
  int k = 0;
  int trials = 20;
  int dim = 2;
  int n = 0;  // 0: suite default
  int steps = 200;
  double v = 0.37;
};

JetFunction<1> sine_1d() {
  return [](const Point<1>& x, const MultiIndex<1>& a) {
    return cos_derivative(2.0 * std::numbers::pi, -0.5 * std::numbers::pi, a[0], x[0]);
  };
}

int cmd_diagnose(const DiagnoseFlags& f, std::ostream& out) {
  if (f.k < 0 || f.k > 2) throw UsageError("--k must be 0, 1 or 2");
  if (f.suite == "minimizer-inequality") {
    if (f.dim != 1 && f.dim != 2) throw UsageError("--dim must be 1 or 2");
    if (f.trials < 1) throw UsageError("--trials must be >= 1");
    const int n = f.n > 0 ? f.n : 16;
    const QuadratureSpec exact_quad{12};
    out << "trial,dim,k,N,F_projected,F_exact,status\n";
    for (int t = 0; t < f.trials; ++t) {
      double fp = 0.0, fe = 0.0;
      const auto seed = static_cast<std::uint64_t>(t + 1);
      if (f.dim == 1) {
        const auto phi = TrigPolynomial<1>::random(seed, 4, 3).as_function();
        const auto grid = GridSpec<1>::unit(n);
        fp = stability_functional(sample_from_function(grid, f.k, phi), f.k);
        fe = stability_functional(phi, grid, f.k, exact_quad);
      } else {
        const auto phi = TrigPolynomial<2>::random(seed, 4, 3).as_function();
        const auto grid = GridSpec<2>::unit(n);
        fp = stability_functional(sample_from_function(grid, f.k, phi), f.k);
        fe = stability_functional(phi, grid, f.k, exact_quad);
      }
      const bool pass = fp <= fe * (1.0 + 1e-10);
      out << t << ',' << f.dim << ',' << f.k << ',' << n << ',' << fmt(fp) << ',' << fmt(fe)
          << ',' << (pass ? "PASS" : "FAIL") << '\n';
    }
    return kExitOk;
  }
  if (f.suite == "average-identity") {
    const int n = f.n > 0 ? f.n : 16;
    if (n < 2) throw UsageError("--N must be >= 2");
    const double tol = 1e-10;
    const double r = average_identity_residual(sine_1d(), GridSpec<1>::unit(n), f.k);
    out << "k,N,residual,tolerance,status\n"
        << f.k << ',' << n << ',' << fmt(r) << ',' << fmt(tol) << ','
        << (r <= tol ? "PASS" : "FAIL") << '\n';
    return kExitOk;
  }
  if (f.suite == "functional-monotonicity") {
    const int n = f.n > 0 ? f.n : 32;
    if (n < 2) throw UsageError("--N must be >= 2");
    if (f.steps < 1) throw UsageError("--steps must be >= 1");
    const double dt = 1.0 / n;
    const double tol = 1e-9;
    const auto seq = constant_advection_functional(sine_1d(), n, f.k, f.v, dt, f.steps);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < seq.size(); ++i) worst = std::max(worst, seq[i] - seq[i - 1]);
    out << "k,N,v,dt,steps,F_initial,F_final,max_increase,tolerance,status\n"
        << f.k << ',' << n << ',' << fmt(f.v) << ',' << fmt(dt) << ',' << f.steps << ','
        << fmt(seq.front()) << ',' << fmt(seq.back()) << ',' << fmt(worst) << ',' << fmt(tol)
        << ',' << (worst <= tol ? "PASS" : "FAIL") << '\n';
    return kExitOk;
  }
  throw UsageError("unknown diagnose suite: " + f.suite);
}

}  // namespace

double parse_fraction(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_number(text);
  const double num = parse_number(text.substr(0, slash));
  const double den = parse_number(text.substr(slash + 1));
  if (den == 0.0) throw std::invalid_argument("zero denominator: " + std::string(text));
  return num / den;
}

std::vector<double> parse_fraction_list(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                         : comma - start);
    out.push_back(parse_fraction(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semi-Lagrangian jet scheme advection on periodic grids", "jetadv"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  SimFlags conv_flags;
  std::string h_list;
  auto* converge = app.add_subcommand("converge", "Convergence study over several h");
  add_sim_flags(converge, conv_flags, true);
  converge->add_option("--h-list", h_list, "Comma-separated resolutions, e.g. 1/25,1/50")
      ->required();

  SimFlags run_flags;
  std::string run_h, run_out;
  auto* run = app.add_subcommand("run", "Single simulation with field dump");
  add_sim_flags(run, run_flags, true);
  run->add_option("--h", run_h, "Resolution, e.g. 1/150")->required();
  run->add_option("--out", run_out, "Field dump CSV path")->required();

  SimFlags contour_flags;
  contour_flags.scheme = "biquintic";
  contour_flags.t_period = "10";
  std::string contour_h = "1/100", contour_time = "final", prefix = "contour";
  int refine = 4, markers = 1000;
  auto* contour = app.add_subcommand("contour", "Gaussian hump contour benchmark");
  {
    std::string names;
    for (const auto& s : scheme_table()) names += (names.empty() ? "" : "|") + std::string(s.name);
    contour->add_option("--scheme", contour_flags.scheme, "Scheme: " + names)
        ->capture_default_str();
  }
  contour->add_option("--T", contour_flags.t_period, "Swirl period T")->capture_default_str();
  contour->add_option("--velocity", contour_flags.velocity, "Velocity: swirl|zero")
      ->capture_default_str();
  contour->add_option("--h", contour_h, "Resolution")->capture_default_str();
  contour->add_option("--time", contour_time, "Contour time: half|final")->capture_default_str();
  contour->add_option("--out-prefix", prefix, "Output path prefix")->capture_default_str();
  contour->add_option("--refine", refine, "Marching-squares refinement")->capture_default_str();
  contour->add_option("--markers", markers, "Marker count on the initial circle")
      ->capture_default_str();

  DiagnoseFlags diag;
  auto* diagnose = app.add_subcommand("diagnose", "Stability-theory diagnostics");
  diagnose
      ->add_option("suite", diag.suite,
                   "functional-monotonicity|average-identity|minimizer-inequality")
      ->required();
  diagnose->add_option("--k", diag.k, "Jet order")->capture_default_str();
  diagnose->add_option("--trials", diag.trials, "Random trials")->capture_default_str();
  diagnose->add_option("--dim", diag.dim, "Dimension (minimizer-inequality)")
      ->capture_default_str();
  diagnose->add_option("--N", diag.n, "Nodes per axis (0: suite default)")->capture_default_str();
  diagnose->add_option("--steps", diag.steps, "Time steps")->capture_default_str();
  diagnose->add_option("--v", diag.v, "Constant velocity")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* sub = nullptr;
    for (const auto* s : app.get_subcommands()) sub = s;
    err << (sub ? sub->help() : app.help());
    return kExitUsage;
  }

  auto usage = [&](const CLI::App* cmd, const std::string& what) {
    err << "error: " << what << "\n\n" << cmd->help();
    return kExitUsage;
  };
  const CLI::App* active = app.get_subcommands().front();
  try {
    if (*converge) return cmd_converge(conv_flags, h_list, out, err);
    if (*run) return cmd_run(run_flags, run_h, run_out, out, err);
    if (*contour)
      return cmd_contour(contour_flags, contour_h, contour_time, prefix, refine, markers, out,
                         err);
    if (*diagnose) return cmd_diagnose(diag, out);
  } catch (const UsageError& e) {
    return usage(active, e.what());
  }
  return usage(&app, "no command given");
}

}  // namespace jetadv::cli

// commgrow: generate / solve / calibrate / analyze / roundtrip.
//
// Exit status: 0 success, 1 model failure (saturation, infeasible target,
// non-convergence, failed check), 2 usage or I/O error.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "commgrow/analysis.hpp"
#include "commgrow/calibrate.hpp"
#include "commgrow/errors.hpp"
#include "commgrow/graph.hpp"
#include "commgrow/io.hpp"
#include "commgrow/stationary.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using namespace commgrow;
using namespace commgrow::cli;

namespace {

constexpr int kOk = 0;
constexpr int kModelFailure = 1;
constexpr int kUsage = 2;

// Command-line overrides; unset values leave the config untouched.
struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> steps;
  std::optional<std::string> out;
  std::optional<double> tol;
  std::optional<int> kmax;
  std::optional<int> replications;
  std::optional<int> max_degree;
  std::optional<std::uint64_t> check_interval;
};

struct AnalyzeArgs {
  std::optional<std::string> edges;
  std::optional<std::string> theory;
  int slope_lo = 10;
  int slope_hi = 100;
};

RunConfig configure(const Overrides& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (o.seed) c.rng_seed = *o.seed;
  if (o.steps) c.steps = *o.steps;
  if (o.out) c.output_dir = *o.out;
  if (o.tol) c.tol = *o.tol;
  if (o.kmax) c.k_max = *o.kmax;
  if (o.replications) c.replications = *o.replications;
  if (o.max_degree) c.calibration_max_degree = *o.max_degree;
  if (o.check_interval) c.check_interval = *o.check_interval;
  if (!(c.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (c.replications < 1) throw std::invalid_argument("replications must be at least 1");
  if (c.seed_size < 2) throw std::invalid_argument("seed_size must be at least 2");
  return c;
}

std::ofstream open_output(const RunConfig& c, const std::string& name) {
  fs::create_directories(c.output_dir);
  const auto path = fs::path(c.output_dir) / name;
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path.string());
  out.precision(17);
  return out;
}

SolverOptions solver_options(const RunConfig& c) {
  SolverOptions o;
  o.tol = c.tol;
  o.k_max = c.k_max;
  return o;
}

DegreeDistribution load_target(const RunConfig& c) {
  if (!c.target_vdd_path) throw std::invalid_argument("config has no target_vdd_path");
  return read_distribution_file(resolve(c, *c.target_vdd_path).string());
}

// Runs one growth replication from the K_s seed.
struct Replication {
  MultiGraph graph;
  GrowthStats stats;
};

Replication run_growth(const RunConfig& c, const ModelParams& p, const PreferenceFunction& f,
                       std::uint64_t seed) {
  GrowOptions opt;
  opt.check_interval = c.check_interval;
  GrowthEngine engine(seed_complete(c.seed_size), p, f, seed, opt);
  Replication r;
  r.stats = engine.grow(c.steps);
  r.graph = std::move(engine).release();
  return r;
}

ReportSummary summarize(const MultiGraph& g, const DegreeDistribution& emp,
                        const DegreeTable& theory, int slope_lo, int slope_hi) {
  ReportSummary s;
  if (!theory.empty()) {
    const auto cmp = compare(emp.table(), theory);
    s.tv = cmp.tv_distance;
    s.ks = cmp.ks_statistic;
  }
  try {
    s.slope = loglog_slope(emp, slope_lo, slope_hi);
    s.slope_defined = true;
  } catch (const std::domain_error&) {
  }
  s.triangles = triangle_count(g);
  try {
    s.clustering = global_clustering(g);
    s.clustering_defined = true;
  } catch (const std::domain_error&) {
  }
  return s;
}

int cmd_generate(const RunConfig& c) {
  const auto p = model_params(c);
  const auto f = preference_function(c);
  const auto echo = echo_lines(c, p);
  const auto run = run_growth(c, p, f, c.rng_seed);

  auto edges = open_output(c, "edges.tsv");
  write_edge_list(edges, run.graph, echo);
  auto stats = open_output(c, "stats.txt");
  write_stats(stats, run.stats, run.graph);
  auto vdd = open_output(c, "vdd.csv");
  write_vdd_csv(vdd, empirical_vdd(run.graph), echo);

  std::cout << "vertices=" << run.graph.vertex_count() << " edges=" << run.graph.edge_count()
            << " steps=" << run.stats.steps << '\n';
  if (run.stats.error) {
    std::cerr << "commgrow: " << *run.stats.error << " (partial outputs written)\n";
    return kModelFailure;
  }
  return kOk;
}

int cmd_solve(const RunConfig& c) {
  const auto p = model_params(c);
  const auto f = preference_function(c);
  const auto sol = solve_stationary(p, f, solver_options(c));
  auto out = open_output(c, "q.csv");
  write_solution_csv(out, sol, echo_lines(c, p));
  std::cout << "mean_f=" << format_real(sol.mean_f) << " k_max=" << sol.q.last()
            << " balance_residual=" << format_real(sol.balance_residual)
            << " tail_mass_bound=" << format_real(sol.tail_mass_bound)
            << " consistency_error=" << format_real(sol.consistency_error)
            << " iterations=" << sol.iterations << '\n';
  return kOk;
}

struct CalibrationOutcome {
  CalibrationResult result;
  std::optional<StationarySolution> forward;
  double forward_tv = 1.0;
  double forward_max_abs = 1.0;
};

CalibrationOutcome calibrate_and_check(const RunConfig& c, const ModelParams& p,
                                       const DegreeDistribution& target) {
  CalibrationOutcome o;
  o.result = calibrate(target, p, CalibrationWindow{c.calibration_g, c.calibration_max_degree});
  if (!o.result.feasible) return o;
  o.forward = solve_stationary(p, *o.result.f, solver_options(c));
  const auto cmp = compare(o.forward->q, target.table());
  o.forward_tv = cmp.tv_distance;
  o.forward_max_abs = 0.0;
  for (double e : cmp.per_k_abs_error) o.forward_max_abs = std::max(o.forward_max_abs, e);
  return o;
}

void write_calibration_report(std::ostream& out, const CalibrationOutcome& o,
                              const std::vector<std::string>& echo, double tv_tol) {
  write_header(out, echo);
  const auto& r = o.result;
  out << "feasible=" << (r.feasible ? "true" : "false") << '\n'
      << "g=" << r.g << '\n'
      << "max_degree=" << r.max_degree << '\n'
      << "a=" << format_real(r.a) << '\n';
  if (r.first_infeasible_k) out << "first_infeasible_k=" << *r.first_infeasible_k << '\n';
  if (r.feasible) {
    out << "mean_f=" << format_real(r.mean_f) << '\n'
        << "forward_tv=" << format_real(o.forward_tv) << '\n'
        << "forward_max_abs_error=" << format_real(o.forward_max_abs) << '\n'
        << "forward_check=" << (o.forward_tv < tv_tol ? "pass" : "fail") << '\n';
  }
}

int cmd_calibrate(const RunConfig& c) {
  const auto p = model_params(c);
  const auto target = load_target(c);
  const auto echo = echo_lines(c, p);
  const auto o = calibrate_and_check(c, p, target);

  auto report = open_output(c, "calibration.txt");
  write_calibration_report(report, o, echo, c.forward_tv_tol);
  if (!o.result.feasible) {
    std::cerr << "commgrow: target is infeasible for these parameters: f_"
              << *o.result.first_infeasible_k << " = "
              << format_real(o.result.weights.back()) << " <= 0\n";
    return kModelFailure;
  }
  auto pref = open_output(c, "preference.txt");
  write_preference(pref, *o.result.f);
  std::cout << "feasible a=" << format_real(o.result.a) << " forward_tv=" << format_real(o.forward_tv)
            << '\n';
  if (!(o.forward_tv < c.forward_tv_tol)) {
    std::cerr << "commgrow: forward check failed, TV " << format_real(o.forward_tv) << " >= "
              << format_real(c.forward_tv_tol) << '\n';
    return kModelFailure;
  }
  return kOk;
}

// Theory tables may be truncated (a solve with a fixed --kmax leaves the tail
// mass out), so no normalization is imposed here.
DegreeTable read_theory_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  auto pairs = parse_degree_pairs(in);
  if (pairs.empty()) throw std::invalid_argument(path + ": no entries");
  std::sort(pairs.begin(), pairs.end());
  const int lo = pairs.front().first;
  std::vector<double> v(static_cast<std::size_t>(pairs.back().first - lo + 1), 0.0);
  double total = 0.0;
  for (const auto& [k, q] : pairs) {
    if (!(q >= 0.0) || !std::isfinite(q)) throw std::invalid_argument(path + ": bad probability");
    v[static_cast<std::size_t>(k - lo)] = q;
    total += q;
  }
  if (total > 1.0 + 1e-6) throw std::invalid_argument(path + ": mass exceeds one");
  return DegreeTable(lo, std::move(v));
}

int cmd_analyze(const RunConfig& c, const AnalyzeArgs& args) {
  const std::string edges_path =
      args.edges ? *args.edges : (fs::path(c.output_dir) / "edges.tsv").string();
  const auto g = read_edge_list_file(edges_path);
  const auto emp = empirical_vdd(g);

  DegreeTable theory;
  std::vector<std::string> echo{"edges=" + edges_path};
  if (args.theory) {
    theory = read_theory_table(*args.theory);
    echo.push_back("theory=" + *args.theory);
  } else if (has_preference(c)) {
    const auto p = model_params(c);
    theory = solve_stationary(p, preference_function(c), solver_options(c)).q;
    for (auto& line : echo_lines(c, p)) echo.push_back(line);
  }
  const auto s = summarize(g, emp, theory, args.slope_lo, args.slope_hi);
  auto out = open_output(c, "report.csv");
  write_report_csv(out, emp.table(), theory, s, echo);

  std::cout << "vertices=" << g.vertex_count() << " edges=" << g.edge_count()
            << " triangles=" << s.triangles;
  if (!theory.empty()) std::cout << " tv=" << format_real(s.tv) << " ks=" << format_real(s.ks);
  std::cout << '\n';
  return kOk;
}

int cmd_roundtrip(const RunConfig& c) {
  const auto p = model_params(c);
  const auto target = load_target(c);
  const auto echo = echo_lines(c, p);
  auto summary = open_output(c, "roundtrip.txt");
  write_header(summary, echo);
  bool ok = true;
  auto check = [&](const std::string& name, double value, double tol) {
    const bool pass = value < tol;
    ok = ok && pass;
    summary << "check=" << name << " value=" << format_real(value) << " tol=" << format_real(tol)
            << " result=" << (pass ? "PASS" : "FAIL") << '\n';
    std::cout << (pass ? "PASS " : "FAIL ") << name << ' ' << format_real(value) << " < "
              << format_real(tol) << '\n';
  };

  CalibrationOutcome o;
  try {
    o = calibrate_and_check(c, p, target);
  } catch (const std::exception& e) {
    summary << "stage=calibrate error=" << e.what() << '\n';
    throw;
  }
  if (!o.result.feasible) {
    summary << "stage=calibrate infeasible first_infeasible_k=" << *o.result.first_infeasible_k << '\n';
    std::cerr << "commgrow: stage calibrate: infeasible at k=" << *o.result.first_infeasible_k << '\n';
    return kModelFailure;
  }
  auto pref = open_output(c, "preference.txt");
  write_preference(pref, *o.result.f);
  check("forward_tv", o.forward_tv, c.forward_tv_tol);

  // Replication i uses seed + i, each on its own thread and stream.
  std::vector<std::future<Replication>> jobs;
  for (int i = 0; i < c.replications; ++i)
    jobs.push_back(std::async(std::launch::async, run_growth, std::cref(c), std::cref(p),
                              std::cref(*o.result.f), c.rng_seed + static_cast<std::uint64_t>(i)));
  std::vector<Replication> reps;
  for (auto& j : jobs) reps.push_back(j.get());

  double tv_sum = 0.0;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (reps[i].stats.error) {
      summary << "stage=grow replication=" << i << " error=" << *reps[i].stats.error << '\n';
      std::cerr << "commgrow: stage grow: " << *reps[i].stats.error << '\n';
      return kModelFailure;
    }
    const double tv = compare(empirical_vdd(reps[i].graph).table(), o.forward->q).tv_distance;
    summary << "replication=" << i << " seed=" << c.rng_seed + i << " tv=" << format_real(tv)
            << " vertices=" << reps[i].graph.vertex_count() << '\n';
    tv_sum += tv;
  }
  check("simulation_tv", tv_sum / static_cast<double>(reps.size()), c.simulation_tv_tol);

  const auto emp = empirical_vdd(reps.front().graph);
  auto report = open_output(c, "report.csv");
  write_report_csv(report, emp.table(), o.forward->q,
                   summarize(reps.front().graph, emp, o.forward->q, 10, 100), echo);
  summary << "status=" << (ok ? "pass" : "fail") << '\n';
  return ok ? kOk : kModelFailure;
}

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config, "JSON run configuration");
  sub->add_option("--seed", o.seed, "RNG seed (replication i uses seed + i)");
  sub->add_option("--steps", o.steps, "Growth increments");
  sub->add_option("--out", o.out, "Output directory");
  sub->add_option("--tol", o.tol, "Solver tolerance (relative)");
  sub->add_option("--kmax", o.kmax, "Fixed solver truncation degree");
  sub->add_option("--replications", o.replications, "Independent growth runs");
  sub->add_option("--max-degree", o.max_degree, "Top of the calibration window");
  sub->add_option("--check-interval", o.check_interval,
                  "Verify the layer index every N increments (0 = off)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Growing graphs with clique increments under preferential attachment"};
  app.set_version_flag("--version", std::string(kToolName) + ' ' + kToolVersion);
  app.require_subcommand(1);

  Overrides o;
  AnalyzeArgs analyze_args;
  auto* gen = app.add_subcommand("generate", "Grow a graph; write edges, stats and degree table");
  auto* solve = app.add_subcommand("solve", "Stationary degree distribution");
  auto* calib = app.add_subcommand("calibrate", "Preference function realizing a target");
  auto* analyze = app.add_subcommand("analyze", "Compare an edge list with theory");
  auto* round = app.add_subcommand("roundtrip", "Calibrate, verify, grow and compare");
  for (auto* sub : {gen, solve, calib, analyze, round}) add_common(sub, o);
  analyze->add_option("--edges", analyze_args.edges, "Edge list (default OUT/edges.tsv)");
  analyze->add_option("--theory", analyze_args.theory, "Theoretical distribution file");
  analyze->add_option("--slope-lo", analyze_args.slope_lo, "Lower degree of the log-log fit");
  analyze->add_option("--slope-hi", analyze_args.slope_hi, "Upper degree of the log-log fit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const RunConfig c = configure(o);
    if (*gen) return cmd_generate(c);
    if (*solve) return cmd_solve(c);
    if (*calib) return cmd_calibrate(c);
    if (*analyze) return cmd_analyze(c, analyze_args);
    return cmd_roundtrip(c);
  } catch (const ModelError& e) {
    std::cerr << "commgrow: " << e.what() << '\n';
    return kModelFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "commgrow: " << e.what() << '\n';
    return kUsage;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "commgrow: " << e.what() << '\n';
    return kUsage;
  }
}

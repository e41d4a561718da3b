#include "so42/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "so42/algebra.hpp"
#include "so42/classical.hpp"
#include "so42/controllability.hpp"
#include "so42/errors.hpp"
#include "so42/io.hpp"
#include "so42/representation.hpp"
#include "so42/simulator.hpp"

namespace so42::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

// Thrown for problems with the invocation itself (exit code 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  int n_max = 4;
  std::uint64_t seed = 1;
  std::string out_dir = "so42-out";

  double rep_tol = 1e-9;
  double classical_tol = 1e-5;

  // payloads
  bool verify = false;
  bool check = false;
  bool do_export = false;
  std::string energy = "both";
  int samples = 100;
  std::string controls = "all";
  bool constant_controls = false;
  int probes = 20;
  std::string schedule;
  std::string psi0 = "1,0,0";
  std::string target = "2,1,0";
  int substeps = 0;
  int segments = 20;
  std::size_t budget = 50000;
  double segment_duration = 0.5;
  double min_fidelity = 0.95;

  json to_json() const
  {
    json j;
    j["command"] = command;
    j["nmax"] = n_max;
    j["seed"] = seed;
    j["tolerances"] = {{"rep", rep_tol}, {"classical", classical_tol}, {"b1", control::kB1Tolerance},
                       {"ideal", control::kIdealTolerance}, {"rank_gap_ratio", control::kRankGapRatio}};
    if (command == "algebra") j["verify"] = verify;
    if (command == "classical") {
      j["energy"] = energy;
      j["samples"] = samples;
    }
    if (command == "rep") {
      j["check"] = check;
      j["export"] = do_export;
    }
    if (command == "check" || command == "simulate" || command == "optimize") {
      j["controls"] = controls;
      j["constant_controls"] = constant_controls;
    }
    if (command == "check") j["probes"] = probes;
    if (command == "simulate") {
      j["schedule"] = schedule;
      j["psi0"] = psi0;
      j["substeps"] = substeps;
    }
    if (command == "optimize") {
      j["psi0"] = psi0;
      j["target"] = target;
      j["segments"] = segments;
      j["budget"] = budget;
      j["segment_duration"] = segment_duration;
      j["min_fidelity"] = min_fidelity;
    }
    return j;
  }
};

std::string utc_timestamp()
{
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_report(const RunConfig& cfg, json results, bool passed, std::ostream& out)
{
  json report;
  report["schema_version"] = io::kSchemaVersion;
  report["config"] = cfg.to_json();
  report["passed"] = passed;
  report["results"] = std::move(results);
  const fs::path dir(cfg.out_dir);
  io::write_json(dir / "report.json", report);
  io::write_json(dir / "run_meta.json", {{"schema_version", io::kSchemaVersion}, {"timestamp", utc_timestamp()}});
  out << (passed ? "PASS" : "FAIL") << "  " << cfg.command << "  -> " << (dir / "report.json").string() << '\n';
}

rep::BasisState state_arg(const std::string& text, int n_max)
{
  rep::BasisState s;
  try {
    s = rep::parse_state(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (s.n > n_max) throw UsageError("state " + text + " is outside the truncation n_max = " + std::to_string(n_max));
  return s;
}

rep::RepSet rep_arg(int n_max)
{
  if (n_max < 3 || n_max > rep::kMaxDenseNMax)
    throw UsageError("--nmax must be between 3 and " + std::to_string(rep::kMaxDenseNMax));
  return rep::build_rep(n_max);
}

control::ControlSystem system_arg(const RunConfig& cfg, const rep::RepSet& r)
{
  std::vector<GeneratorId> ids;
  try {
    ids = control::parse_control_list(cfg.controls);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return control::make_system(r, ids, !cfg.constant_controls);
}

int cmd_algebra(const RunConfig& cfg, std::ostream& out)
{
  const auto& table = StructureTable::so42();
  json res;
  res["nonzero_entries"] = table.nonzero_count();
  bool passed = true;
  if (cfg.verify) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto jac = jacobi_suite();
    const int kr = killing_rank(all_generators());
    const auto reduced = control::reduced_controls();
    const auto closure = generated_subalgebra_exact(basis_elements(reduced));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res["jacobi"] = {{"triples", jac.triples_checked}, {"failures", jac.failures}};
    res["killing_rank"] = kr;
    res["reduced_closure"] = {{"dim", closure.dim}, {"depth", closure.depth}, {"converged", closure.converged}};
    res["seconds"] = secs;
    passed = jac.failures == 0 && kr == static_cast<int>(kNumGenerators) && closure.dim == 15;
  }
  io::write_json(fs::path(cfg.out_dir) / "matrices" / "structure_table.json", io::structure_table_json(table));
  write_report(cfg, res, passed, out);
  return passed ? kExitOk : kExitCheckFailed;
}

int cmd_classical(const RunConfig& cfg, std::ostream& out)
{
  std::vector<classical::EnergySign> signs;
  if (cfg.energy == "negative" || cfg.energy == "both") signs.push_back(classical::EnergySign::Negative);
  if (cfg.energy == "positive" || cfg.energy == "both") signs.push_back(classical::EnergySign::Positive);
  if (signs.empty()) throw UsageError("--energy must be negative, positive or both");
  if (cfg.samples < 1) throw UsageError("--samples must be positive");

  json res = json::array();
  bool passed = true;
  for (auto s : signs) {
    const auto r = classical::verify_relations(s, static_cast<std::size_t>(cfg.samples), cfg.seed, {}, {},
                                               cfg.classical_tol);
    passed = passed && r.passed;
    res.push_back(io::to_json(r));
  }
  write_report(cfg, res, passed, out);
  return passed ? kExitOk : kExitCheckFailed;
}

int cmd_rep(const RunConfig& cfg, std::ostream& out)
{
  const auto r = rep_arg(cfg.n_max);
  json res;
  res["dim"] = r.basis.dim();
  res["interior_dim"] = r.interior_dim;
  bool passed = true;
  if (cfg.check) {
    const auto comm = rep::check_commutators(r, cfg.rep_tol);
    const auto cas = rep::casimir_check(r, cfg.rep_tol);
    const double herm = rep::max_hermiticity_defect(r);
    res["commutators"] = io::to_json(comm);
    res["hermiticity_defect"] = herm;
    res["casimir"] = io::to_json(cas);
    res["coefficients"] = {{"validation_residual", r.tables.validation_residual},
                           {"boundary_residual", r.tables.boundary_residual},
                           {"index_negation_residual", r.tables.index_negation_residual}};
    passed = comm.passed && cas.passed && herm < rep::kHermitianTol && r.tables.validation_residual < 1e-10;
  }
  if (cfg.do_export) {
    const fs::path dir = fs::path(cfg.out_dir) / "matrices";
    for (auto g : all_generators())
      io::write_json(dir / (std::string(name(g)) + ".json"), io::matrix_json(r[g], "hermitian"));
    io::write_json(dir / "H.json", io::matrix_json(r.hamiltonian.entries(), "hermitian"));
    json basis = json::array();
    for (const auto& s : r.basis.states()) basis.push_back({s.n, s.l, s.m});
    io::write_json(dir / "basis.json", basis);
  }
  write_report(cfg, res, passed, out);
  return passed ? kExitOk : kExitCheckFailed;
}

int cmd_check(const RunConfig& cfg, std::ostream& out)
{
  const auto r = rep_arg(cfg.n_max);
  const auto sys = system_arg(cfg, r);
  if (cfg.probes < 0) throw UsageError("--probes must be nonnegative");
  const auto rep_ = control::controllability_report(sys, cfg.probes, cfg.seed);
  const bool passed = rep_.verdict == "conditions-satisfied";
  write_report(cfg, io::to_json(rep_), passed, out);
  return passed ? kExitOk : kExitCheckFailed;
}

json trajectory_summary(const control::ControlSystem& sys, const rep::RepSet& r, const sim::Trajectory& traj)
{
  const auto& last = traj.states.back();
  double max_norm = 0.0;
  for (double d : traj.norm_defects) max_norm = std::max(max_norm, d);
  return {{"final_time", traj.times.back()},
          {"final_shell_populations", sim::shell_populations(sys, last)},
          {"final_energy", sim::observable_expectation(last, r.hamiltonian)},
          {"max_norm_defect", max_norm},
          {"max_boundary_population", traj.max_boundary_population},
          {"truncation_unreliable", traj.truncation_unreliable}};
}

void write_trajectory(const RunConfig& cfg, const control::ControlSystem& sys, const rep::RepSet& r,
                      const sim::Trajectory& traj)
{
  fs::create_directories(cfg.out_dir);
  std::ofstream csv(fs::path(cfg.out_dir) / "trajectory.csv");
  io::write_trajectory_csv(csv, sys, r, traj);
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out)
{
  if (cfg.schedule.empty()) throw UsageError("--schedule FILE is required");
  if (!fs::exists(cfg.schedule)) throw UsageError("schedule file not found: " + cfg.schedule);
  sim::PulseSchedule schedule;
  try {
    schedule = io::read_schedule(cfg.schedule);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto r = rep_arg(cfg.n_max);
  const auto sys = system_arg(cfg, r);
  const auto psi0 = sim::basis_vector(cfg.n_max, state_arg(cfg.psi0, cfg.n_max));
  sim::Trajectory traj;
  try {
    traj = sim::propagate(sys, schedule, psi0, {0.0, cfg.substeps});
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  write_trajectory(cfg, sys, r, traj);
  json res = trajectory_summary(sys, r, traj);
  res["segments"] = schedule.segments.size();
  const bool passed = res["max_norm_defect"].get<double>() < sim::kNormTolerance;
  write_report(cfg, res, passed, out);
  return passed ? kExitOk : kExitCheckFailed;
}

int cmd_optimize(const RunConfig& cfg, std::ostream& out)
{
  const auto r = rep_arg(cfg.n_max);
  const auto sys = system_arg(cfg, r);
  if (sys.controls.empty()) throw UsageError("optimize needs at least one control");
  const auto psi0 = sim::basis_vector(cfg.n_max, state_arg(cfg.psi0, cfg.n_max));
  const auto target = sim::basis_vector(cfg.n_max, state_arg(cfg.target, cfg.n_max));
  if (cfg.segments < 1) throw UsageError("--segments must be at least 1");

  sim::OptimizeOptions opt;
  opt.n_segments = cfg.segments;
  opt.budget = cfg.budget;
  opt.seed = cfg.seed;
  opt.segment_duration = cfg.segment_duration;
  const auto best = sim::optimize_pulse(sys, psi0, target, opt);
  const auto traj = sim::propagate(sys, best.schedule, psi0, {0.0, 4});

  write_trajectory(cfg, sys, r, traj);
  io::write_json(fs::path(cfg.out_dir) / "schedule.json", io::schedule_json(best.schedule));
  json res = trajectory_summary(sys, r, traj);
  res["fidelity"] = best.fidelity;
  res["evaluations"] = best.evaluations;
  res["starts"] = best.starts;
  const bool passed = best.fidelity >= cfg.min_fidelity && !traj.truncation_unreliable;
  write_report(cfg, res, passed, out);
  return passed ? kExitOk : kExitCheckFailed;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"so(4,2) hydrogen algebra toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Flat key = value config file (flags override it)");

  RunConfig cfg;
  app.add_option("--nmax", cfg.n_max, "Principal quantum number cutoff")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  app.add_option("--out", cfg.out_dir, "Output directory")->capture_default_str();
  app.add_option("--rep-tol", cfg.rep_tol, "Representation residual tolerance")->check(CLI::PositiveNumber);
  app.add_option("--classical-tol", cfg.classical_tol, "Poisson-bracket residual tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--energy", cfg.energy, "classical: negative, positive or both");
  app.add_option("--samples", cfg.samples, "classical: number of phase-space samples");
  app.add_option("--controls", cfg.controls, "Comma-separated control generators, or 'all'");
  app.add_flag("--constant-controls", cfg.constant_controls, "Controls do not evolve with the drift");
  app.add_option("--probes", cfg.probes, "check: number of orbit probes");
  app.add_option("--schedule", cfg.schedule, "simulate: schedule JSON file");
  app.add_option("--psi0", cfg.psi0, "Initial state \"n,l,m\"");
  app.add_option("--target", cfg.target, "optimize: target state \"n,l,m\"");
  app.add_option("--substeps", cfg.substeps, "simulate: extra samples per segment");
  app.add_option("--segments", cfg.segments, "optimize: number of segments");
  app.add_option("--budget", cfg.budget, "optimize: objective evaluations");
  app.add_option("--segment-duration", cfg.segment_duration, "optimize: duration of each segment")
      ->check(CLI::PositiveNumber);
  app.add_option("--min-fidelity", cfg.min_fidelity, "optimize: fidelity required for exit code 0");

  auto* algebra = app.add_subcommand("algebra", "Structure constants, Jacobi identity, Killing form");
  algebra->add_flag("--verify", cfg.verify, "Run the verification suite");
  auto* cls = app.add_subcommand("classical", "Poisson-bracket checks of the classical realizations");
  cls->alias("verify");
  auto* rep_cmd = app.add_subcommand("rep", "Truncated matrix representation");
  rep_cmd->add_flag("--check", cfg.check, "Check commutators, Hermiticity and Casimirs");
  rep_cmd->add_flag("--export", cfg.do_export, "Write generator matrices to OUT/matrices");
  auto* check = app.add_subcommand("check", "Controllability conditions");
  auto* simulate = app.add_subcommand("simulate", "Propagate a pulse schedule");
  auto* optimize = app.add_subcommand("optimize", "Search for a transfer pulse");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const std::pair<CLI::App*, int (*)(const RunConfig&, std::ostream&)> commands[] = {
        {algebra, cmd_algebra}, {cls, cmd_classical},   {rep_cmd, cmd_rep},
        {check, cmd_check},     {simulate, cmd_simulate}, {optimize, cmd_optimize}};
    for (const auto& [sub, fn] : commands)
      if (sub->parsed()) {
        cfg.command = sub->get_name();
        return fn(cfg, out);
      }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitUsage;
}

int run(int argc, const char* const* argv)
{
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

} // namespace so42::cli

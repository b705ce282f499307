// ---------------------------------------------------------------------------
// qoct — command-line driver for the leaking-qubit pulse-control toolkit.
//
// Commands: optimize, simulate, sweep, fig1, validate-rwa, composite-study.
// Every run writes CSVs plus rendered SVG plots into --out and lists each
// artifact in a manifest. Exit code 0 on success; on failure a single
// machine-parsable "error: ..." line goes to stderr.
// ---------------------------------------------------------------------------

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qoct/experiments.hpp"
#include "qoct/fidelity.hpp"
#include "qoct/io.hpp"
#include "qoct/linalg.hpp"
#include "qoct/model.hpp"
#include "qoct/optimizer.hpp"
#include "qoct/plot.hpp"
#include "qoct/presets.hpp"
#include "qoct/propagation.hpp"
#include "qoct/pulse.hpp"

namespace fs = std::filesystem;
using namespace qoct;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

// Options shared by every command.
struct CommonOpts {
  std::string out = "qoct-out";
  std::string config_path;
  std::string preset_name;
  std::uint64_t seed = 1234;
  bool echo_config = false;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--out", c.out, "Output directory for CSVs, plots, and the manifest")
      ->capture_default_str();
  cmd->add_option("--config", c.config_path,
                  "key = value config file; unknown keys are hard errors");
  cmd->add_option("--preset", c.preset_name,
                  "Device preset for unit conversion: phase-qubit (0.2 GHz detuning) or "
                  "transmon (0.455 GHz)");
  cmd->add_option("--seed", c.seed, "Base RNG seed for multi-start perturbations")
      ->capture_default_str();
  cmd->add_flag("--echo-config", c.echo_config,
                "Print the fully-resolved effective configuration before running");
}

// Everything a run needs, resolved from defaults -> config file -> flags.
struct Resolved {
  ModelParams model;
  OptimizerConfig optimizer;
  PenaltyConfig penalty;
  int slices = 256;
  SweepPlan plan = default_sweep_plan();
  std::optional<Preset> preset;
};

FamilySpec parse_family(const std::string& tag) {
  if (tag == "rectangular") return {FamilyKind::rectangular, 0.0};
  if (tag == "grape") return {FamilyKind::grape, 0.0};
  const std::string prefix = "gaussian-a";
  if (tag.rfind(prefix, 0) == 0) {
    try {
      return {FamilyKind::gaussian, std::stod(tag.substr(prefix.size()))};
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("sweep.families: expected rectangular, gaussian-a<alpha>, or grape, got '" +
                    tag + "'");
}

Resolved resolve(const CommonOpts& common) {
  Resolved r;
  r.optimizer.seed = common.seed;
  r.plan.seed = common.seed;
  if (!common.preset_name.empty()) r.preset = lookup_preset(common.preset_name);

  if (!common.config_path.empty()) {
    ConfigMap cfg(read_key_value_file(common.config_path));
    r.model.delta_omega = cfg.get_real("model.delta_omega", r.model.delta_omega);
    r.model.epsilon = cfg.get_real("model.epsilon", r.model.epsilon);
    r.model.coupling_scale = cfg.get_real("model.coupling_scale", r.model.coupling_scale);

    auto& o = r.optimizer;
    o.max_iterations = cfg.get_int("optimizer.max_iterations", o.max_iterations);
    o.target_error = cfg.get_real("optimizer.target_error", o.target_error);
    o.gradient_tolerance = cfg.get_real("optimizer.gradient_tolerance", o.gradient_tolerance);
    o.initial_step = cfg.get_real("optimizer.initial_step", o.initial_step);
    o.backtracking = cfg.get_real("optimizer.backtracking", o.backtracking);
    o.growth = cfg.get_real("optimizer.growth", o.growth);
    o.restarts = cfg.get_int("optimizer.restarts", o.restarts);
    o.lbfgs_memory = cfg.get_int("optimizer.lbfgs_memory", o.lbfgs_memory);
    o.seed = cfg.get_uint64("optimizer.seed", o.seed);
    if (cfg.contains("optimizer.perturbation_scale"))
      o.perturbation_scale = cfg.get_real("optimizer.perturbation_scale", 0.0);
    const std::string rule = cfg.get_string("optimizer.update_rule", "lbfgs");
    if (rule == "lbfgs")
      o.update_rule = UpdateRule::lbfgs;
    else if (rule == "gradient-ascent")
      o.update_rule = UpdateRule::gradient_ascent;
    else
      throw ConfigError("optimizer.update_rule: expected one of {lbfgs, gradient-ascent}, got '" +
                        rule + "'");
    const std::string mode = cfg.get_string("optimizer.gradient_mode", "exact");
    if (mode == "exact")
      o.gradient_mode = GradientMode::exact;
    else if (mode == "first-order")
      o.gradient_mode = GradientMode::first_order;
    else
      throw ConfigError("optimizer.gradient_mode: expected one of {exact, first-order}, got '" +
                        mode + "'");
    o.oracle_check = cfg.get_bool("optimizer.oracle_check", o.oracle_check);
    o.oracle_tolerance = cfg.get_real("optimizer.oracle_tolerance", o.oracle_tolerance);
    o.oracle_probes = cfg.get_int("optimizer.oracle_probes", o.oracle_probes);

    auto& p = r.penalty;
    p.enabled = cfg.get_bool("penalty.enabled", p.enabled);
    p.gamma = cfg.get_real("penalty.gamma", p.gamma);
    p.t0 = cfg.get_real("penalty.t0", p.t0);
    const std::string form = cfg.get_string("penalty.form", "edge-symmetric");
    if (form == "edge-symmetric")
      p.form = PenaltyConfig::Form::edge_symmetric;
    else if (form == "paper-verbatim")
      p.form = PenaltyConfig::Form::paper_verbatim;
    else
      throw ConfigError("penalty.form: expected one of {edge-symmetric, paper-verbatim}, got '" +
                        form + "'");

    r.slices = cfg.get_int("pulse.slices", r.slices);

    const double b_lo = cfg.get_real("sweep.baseline_min", 1.0);
    const double b_hi = cfg.get_real("sweep.baseline_max", 300.0);
    const int b_n = cfg.get_int("sweep.baseline_points", 40);
    r.plan.baseline_grid = geometric_grid(b_lo, b_hi, b_n);
    const double g_lo = cfg.get_real("sweep.grape_min", 3.0);
    const double g_hi = cfg.get_real("sweep.grape_max", 15.0);
    const double g_step = cfg.get_real("sweep.grape_step", 0.25);
    if (!(g_step > 0.0)) throw ConfigError("sweep.grape_step: expected a positive real");
    r.plan.grape_grid.clear();
    for (double t = g_lo; t <= g_hi + 0.5 * g_step; t += g_step) r.plan.grape_grid.push_back(t);
    const std::string fams =
        cfg.get_string("sweep.families", "rectangular,gaussian-a2,gaussian-a3,grape");
    r.plan.families.clear();
    std::string token;
    std::istringstream fam_stream(fams);
    while (std::getline(fam_stream, token, ',')) r.plan.families.push_back(parse_family(token));
    cfg.finish();
  }
  r.plan.optimizer = r.optimizer;
  r.plan.penalty = r.penalty;
  r.plan.slices = r.slices;
  r.plan.seed = common.seed;
  return r;
}

void echo_config(const Resolved& r) {
  auto rule = r.optimizer.update_rule == UpdateRule::lbfgs ? "lbfgs" : "gradient-ascent";
  auto mode = r.optimizer.gradient_mode == GradientMode::exact ? "exact" : "first-order";
  auto form =
      r.penalty.form == PenaltyConfig::Form::edge_symmetric ? "edge-symmetric" : "paper-verbatim";
  std::cout << "model.delta_omega = " << g(r.model.delta_omega) << "\n"
            << "model.epsilon = " << g(r.model.epsilon) << "\n"
            << "model.coupling_scale = " << g(r.model.coupling_scale) << "\n"
            << "optimizer.max_iterations = " << r.optimizer.max_iterations << "\n"
            << "optimizer.target_error = " << g(r.optimizer.target_error) << "\n"
            << "optimizer.gradient_tolerance = " << g(r.optimizer.gradient_tolerance) << "\n"
            << "optimizer.initial_step = " << g(r.optimizer.initial_step) << "\n"
            << "optimizer.backtracking = " << g(r.optimizer.backtracking) << "\n"
            << "optimizer.growth = " << g(r.optimizer.growth) << "\n"
            << "optimizer.restarts = " << r.optimizer.restarts << "\n"
            << "optimizer.seed = " << r.optimizer.seed << "\n"
            << "optimizer.perturbation_scale = "
            << (r.optimizer.perturbation_scale ? g(*r.optimizer.perturbation_scale)
                                               : std::string("auto"))
            << "\n"
            << "optimizer.update_rule = " << rule << "\n"
            << "optimizer.gradient_mode = " << mode << "\n"
            << "optimizer.lbfgs_memory = " << r.optimizer.lbfgs_memory << "\n"
            << "optimizer.oracle_check = " << (r.optimizer.oracle_check ? "true" : "false") << "\n"
            << "optimizer.oracle_tolerance = " << g(r.optimizer.oracle_tolerance) << "\n"
            << "optimizer.oracle_probes = " << r.optimizer.oracle_probes << "\n"
            << "penalty.enabled = " << (r.penalty.enabled ? "true" : "false") << "\n"
            << "penalty.gamma = " << g(r.penalty.gamma) << "\n"
            << "penalty.t0 = " << g(r.penalty.t0) << "\n"
            << "penalty.form = " << form << "\n"
            << "pulse.slices = " << r.slices << "\n"
            << "preset = " << (r.preset ? r.preset->name : std::string("none")) << "\n";
}

PlotSeries step_series(const ControlPulse& pulse, const std::string& label) {
  PlotSeries s;
  s.label = label;
  const double dt = pulse.dt();
  for (int j = 0; j < pulse.slices(); ++j) {
    s.x.push_back(j * dt);
    s.y.push_back(pulse.amplitudes(j));
    s.x.push_back((j + 1) * dt);
    s.y.push_back(pulse.amplitudes(j));
  }
  return s;
}

void write_pulse_plot(const fs::path& path, const ControlPulse& pulse, const std::string& title) {
  PlotSpec spec;
  spec.title = title;
  spec.x_label = "t  [1/dw]";
  spec.y_label = "lambda(t)  [dw]";
  spec.series = {step_series(pulse, "")};
  write_svg_plot(path.string(), spec);
}

void write_trajectory_plot(const fs::path& path, const Trajectory& traj, const std::string& title) {
  PlotSpec spec;
  spec.title = title;
  spec.x_label = "t  [1/dw]";
  spec.y_label = "population";
  PlotSeries p0{"p0", traj.times, {}}, p1{"p1", traj.times, {}}, pl{"pL", traj.times, {}};
  for (const auto& pops : traj.populations) {
    p0.y.push_back(pops(0));
    p1.y.push_back(pops(1));
    pl.y.push_back(pops(2));
  }
  spec.series = {p0, p1, pl};
  write_svg_plot(path.string(), spec);
}

void report_duration(const char* name, double t, const std::optional<Preset>& preset) {
  std::cout << name << " = " << g(t);
  if (preset) std::cout << "  (" << g(preset->time_to_ns(t)) << " ns, " << preset->name << ")";
  std::cout << "\n";
}

void report_amplitude(const char* name, double amp, const std::optional<Preset>& preset) {
  std::cout << name << " = " << g(amp);
  if (preset)
    std::cout << "  (lambda/2pi = " << g(preset->amplitude_to_ghz(amp)) << " GHz, " << preset->name
              << ")";
  std::cout << "\n";
}

// -------------------------------------------------------------------------
// Commands
// -------------------------------------------------------------------------

int cmd_optimize(const CommonOpts& common, double t_g, bool penalty_flag,
                 std::optional<double> gamma, std::optional<double> t0, std::optional<int> n) {
  Resolved r = resolve(common);
  if (penalty_flag) r.penalty.enabled = true;
  if (gamma) r.penalty.gamma = *gamma;
  if (t0) r.penalty.t0 = *t0;
  if (n) r.slices = *n;
  if (common.echo_config) echo_config(r);

  OptimizationResult res = multi_start(r.model, t_g, r.slices, r.penalty, r.optimizer);
  StateVector ground = StateVector::Zero(3);
  ground(0) = 1.0;
  Trajectory traj = evolve_state(r.model, res.pulse, ground);

  fs::create_directories(common.out);
  const fs::path out(common.out);
  write_pulse_csv(out / "pulse.csv", res.pulse);
  write_trajectory_csv(out / "trajectory.csv", traj);
  write_history_csv(out / "history.csv", res.history);
  write_pulse_plot(out / "pulse.svg", res.pulse, "optimized pulse, t_g = " + g(t_g));
  write_trajectory_plot(out / "trajectory.svg", traj, "populations from |0>");
  PlotSpec conv;
  conv.title = "convergence";
  conv.x_label = "iteration";
  conv.y_label = "1 - objective";
  conv.log_y = true;
  conv.y_min = 1e-10;
  conv.y_max = 1.0;
  PlotSeries hist{"", {}, {}};
  for (const auto& h : res.history) {
    hist.x.push_back(h.iteration);
    hist.y.push_back(std::max(1.0 - h.phi2, 1e-16));
  }
  conv.series = {hist};
  write_svg_plot((out / "convergence.svg").string(), conv);
  write_manifest(out, {"pulse.csv", "trajectory.csv", "history.csv", "pulse.svg", "trajectory.svg",
                       "convergence.svg"});

  report_duration("gate_time", t_g, r.preset);
  std::cout << "gate_error = " << g(res.report.gate_error) << "\n"
            << "phi1_error = " << g(1.0 - res.report.phi1) << "\n";
  if (r.penalty.enabled)
    std::cout << "penalized_objective = " << g(res.report.phi2_penalized) << "\n";
  report_amplitude("peak_amplitude", res.pulse.amplitudes.cwiseAbs().maxCoeff(), r.preset);
  std::cout << "iterations = " << res.iterations << "\n"
            << "converged = " << to_string(res.converged_reason) << "\n"
            << "artifacts = " << common.out << "\n";
  return 0;
}

int cmd_simulate(const CommonOpts& common, const std::string& pulse_path,
                 const std::string& initial) {
  Resolved r = resolve(common);
  if (common.echo_config) echo_config(r);
  int idx = -1;
  if (initial == "0") idx = 0;
  if (initial == "1") idx = 1;
  if (initial == "L" || initial == "l") idx = 2;
  if (idx < 0) throw ConfigError("--initial: expected one of {0, 1, L}, got '" + initial + "'");

  ControlPulse pulse = read_pulse_csv(pulse_path);
  StateVector psi0 = StateVector::Zero(3);
  psi0(idx) = 1.0;
  Trajectory traj = evolve_state(r.model, pulse, psi0);
  const double err = 1.0 - phi2(propagate(r.model, pulse).total, target_not_gate());

  fs::create_directories(common.out);
  const fs::path out(common.out);
  write_trajectory_csv(out / "trajectory.csv", traj);
  write_trajectory_plot(out / "trajectory.svg", traj, "populations from |" + initial + ">");
  write_manifest(out, {"trajectory.csv", "trajectory.svg"});

  const auto& fin = traj.populations.back();
  report_duration("gate_time", pulse.gate_time, r.preset);
  std::cout << "final_p0 = " << g(fin(0)) << "\n"
            << "final_p1 = " << g(fin(1)) << "\n"
            << "final_pL = " << g(fin(2)) << "\n"
            << "gate_error = " << g(err) << "\n"
            << "artifacts = " << common.out << "\n";
  return 0;
}

int cmd_sweep(const CommonOpts& common) {
  Resolved r = resolve(common);
  if (common.echo_config) echo_config(r);
  const std::vector<SweepRecord> records = run_sweep(r.plan, r.model);

  fs::create_directories(common.out);
  const fs::path out(common.out);
  write_sweep_csv(out / "sweep.csv", records);

  PlotSpec spec;
  spec.title = "gate error vs duration";
  spec.x_label = "t_g  [1/dw]";
  spec.y_label = "1 - phi2";
  spec.log_y = true;
  spec.y_min = 1e-10;
  spec.y_max = 1.0;
  for (const auto& family : r.plan.families) {
    PlotSeries s{family.label(), {}, {}};
    for (const auto& rec : records)
      if (rec.family == family.label()) {
        s.x.push_back(rec.t_g);
        s.y.push_back(std::max(rec.error_phi2, 1e-12));
      }
    spec.series.push_back(std::move(s));
  }
  write_svg_plot((out / "sweep.svg").string(), spec);
  write_manifest(out, {"sweep.csv", "sweep.svg"});

  std::cout << "records = " << records.size() << "\n";
  for (const auto& family : r.plan.families) {
    const auto cross = settle_time(records, family.label(), 1e-4);
    std::cout << "settle_1e-4." << family.label() << " = "
              << (cross ? g(*cross) : std::string("none")) << "\n";
  }
  std::cout << "artifacts = " << common.out << "\n";
  return 0;
}

int cmd_fig1(const CommonOpts& common) {
  Resolved r = resolve(common);
  if (common.echo_config) echo_config(r);
  const fs::path out(common.out);
  Fig1Bundle bundle = reproduce_fig1(r.model, r.optimizer, out);

  write_pulse_plot(out / "pulse_a.svg", bundle.panel_a.pulse, "pulse a: t_g = 2 pi");
  write_pulse_plot(out / "pulse_b.svg", bundle.panel_a.pulse, "pulse b (= pulse a)");
  write_pulse_plot(out / "pulse_c.svg", bundle.panel_c.pulse, "pulse c: t_g = 4.5");
  write_pulse_plot(out / "pulse_d.svg", bundle.panel_d.pulse, "pulse d: t_g = 7.0");
  write_pulse_plot(out / "pulse_e.svg", bundle.panel_e.pulse, "pulse e: t_g = 10, penalized");
  write_trajectory_plot(out / "trajectory_b.svg", bundle.panel_b, "populations of pulse a from |0>");
  std::vector<std::string> artifacts = bundle.artifacts;
  for (const char* p : {"pulse_a.svg", "pulse_b.svg", "pulse_c.svg", "pulse_d.svg", "pulse_e.svg",
                        "trajectory_b.svg"})
    artifacts.push_back(p);
  write_manifest(out, artifacts);

  const double t_opt = 2.0 * kPi / r.model.delta_omega;
  report_duration("t_opt", t_opt, r.preset);
  std::cout << "error_a = " << g(bundle.panel_a.report.gate_error) << "\n"
            << "error_c = " << g(bundle.panel_c.report.gate_error) << "\n"
            << "error_d = " << g(bundle.panel_d.report.gate_error) << "\n"
            << "error_e = " << g(bundle.panel_e.report.gate_error) << "\n"
            << "e_start_amplitude = " << g(bundle.panel_e.pulse.amplitudes(0)) << "\n";
  const PeakStats peaks = first_two_peaks(bundle.panel_e.pulse);
  std::cout << "e_first_peak = " << g(peaks.first) << "\n"
            << "e_second_peak = " << g(peaks.second) << "\n"
            << "e_rise_time = " << g(rise_time_to_half_max(bundle.panel_e.pulse)) << "\n"
            << "artifacts = " << common.out << "\n";
  return 0;
}

int cmd_validate_rwa(const CommonOpts& common, std::vector<double> epsilons,
                     const std::string& pulse_path, int substeps_scale) {
  Resolved r = resolve(common);
  if (common.echo_config) echo_config(r);
  if (epsilons.empty()) epsilons = {20.0, 30.0, 50.0};
  std::sort(epsilons.begin(), epsilons.end());

  ControlPulse pulse;
  if (!pulse_path.empty()) {
    pulse = read_pulse_csv(pulse_path);
  } else {
    std::cout << "no --pulse given; optimizing a t_g = 2 pi reference pulse first\n";
    pulse = multi_start(r.model, 2.0 * kPi / r.model.delta_omega, r.slices, PenaltyConfig{},
                        r.optimizer)
                .pulse;
  }
  const RwaReport report = validate_rwa(r.model, pulse, epsilons, substeps_scale);

  fs::create_directories(common.out);
  const fs::path out(common.out);
  {
    std::ofstream csv(out / "rwa.csv");
    if (!csv) throw IoError((out / "rwa.csv").string(), "cannot open for writing");
    csv << "epsilon,drive_infidelity,zero_infidelity\n";
    for (std::size_t i = 0; i < report.epsilons.size(); ++i)
      csv << g(report.epsilons[i]) << "," << g(report.drive_infidelity[i]) << ","
          << g(report.zero_infidelity[i]) << "\n";
  }
  PlotSpec spec;
  spec.title = "lab-frame vs rotating-frame subspace mismatch";
  spec.x_label = "epsilon  [dw]";
  spec.y_label = "1 - phi2";
  spec.log_y = true;
  PlotSeries drive{"driven pulse", report.epsilons, report.drive_infidelity};
  PlotSeries zero{"zero pulse", report.epsilons, {}};
  for (double v : report.zero_infidelity) zero.y.push_back(std::max(v, 1e-16));
  for (auto& v : drive.y) v = std::max(v, 1e-16);
  spec.series = {drive, zero};
  write_svg_plot((out / "rwa.svg").string(), spec);
  write_manifest(out, {"rwa.csv", "rwa.svg"});

  for (std::size_t i = 0; i < report.epsilons.size(); ++i)
    std::cout << "epsilon = " << g(report.epsilons[i])
              << "  drive_infidelity = " << g(report.drive_infidelity[i])
              << "  zero_infidelity = " << g(report.zero_infidelity[i]) << "\n";
  bool monotone = true;
  for (std::size_t i = 0; i + 1 < report.drive_infidelity.size(); ++i)
    if (!(report.drive_infidelity[i + 1] < report.drive_infidelity[i])) monotone = false;
  std::cout << "substeps = " << report.substeps << "\n"
            << "monotone_decrease = " << (monotone ? "yes" : "no") << "\n"
            << "artifacts = " << common.out << "\n";
  return 0;
}

int cmd_composite_study(const CommonOpts& common, double rho_min, double rho_max, int points,
                        double dt_target) {
  Resolved r = resolve(common);
  if (common.echo_config) echo_config(r);
  const auto grid = geometric_grid(rho_min, rho_max, points);
  const CompositeScalingResult res = composite_scaling_study(r.model, grid, dt_target);

  fs::create_directories(common.out);
  const fs::path out(common.out);
  {
    std::ofstream csv(out / "composite.csv");
    if (!csv) throw IoError((out / "composite.csv").string(), "cannot open for writing");
    csv << "rho,composite_error,single_error\n";
    for (std::size_t i = 0; i < res.rho.size(); ++i)
      csv << g(res.rho[i]) << "," << g(res.composite_error[i]) << "," << g(res.single_error[i])
          << "\n";
  }
  PlotSpec spec;
  spec.title = "composite-sequence error scaling";
  spec.x_label = "rho  [dw]";
  spec.y_label = "1 - phi2";
  spec.log_y = true;
  spec.series = {{"composite R/W sequence", res.rho, res.composite_error},
                 {"single weak pulse", res.rho, res.single_error}};
  write_svg_plot((out / "composite.svg").string(), spec);
  write_manifest(out, {"composite.csv", "composite.svg"});

  std::cout << "composite_error_slope = " << g(res.composite_slope) << "\n"
            << "single_amplitude_slope = " << g(res.single_amplitude_slope) << "\n"
            << "composite_error_at_rho_max = " << g(res.composite_error.back()) << "\n"
            << "single_error_at_rho_max = " << g(res.single_error.back()) << "\n"
            << "artifacts = " << common.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "qoct — pulse synthesis and benchmarking for a NOT gate on a qubit with one leakage level.\n"
      "Times are in units of 1/dw (leakage detuning), amplitudes in units of dw."};
  app.require_subcommand(1);

  CommonOpts common;

  auto* optimize = app.add_subcommand(
      "optimize", "Multi-start gradient optimization of a pulse at a fixed gate time");
  double tg = 2.0 * kPi;
  bool penalty_flag = false;
  std::optional<double> gamma_flag, t0_flag;
  std::optional<int> n_flag;
  optimize->add_option("--tg", tg, "Gate time in units of 1/dw")
      ->required()
      ->check(CLI::PositiveNumber);
  optimize->add_flag("--penalty", penalty_flag,
                     "Optimize the amplitude-penalized functional (smooth rise/fall)");
  optimize->add_option("--gamma", gamma_flag, "Penalty strength in units of 1/dw (default 5.0)");
  optimize->add_option("--t0", t0_flag, "Penalty rise-time scale in units of 1/dw (default 0.1)");
  optimize->add_option("--n", n_flag, "Number of pulse slices (default 256)");
  add_common(optimize, common);

  auto* simulate =
      app.add_subcommand("simulate", "Propagate a stored pulse and record populations");
  std::string pulse_path, initial = "0";
  simulate->add_option("--pulse", pulse_path, "Pulse CSV (t_start,lambda)")->required();
  simulate->add_option("--initial", initial, "Initial basis state: 0, 1, or L")
      ->capture_default_str();
  add_common(simulate, common);

  auto* sweep = app.add_subcommand(
      "sweep", "Gate error vs duration across pulse families (defaults: rectangular + "
               "gaussian-a2/a3 on 40 log points in [1, 300], grape on [3, 15] step 0.25, "
               "N = 256, 8 restarts)");
  add_common(sweep, common);
  sweep->add_option("--plan", common.config_path,
                    "Plan file (same key=value format as --config)");

  auto* fig1 = app.add_subcommand(
      "fig1", "Reference scenarios: optimized pulses at t_g = 2 pi, 4.5, 7.0, a penalized pulse "
              "at 10.0, and the 2 pi pulse's population trajectory");
  add_common(fig1, common);

  auto* rwa = app.add_subcommand(
      "validate-rwa", "Lab-frame check of the rotating-wave approximation for a pulse");
  std::vector<double> epsilons;
  std::string rwa_pulse;
  int substeps_scale = 2;
  rwa->add_option("--epsilon", epsilons,
                  "Qubit half-splittings in units of dw (repeatable; default 20 30 50)");
  rwa->add_option("--pulse", rwa_pulse, "Pulse CSV to validate (default: optimize one at 2 pi)");
  rwa->add_option("--substeps-scale", substeps_scale,
                  "Multiplier on the minimum carrier resolution")
      ->capture_default_str();
  add_common(rwa, common);

  auto* composite = app.add_subcommand(
      "composite-study", "Error scaling of the analytic R/W refocusing sequence vs drive strength");
  double rho_min = 0.005, rho_max = 0.05, comp_dt = 0.02;
  int comp_points = 40;
  composite->add_option("--rho-min", rho_min, "Smallest drive amplitude in units of dw")
      ->capture_default_str();
  composite->add_option("--rho-max", rho_max, "Largest drive amplitude in units of dw")
      ->capture_default_str();
  composite->add_option("--points", comp_points, "Geometric grid size")->capture_default_str();
  composite->add_option("--dt", comp_dt, "Slice-length target in units of 1/dw")
      ->capture_default_str();
  add_common(composite, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (optimize->parsed())
      return cmd_optimize(common, tg, penalty_flag, gamma_flag, t0_flag, n_flag);
    if (simulate->parsed()) return cmd_simulate(common, pulse_path, initial);
    if (sweep->parsed()) return cmd_sweep(common);
    if (fig1->parsed()) return cmd_fig1(common);
    if (rwa->parsed()) return cmd_validate_rwa(common, epsilons, rwa_pulse, substeps_scale);
    if (composite->parsed())
      return cmd_composite_study(common, rho_min, rho_max, comp_points, comp_dt);
    std::cerr << "error: no command\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

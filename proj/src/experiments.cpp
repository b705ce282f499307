#include "qoct/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <thread>

#include "qoct/fidelity.hpp"

namespace qoct {
namespace {

constexpr double kPi = 3.14159265358979323846;

double clamp_error(double e) { return std::min(1.0, std::max(0.0, e)); }

void require_increasing(const std::vector<double>& grid, const char* name) {
  if (grid.empty()) throw std::invalid_argument(std::string("SweepPlan: empty ") + name);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] < grid[i + 1]))
      throw std::invalid_argument(std::string("SweepPlan: ") + name + " must be strictly increasing");
}

// Tiny work queue: workers pull point indices from an atomic counter; results
// land in a pre-sized vector indexed by point, so output order is
// deterministic no matter how the points are scheduled.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body) {
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>({workers, static_cast<unsigned>(n), 8u});
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

struct SweepPoint {
  FamilySpec family;
  double t_g = 0.0;
  std::uint64_t seed = 0;
};

SweepRecord evaluate_point(const SweepPoint& pt, const SweepPlan& plan, const ModelParams& params) {
  SweepRecord rec;
  rec.family = pt.family.label();
  rec.t_g = pt.t_g;
  rec.seed = pt.seed;
  const auto t_start = std::chrono::steady_clock::now();
  try {
    const ComplexMatrix u_f = target_not_gate();
    if (pt.family.kind == FamilyKind::grape) {
      OptimizerConfig cfg = plan.optimizer;
      cfg.seed = pt.seed;
      OptimizationResult best = multi_start(params, pt.t_g, plan.slices, plan.penalty, cfg);
      // Additional deterministic starts from the Gaussian baselines: a
      // monotone optimizer seeded at each baseline can only match or beat it,
      // which is what makes the optimized error curve dominate the fixed
      // families at every shared gate time.
      for (double alpha : {2.0, 3.0}) {
        OptimizationResult run =
            grape_optimize(params, gaussian_pulse(pt.t_g, alpha, plan.slices), plan.penalty, cfg);
        if (run.report.phi2_penalized > best.report.phi2_penalized) best = std::move(run);
      }
      rec.error_phi2 = clamp_error(best.report.gate_error);
      rec.error_phi1 = clamp_error(1.0 - best.report.phi1);
      rec.iterations = best.iterations;
    } else {
      ControlPulse pulse = (pt.family.kind == FamilyKind::rectangular)
                               ? rectangular_pulse(pt.t_g, plan.slices)
                               : gaussian_pulse(pt.t_g, pt.family.alpha, plan.slices);
      const ComplexMatrix u = propagate(params, pulse).total;
      rec.error_phi2 = clamp_error(1.0 - phi2(u, u_f));
      rec.error_phi1 = clamp_error(1.0 - phi1(u, u_f));
      rec.iterations = 0;
    }
  } catch (const std::exception& e) {
    rec.error_phi2 = 1.0;
    rec.error_phi1 = 1.0;
    rec.iterations = 0;
    rec.note = e.what();
  }
  rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return rec;
}

}  // namespace

std::string FamilySpec::label() const {
  switch (kind) {
    case FamilyKind::rectangular:
      return "rectangular";
    case FamilyKind::gaussian: {
      char buf[48];
      std::snprintf(buf, sizeof(buf), "gaussian-a%g", alpha);
      return buf;
    }
    case FamilyKind::grape:
      return "grape";
  }
  throw std::logic_error("FamilySpec: unknown kind");
}

void SweepPlan::validate() const {
  if (families.empty()) throw std::invalid_argument("SweepPlan: no families");
  bool needs_baseline = false, needs_grape = false;
  for (const auto& f : families) {
    if (f.kind == FamilyKind::grape)
      needs_grape = true;
    else
      needs_baseline = true;
    if (f.kind == FamilyKind::gaussian && !(f.alpha > 0.0))
      throw std::invalid_argument("SweepPlan: gaussian alpha must be > 0");
  }
  if (needs_baseline) require_increasing(baseline_grid, "baseline grid");
  if (needs_grape) require_increasing(grape_grid, "grape grid");
  if (slices < 1) throw std::invalid_argument("SweepPlan: slices must be >= 1");
  optimizer.validate();
  penalty.validate();
}

SweepPlan default_sweep_plan() {
  SweepPlan plan;
  plan.baseline_grid = geometric_grid(1.0, 300.0, 40);
  for (int k = 0; k <= 48; ++k) plan.grape_grid.push_back(3.0 + 0.25 * k);
  plan.families = {{FamilyKind::rectangular, 0.0},
                   {FamilyKind::gaussian, 2.0},
                   {FamilyKind::gaussian, 3.0},
                   {FamilyKind::grape, 0.0}};
  return plan;
}

std::vector<SweepRecord> run_sweep(const SweepPlan& plan, const ModelParams& params) {
  plan.validate();
  params.validate();

  std::vector<SweepPoint> points;
  std::uint64_t index = 0;
  for (const auto& family : plan.families) {
    const auto& grid = (family.kind == FamilyKind::grape) ? plan.grape_grid : plan.baseline_grid;
    for (double t_g : grid) {
      points.push_back({family, t_g, plan.seed + 1000003ULL * index});
      ++index;
    }
  }

  std::vector<SweepRecord> records(points.size());
  for_each_index(points.size(),
                 [&](std::size_t i) { records[i] = evaluate_point(points[i], plan, params); });
  return records;
}

std::optional<double> settle_time(const std::vector<SweepRecord>& records,
                                  const std::string& family, double threshold) {
  std::vector<std::pair<double, double>> curve;
  for (const auto& r : records)
    if (r.family == family) curve.emplace_back(r.t_g, r.error_phi2);
  std::sort(curve.begin(), curve.end());
  if (curve.empty()) return std::nullopt;
  // Walk backwards through the trailing run of sub-threshold points.
  std::size_t i = curve.size();
  while (i > 0 && curve[i - 1].second < threshold) --i;
  if (i == curve.size()) return std::nullopt;
  return curve[i].first;
}

Fig1Bundle reproduce_fig1(const ModelParams& params, const OptimizerConfig& cfg,
                          const std::filesystem::path& out_dir) {
  params.validate();
  cfg.validate();
  std::filesystem::create_directories(out_dir);

  constexpr int kSlices = 256;
  const PenaltyConfig unconstrained;  // disabled
  PenaltyConfig smooth;
  smooth.enabled = true;
  smooth.gamma = 5.0;
  smooth.t0 = 0.1;

  auto scenario = [&](double t_g, const PenaltyConfig& pen, std::uint64_t seed_shift) {
    OptimizerConfig c = cfg;
    c.seed = cfg.seed + seed_shift;
    return multi_start(params, t_g, kSlices, pen, c);
  };

  Fig1Bundle bundle;
  bundle.panel_a = scenario(2.0 * kPi / params.delta_omega, unconstrained, 0);
  StateVector ground = StateVector::Zero(3);
  ground(0) = 1.0;
  bundle.panel_b = evolve_state(params, bundle.panel_a.pulse, ground);
  bundle.panel_c = scenario(4.5 / params.delta_omega, unconstrained, 1);
  bundle.panel_d = scenario(7.0 / params.delta_omega, unconstrained, 2);
  bundle.panel_e = scenario(10.0 / params.delta_omega, smooth, 3);

  // Panel b is the trajectory of panel a's pulse, so pulse_b duplicates
  // pulse_a: every panel ships with the pulse that produced it.
  write_pulse_csv(out_dir / "pulse_a.csv", bundle.panel_a.pulse);
  write_pulse_csv(out_dir / "pulse_b.csv", bundle.panel_a.pulse);
  write_pulse_csv(out_dir / "pulse_c.csv", bundle.panel_c.pulse);
  write_pulse_csv(out_dir / "pulse_d.csv", bundle.panel_d.pulse);
  write_pulse_csv(out_dir / "pulse_e.csv", bundle.panel_e.pulse);
  write_trajectory_csv(out_dir / "trajectory_b.csv", bundle.panel_b);
  bundle.artifacts = {"pulse_a.csv", "pulse_b.csv",      "pulse_c.csv",
                      "pulse_d.csv", "pulse_e.csv",      "trajectory_b.csv"};
  write_manifest(out_dir, bundle.artifacts);
  return bundle;
}

PeakStats first_two_peaks(const ControlPulse& pulse, double floor) {
  pulse.validate();
  PeakStats stats;
  int found = 0;
  const auto& a = pulse.amplitudes;
  // Ignore sub-5%-of-peak wiggles so converged-pulse noise does not register
  // as a lobe.
  const double cut = std::max(floor, 0.05 * a.cwiseAbs().maxCoeff());
  for (int j = 1; j + 1 < pulse.slices() && found < 2; ++j) {
    const double dl = a(j) - a(j - 1);
    const double dr = a(j + 1) - a(j);
    if (dl * dr < 0.0 && std::abs(a(j)) >= cut) {
      (found == 0 ? stats.first : stats.second) = a(j);
      ++found;
    }
  }
  return stats;
}

double rise_time_to_half_max(const ControlPulse& pulse) {
  pulse.validate();
  const auto& a = pulse.amplitudes;
  const double half = 0.5 * a.cwiseAbs().maxCoeff();
  if (!(half > 0.0)) return 0.0;
  const double dt = pulse.dt();
  for (int j = 0; j < pulse.slices(); ++j) {
    if (std::abs(a(j)) >= half) {
      const double t_j = (j + 0.5) * dt;
      if (j == 0) return t_j;
      const double prev = std::abs(a(j - 1));
      const double frac = (half - prev) / (std::abs(a(j)) - prev);
      return t_j - dt + frac * dt;
    }
  }
  return pulse.gate_time;  // unreachable: the max itself crosses the threshold
}

std::vector<SweepRecord> penalty_sweep(const ModelParams& params, const PenaltyConfig& cfg,
                                       const std::vector<double>& grid,
                                       const OptimizerConfig& optimizer, int slices,
                                       std::uint64_t seed) {
  if (!cfg.enabled) throw std::invalid_argument("penalty_sweep: penalty must be enabled");
  SweepPlan plan;
  plan.grape_grid = grid.empty() ? default_sweep_plan().grape_grid : grid;
  plan.families = {{FamilyKind::grape, 0.0}};
  plan.penalty = cfg;
  plan.optimizer = optimizer;
  plan.slices = slices;
  plan.seed = seed;
  return run_sweep(plan, params);
}

std::vector<double> geometric_grid(double lo, double hi, int n) {
  if (!(lo > 0.0 && hi > lo)) throw std::invalid_argument("geometric_grid: need 0 < lo < hi");
  if (n < 2) throw std::invalid_argument("geometric_grid: need at least 2 points");
  std::vector<double> grid(n);
  const double step = (std::log(hi) - std::log(lo)) / (n - 1);
  for (int i = 0; i < n; ++i) grid[i] = std::exp(std::log(lo) + step * i);
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("log_log_slope: need matching vectors with >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw std::domain_error("log_log_slope: nonpositive sample");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(x.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

CompositeScalingResult composite_scaling_study(const ModelParams& params,
                                               const std::vector<double>& rho_grid,
                                               double dt_target) {
  params.validate();
  if (rho_grid.empty()) throw std::invalid_argument("composite_scaling_study: empty rho grid");
  if (!(dt_target > 0.0)) throw std::invalid_argument("composite_scaling_study: dt_target must be > 0");
  const double dw = params.delta_omega;
  for (double rho : rho_grid)
    if (!(rho >= 0.005 * dw - 1e-12 && rho <= 0.05 * dw + 1e-12))
      throw std::invalid_argument("composite_scaling_study: rho outside [0.005, 0.05] dw");

  const double theta1 = kPi / 8.0;
  const double theta2 = kPi / 4.0;
  const ComplexMatrix u_f = target_not_gate();

  CompositeScalingResult out;
  out.rho = rho_grid;
  std::vector<double> single_amp;
  for (double rho : rho_grid) {
    // Gate time: the two pi-phase waits plus exactly the rotation time.
    const double t_g = composite_min_duration(theta1, theta2, rho, dw);
    const int n = std::max(1, static_cast<int>(std::ceil(t_g / dt_target)));
    const ControlPulse seq = composite_sequence(t_g, theta1, theta2, rho, n, dw);
    out.composite_error.push_back(clamp_error(1.0 - phi2(propagate(params, seq).total, u_f)));

    // Same drive strength without refocusing: a weak rectangular pi/2 pulse.
    const double t_single = (2.0 * theta1 + theta2) / rho;
    const int n_single = std::max(1, static_cast<int>(std::ceil(t_single / dt_target)));
    const ControlPulse single = rectangular_pulse(t_single, n_single);
    const double err = clamp_error(1.0 - phi2(propagate(params, single).total, u_f));
    out.single_error.push_back(err);
    single_amp.push_back(std::sqrt(err));
  }
  out.composite_slope = log_log_slope(out.rho, out.composite_error);
  out.single_amplitude_slope = log_log_slope(out.rho, single_amp);
  return out;
}

RwaReport validate_rwa(const ModelParams& params, const ControlPulse& pulse,
                       const std::vector<double>& epsilons, int substeps_scale) {
  pulse.validate();
  if (epsilons.empty()) throw std::invalid_argument("validate_rwa: no epsilon values");
  if (substeps_scale < 1) throw std::invalid_argument("validate_rwa: substeps_scale must be >= 1");

  ControlPulse zero = pulse;
  zero.amplitudes.setZero();

  RwaReport report;
  report.epsilons = epsilons;
  for (double eps : epsilons) {
    ModelParams p = params;
    p.epsilon = eps;
    p.validate_lab();
    const ComplexMatrix u_rwa = propagate(p, pulse).total;
    const ComplexMatrix u_rwa_zero = propagate(p, zero).total;
    const int substeps = substeps_scale * lab_frame_min_substeps(p, pulse);
    report.substeps = std::max(report.substeps, substeps);
    report.drive_infidelity.push_back(
        clamp_error(1.0 - phi2(propagate_lab_frame(p, pulse, substeps), u_rwa)));
    report.zero_infidelity.push_back(
        clamp_error(1.0 - phi2(propagate_lab_frame(p, zero, substeps), u_rwa_zero)));
  }
  return report;
}

}  // namespace qoct

#ifndef QOCT_EXPERIMENTS_HPP
#define QOCT_EXPERIMENTS_HPP

// ---------------------------------------------------------------------------
// Scripted benchmark studies: the error-vs-duration sweep across pulse
// families, the five reference pulse/trajectory scenarios, the penalized
// sweep with its shifted optimum, the composite-sequence error-scaling study,
// and the lab-frame check of the rotating-wave approximation.
// ---------------------------------------------------------------------------

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qoct/io.hpp"
#include "qoct/model.hpp"
#include "qoct/optimizer.hpp"
#include "qoct/propagation.hpp"
#include "qoct/pulse.hpp"

namespace qoct {

// ---------------------------------------------------------------------------
// Error-vs-duration sweep (families x gate times)
// ---------------------------------------------------------------------------

enum class FamilyKind { rectangular, gaussian, grape };

struct FamilySpec {
  FamilyKind kind = FamilyKind::rectangular;
  double alpha = 2.0;  // gaussian width parameter; ignored otherwise

  // CSV tag: "rectangular", "gaussian-a<alpha>", or "grape".
  std::string label() const;
};

struct SweepPlan {
  // Fixed pulse families are cheap and cover long durations; the optimizer
  // family runs on its own (denser, shorter) grid. Callers wanting a shared
  // grid for family-vs-family comparison set both grids equal.
  std::vector<double> baseline_grid;  // strictly increasing gate times
  std::vector<double> grape_grid;     // strictly increasing gate times
  std::vector<FamilySpec> families;
  PenaltyConfig penalty;  // applies to the grape family when enabled
  OptimizerConfig optimizer;
  int slices = 256;
  std::uint64_t seed = 20260825;

  void validate() const;
};

// Defaults: baselines on 40 log-spaced points in [1, 300]/dw, the optimizer
// family on [3, 15]/dw in steps of 0.25, all four families, no penalty.
SweepPlan default_sweep_plan();

// One record per (family, gate time); per-point failures are recorded as
// error = 1 rows with a diagnostic note instead of aborting the sweep.
// Points run on a small work queue; results are ordered deterministically
// (family-major, then gate time) regardless of scheduling.
std::vector<SweepRecord> run_sweep(const SweepPlan& plan, const ModelParams& params);

// Smallest grid t_g from which the family's error stays below `threshold` for
// every later grid point (an envelope crossing, robust to oscillating error
// curves). Empty optional when the tail never settles below the threshold.
std::optional<double> settle_time(const std::vector<SweepRecord>& records,
                                  const std::string& family, double threshold);

// ---------------------------------------------------------------------------
// Reference scenarios (pulse shapes and a population trajectory)
// ---------------------------------------------------------------------------

struct Fig1Bundle {
  OptimizationResult panel_a;  // t_g = 2 pi, unconstrained
  Trajectory panel_b;          // populations of the panel-a pulse from |0>
  OptimizationResult panel_c;  // t_g = 4.5, unconstrained
  OptimizationResult panel_d;  // t_g = 7.0, unconstrained
  OptimizationResult panel_e;  // t_g = 10.0, penalized (gamma = 5, t0 = 0.1)
  std::vector<std::string> artifacts;  // file names written into out_dir
};

// Runs the five scenarios and writes pulse_a..e.csv, trajectory_b.csv, and a
// manifest into out_dir (created if missing). panel_b shares panel_a's pulse,
// so pulse_b.csv duplicates pulse_a.csv by design.
Fig1Bundle reproduce_fig1(const ModelParams& params, const OptimizerConfig& cfg,
                          const std::filesystem::path& out_dir);

// First two local extrema of the amplitude sequence (in time order) with
// magnitude above max(floor, 5% of the peak); used for coarse pulse-shape
// statistics.
struct PeakStats {
  double first = 0.0;
  double second = 0.0;
};
PeakStats first_two_peaks(const ControlPulse& pulse, double floor = 0.02);

// Time at which |lambda| first reaches half its maximum, linearly
// interpolated between slice midpoints.
double rise_time_to_half_max(const ControlPulse& pulse);

// ---------------------------------------------------------------------------
// Penalized sweep (shifted optimum)
// ---------------------------------------------------------------------------

// Optimizer-family sweep with the penalized functional on `grid` (default
// grape grid when empty). Records report the pure gate error 1 - phi2 of the
// winning pulses; pair with run_sweep on the same grid to compare against the
// unconstrained optimum.
std::vector<SweepRecord> penalty_sweep(const ModelParams& params, const PenaltyConfig& cfg,
                                       const std::vector<double>& grid,
                                       const OptimizerConfig& optimizer, int slices,
                                       std::uint64_t seed);

// ---------------------------------------------------------------------------
// Composite-sequence error scaling
// ---------------------------------------------------------------------------

struct CompositeScalingResult {
  std::vector<double> rho;              // drive amplitudes, units dw
  std::vector<double> composite_error;  // 1 - phi2 of the sliced R/W sequence
  std::vector<double> single_error;     // 1 - phi2 of a rectangular pulse at equal rho
  double composite_slope = 0.0;         // log-log fit of composite_error vs rho
  double single_amplitude_slope = 0.0;  // log-log fit of sqrt(single_error) vs rho
};

// Builds the R(pi/8) W R(pi/4) W R(pi/8) sequence per rho (gate time adjusted
// so rotations plus the fixed 2 pi wait fit exactly), slices it at
// dt <= dt_target, and fits error-scaling exponents. The single-pulse
// comparison measures the error amplitude sqrt(1 - phi2), the first-order
// quantity for an unrefocused pulse.
CompositeScalingResult composite_scaling_study(const ModelParams& params,
                                               const std::vector<double>& rho_grid,
                                               double dt_target = 0.02);

// Geometric grid of n points spanning [lo, hi] inclusive.
std::vector<double> geometric_grid(double lo, double hi, int n);

// Least-squares slope of log(y) against log(x); points with y <= 0 are
// rejected (domain error) rather than skipped.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

// ---------------------------------------------------------------------------
// Rotating-wave-approximation validation
// ---------------------------------------------------------------------------

struct RwaReport {
  std::vector<double> epsilons;          // qubit splittings, units dw
  std::vector<double> drive_infidelity;  // subspace mismatch for the supplied pulse
  std::vector<double> zero_infidelity;   // same for the zero pulse
  int substeps = 0;                      // lab-frame sub-slices per pulse slice
};

// For each epsilon, propagates `pulse` in the lab frame (substeps_scale times
// the minimum carrier resolution), refers the propagator back to the rotating
// frame, and reports the subspace infidelity against the RWA propagator.
RwaReport validate_rwa(const ModelParams& params, const ControlPulse& pulse,
                       const std::vector<double>& epsilons, int substeps_scale = 2);

}  // namespace qoct

#endif  // QOCT_EXPERIMENTS_HPP

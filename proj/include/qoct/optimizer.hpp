#ifndef QOCT_OPTIMIZER_HPP
#define QOCT_OPTIMIZER_HPP

// ---------------------------------------------------------------------------
// GRAPE optimization loop: monotone ascent on phi2 (or the penalized
// functional) over the slice amplitudes, with step-size control, convergence
// criteria, deterministic multi-start, and a gradient-oracle pre-check.
//
// Two update rules share the same analytic gradient:
//   - gradient_ascent: lambda <- lambda + s * g with backtracking on s
//     (shrink on rejection, grow after acceptance); the classic GRAPE update.
//   - lbfgs: a monotone L-BFGS ascent (two-loop recursion, curvature-guarded
//     memory, accept-only-increase backtracking from unit step). This is the
//     default: the plain update stalls around 1e-4..3e-4 gate error at the
//     critical duration t_g = 2 pi, while L-BFGS reaches < 1e-5 there and
//     converges orders of magnitude faster on long pulses.
// ---------------------------------------------------------------------------

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qoct/fidelity.hpp"
#include "qoct/model.hpp"
#include "qoct/pulse.hpp"

namespace qoct {

struct GradientOracleMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonFiniteFunctional : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class UpdateRule { gradient_ascent, lbfgs };
enum class ConvergedReason { target_reached, gradient_small, max_iterations };

std::string to_string(ConvergedReason reason);

struct OptimizerConfig {
  int max_iterations = 5000;
  double target_error = 1e-9;        // stop when the gate error 1 - phi2 <= target_error
                                     // (penalized runs stop on the same physical quantity)
  double gradient_tolerance = 1e-10; // infinity norm
  double initial_step = 1.0;         // gradient_ascent only
  double backtracking = 0.5;         // line-search shrink factor (both rules)
  double growth = 1.2;               // step growth after acceptance (gradient_ascent)
  int restarts = 8;
  std::uint64_t seed = 1234;
  // Additive uniform noise scale for multi-start perturbations; when unset,
  // 0.1 * pi / (2 t_g) (10% of the rectangular-pulse amplitude).
  std::optional<double> perturbation_scale;
  UpdateRule update_rule = UpdateRule::lbfgs;
  GradientMode gradient_mode = GradientMode::exact;
  int lbfgs_memory = 20;
  // Gradient-oracle pre-check at the initial point: central finite differences
  // on up to `oracle_probes` evenly spaced slices must match the analytic
  // gradient within oracle_tolerance, else the run aborts.
  bool oracle_check = true;
  double oracle_tolerance = 1e-6;
  int oracle_probes = 16;

  void validate() const;
};

struct HistoryEntry {
  int iteration = 0;
  double phi2 = 0.0;  // objective value (phi2, or penalized phi2 when active)
  double step = 0.0;  // accepted step length
};

struct OptimizationResult {
  ControlPulse pulse;
  FidelityReport report;
  int iterations = 0;
  ConvergedReason converged_reason = ConvergedReason::max_iterations;
  std::vector<HistoryEntry> history;
};

// One optimization run from the given initial pulse. The objective is phi2,
// or the penalized functional when penalty.enabled.
OptimizationResult grape_optimize(const ModelParams& params, const ControlPulse& initial,
                                  const PenaltyConfig& penalty, const OptimizerConfig& cfg);

// Rectangular initial guess plus (restarts - 1) seeded uniform perturbations;
// returns the best run by objective. Deterministic in (seed, configs).
OptimizationResult multi_start(const ModelParams& params, double t_g, int n_slices,
                               const PenaltyConfig& penalty, const OptimizerConfig& cfg);

// Deterministic perturbed copy of a pulse: amplitudes + scale * U(-1, 1).
ControlPulse perturbed_pulse(const ControlPulse& base, double scale, std::uint64_t seed);

}  // namespace qoct

#endif  // QOCT_OPTIMIZER_HPP

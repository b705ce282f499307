#include <cmath>

#include "doctest.h"
#include "qoct/optimizer.hpp"
#include "qoct/propagation.hpp"

using namespace qoct;

namespace {

constexpr double kPi = 3.141592653589793;

const PenaltyConfig kNoPenalty{};

OptimizerConfig quiet_config() {
  OptimizerConfig cfg;
  cfg.restarts = 1;
  cfg.oracle_check = false;  // exercised by its own test below
  return cfg;
}

}  // namespace

TEST_CASE("configuration validation rejects inconsistent settings") {
  OptimizerConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.max_iterations = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = OptimizerConfig{};
  cfg.backtracking = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = OptimizerConfig{};
  cfg.growth = 0.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = OptimizerConfig{};
  cfg.restarts = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = OptimizerConfig{};
  cfg.lbfgs_memory = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("an already-optimal initial pulse terminates immediately") {
  // With the leakage level decoupled the rectangular pulse is exact, so the
  // run must stop on the target criterion at the first iteration.
  ModelParams params;
  params.coupling_scale = 0.0;
  const ControlPulse rect = rectangular_pulse(4.0, 32);

  for (UpdateRule rule : {UpdateRule::gradient_ascent, UpdateRule::lbfgs}) {
    OptimizerConfig cfg = quiet_config();
    cfg.update_rule = rule;
    const OptimizationResult res = grape_optimize(params, rect, kNoPenalty, cfg);
    CHECK(res.converged_reason == ConvergedReason::target_reached);
    CHECK(res.iterations <= 2);
    CHECK(res.report.gate_error < 1e-10);
  }
}

TEST_CASE("the quasi-Newton rule drives a comfortable duration to the target error") {
  ModelParams params;
  OptimizerConfig cfg = quiet_config();
  cfg.oracle_check = true;
  const OptimizationResult res = multi_start(params, 7.0, 176, kNoPenalty, cfg);
  CHECK(res.converged_reason == ConvergedReason::target_reached);
  CHECK(res.report.gate_error <= 1e-9);
  CHECK(res.iterations <= 50);
}

TEST_CASE("plain gradient ascent increases the objective monotonically") {
  ModelParams params;
  OptimizerConfig cfg = quiet_config();
  cfg.update_rule = UpdateRule::gradient_ascent;
  cfg.max_iterations = 150;
  const ControlPulse rect = rectangular_pulse(2.0 * kPi, 128);
  const OptimizationResult res = grape_optimize(params, rect, kNoPenalty, cfg);

  REQUIRE(res.history.size() >= 2);
  CHECK(res.history.front().iteration == 0);
  for (std::size_t k = 1; k < res.history.size(); ++k) {
    CHECK(res.history[k].phi2 >= res.history[k - 1].phi2 - 1e-15);
  }
  CHECK(res.report.gate_error < 0.05);
  // The best reported pulse can only improve on the initial guess.
  const double initial_phi2 = res.history.front().phi2;
  CHECK(res.report.phi2 >= initial_phi2);
}

TEST_CASE("multi-start is deterministic in the seed") {
  ModelParams params;
  OptimizerConfig cfg = quiet_config();
  cfg.restarts = 3;
  cfg.max_iterations = 60;
  cfg.seed = 777;
  const OptimizationResult a = multi_start(params, 5.5, 64, kNoPenalty, cfg);
  const OptimizationResult b = multi_start(params, 5.5, 64, kNoPenalty, cfg);
  CHECK(a.report.phi2 == b.report.phi2);
  CHECK((a.pulse.amplitudes - b.pulse.amplitudes).cwiseAbs().maxCoeff() == 0.0);

  // The unperturbed start is restart zero, so extra restarts can only help.
  OptimizerConfig single = cfg;
  single.restarts = 1;
  const OptimizationResult c = multi_start(params, 5.5, 64, kNoPenalty, single);
  CHECK(a.report.phi2 >= c.report.phi2);
}

TEST_CASE("perturbed pulses are deterministic and bounded by the scale") {
  const ControlPulse base = rectangular_pulse(5.0, 32);
  const ControlPulse a = perturbed_pulse(base, 0.05, 99);
  const ControlPulse b = perturbed_pulse(base, 0.05, 99);
  CHECK((a.amplitudes - b.amplitudes).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.gate_time == base.gate_time);
  REQUIRE(a.slices() == base.slices());
  CHECK((a.amplitudes - base.amplitudes).cwiseAbs().maxCoeff() <= 0.05);
  CHECK((a.amplitudes - base.amplitudes).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("the gradient oracle pre-check aborts on an impossible tolerance") {
  // Finite-difference probes can never match the analytic gradient to 1e-18,
  // so an absurd tolerance must trip the mismatch guard.
  ModelParams params;
  OptimizerConfig cfg = quiet_config();
  cfg.oracle_check = true;
  cfg.oracle_tolerance = 1e-18;
  const ControlPulse rect = rectangular_pulse(3.0, 16);
  CHECK_THROWS_AS(grape_optimize(params, rect, kNoPenalty, cfg), GradientOracleMismatch);
}

TEST_CASE("penalized runs stop on the physical gate error, not the penalized objective") {
  // The penalty term never reaches zero, so a stopping rule on the penalized
  // functional would spin until max_iterations. Stopping must track 1 - phi2.
  ModelParams params;
  PenaltyConfig penalty;
  penalty.enabled = true;
  penalty.gamma = 5.0;
  penalty.t0 = 0.1;

  OptimizerConfig cfg = quiet_config();
  cfg.oracle_check = true;
  cfg.max_iterations = 800;
  cfg.target_error = 1e-6;
  const OptimizationResult res = multi_start(params, 10.0, 128, penalty, cfg);
  CHECK(res.converged_reason == ConvergedReason::target_reached);
  CHECK(res.report.gate_error <= 1e-6);
  CHECK(res.iterations < cfg.max_iterations);
  CHECK(res.report.phi2_penalized < res.report.phi2);  // the penalty is a real deduction
}

TEST_CASE("convergence reasons have readable names") {
  CHECK(to_string(ConvergedReason::target_reached) == "target_reached");
  CHECK(to_string(ConvergedReason::gradient_small) == "gradient_small");
  CHECK(to_string(ConvergedReason::max_iterations) == "max_iterations");
}

#include "qoct/optimizer.hpp"

#include <cmath>
#include <deque>
#include <numbers>
#include <random>

#include "qoct/propagation.hpp"

namespace qoct {

namespace {

constexpr double kMinStep = 1e-18;

struct Objective {
  const ModelParams& params;
  const PenaltyConfig& penalty;
  ComplexMatrix u_f;

  double value(const ControlPulse& pulse) const {
    const double phi = phi2(propagate(params, pulse).total, u_f);
    const double val = penalty.enabled ? phi - penalty_value(penalty, pulse) : phi;
    if (!std::isfinite(val)) throw NonFiniteFunctional("objective is not finite");
    return val;
  }

  // Pure gate error of a point whose objective value is already known; the
  // penalty term is removed so the stopping rule always watches 1 - phi2.
  double gate_error_of(const ControlPulse& pulse, double objective_value) const {
    const double phi = penalty.enabled ? objective_value + penalty_value(penalty, pulse)
                                       : objective_value;
    return 1.0 - phi;
  }

  // Objective and gradient from a single propagation.
  double value_and_gradient(const ControlPulse& pulse, GradientMode mode,
                            RealVector& grad_out) const {
    const PropagatorStack stack = propagate(params, pulse);
    const double phi = phi2(stack.total, u_f);
    double val = phi;
    if (penalty.enabled) {
      val -= penalty_value(penalty, pulse);
      grad_out = gradient_phi2_penalized(params, pulse, penalty, u_f, stack, mode);
    } else {
      grad_out = gradient_phi2(params, pulse, u_f, stack, mode);
    }
    if (!std::isfinite(val)) throw NonFiniteFunctional("objective is not finite");
    return val;
  }
};

void oracle_precheck(const Objective& obj, const ControlPulse& pulse, const RealVector& analytic,
                     const OptimizerConfig& cfg) {
  const int n = pulse.slices();
  const int probes = std::min(cfg.oracle_probes, n);
  const double h = 1e-6;
  ControlPulse probe = pulse;
  double max_dev = 0.0;
  for (int k = 0; k < probes; ++k) {
    const int j = static_cast<int>((static_cast<double>(k) + 0.5) / probes * n);
    const double lam = pulse.amplitudes(j);
    probe.amplitudes(j) = lam + h;
    const double up = obj.value(probe);
    probe.amplitudes(j) = lam - h;
    const double down = obj.value(probe);
    probe.amplitudes(j) = lam;
    max_dev = std::max(max_dev, std::abs((up - down) / (2.0 * h) - analytic(j)));
  }
  if (max_dev > cfg.oracle_tolerance) {
    throw GradientOracleMismatch("gradient oracle mismatch at initial point: deviation " +
                                 std::to_string(max_dev) + " exceeds " +
                                 std::to_string(cfg.oracle_tolerance));
  }
}

OptimizationResult run_gradient_ascent(const Objective& obj, const ControlPulse& initial,
                                       const OptimizerConfig& cfg) {
  OptimizationResult res;
  ControlPulse x = initial;
  RealVector g;
  double f = obj.value_and_gradient(x, cfg.gradient_mode, g);
  ControlPulse best_x = x;
  double best_f = f;
  res.history.push_back({0, f, 0.0});
  res.converged_reason = ConvergedReason::max_iterations;

  if (cfg.oracle_check) oracle_precheck(obj, x, g, cfg);

  double s = cfg.initial_step;
  int it = 0;
  for (it = 1; it <= cfg.max_iterations; ++it) {
    if (obj.gate_error_of(x, f) <= cfg.target_error) {
      res.converged_reason = ConvergedReason::target_reached;
      break;
    }
    if (g.cwiseAbs().maxCoeff() <= cfg.gradient_tolerance) {
      res.converged_reason = ConvergedReason::gradient_small;
      break;
    }
    bool accepted = false;
    ControlPulse trial = x;
    while (s > kMinStep) {
      trial.amplitudes = x.amplitudes + s * g;
      const double ft = obj.value(trial);
      if (ft > f) {
        x = trial;
        f = obj.value_and_gradient(x, cfg.gradient_mode, g);
        if (f > best_f) {
          best_f = f;
          best_x = x;
        }
        res.history.push_back({it, f, s});
        s *= cfg.growth;
        accepted = true;
        break;
      }
      s *= cfg.backtracking;
    }
    if (!accepted) {
      res.converged_reason = ConvergedReason::gradient_small;
      break;
    }
    if (obj.gate_error_of(x, f) <= cfg.target_error) {
      res.converged_reason = ConvergedReason::target_reached;
      break;
    }
  }
  res.iterations = std::min(it, cfg.max_iterations);
  res.pulse = best_x;
  return res;
}

OptimizationResult run_lbfgs(const Objective& obj, const ControlPulse& initial,
                             const OptimizerConfig& cfg) {
  OptimizationResult res;
  ControlPulse x = initial;
  RealVector g;
  double f = obj.value_and_gradient(x, cfg.gradient_mode, g);
  ControlPulse best_x = x;
  double best_f = f;
  res.history.push_back({0, f, 0.0});
  res.converged_reason = ConvergedReason::max_iterations;

  if (cfg.oracle_check) oracle_precheck(obj, x, g, cfg);

  std::deque<RealVector> mem_s, mem_y;
  int it = 0;
  for (it = 1; it <= cfg.max_iterations; ++it) {
    if (obj.gate_error_of(x, f) <= cfg.target_error) {
      res.converged_reason = ConvergedReason::target_reached;
      break;
    }
    if (g.cwiseAbs().maxCoeff() <= cfg.gradient_tolerance) {
      res.converged_reason = ConvergedReason::gradient_small;
      break;
    }
    // Two-loop recursion on the minimization problem for -f; q starts at -g,
    // d = -q is then an ascent direction for f whenever the memory is sane.
    RealVector q = -g;
    std::vector<double> alphas(mem_s.size());
    for (int k = static_cast<int>(mem_s.size()) - 1; k >= 0; --k) {
      const double rho = 1.0 / mem_y[k].dot(mem_s[k]);
      alphas[k] = rho * mem_s[k].dot(q);
      q -= alphas[k] * mem_y[k];
    }
    if (!mem_s.empty()) {
      q *= mem_s.back().dot(mem_y.back()) / mem_y.back().squaredNorm();
    }
    for (std::size_t k = 0; k < mem_s.size(); ++k) {
      const double rho = 1.0 / mem_y[k].dot(mem_s[k]);
      const double beta = rho * mem_y[k].dot(q);
      q += (alphas[k] - beta) * mem_s[k];
    }
    RealVector d = -q;
    if (d.dot(g) <= 0.0) {  // not an ascent direction: fall back to the gradient
      mem_s.clear();
      mem_y.clear();
      d = g;
    }

    double step = 1.0;
    bool accepted = false;
    ControlPulse trial = x;
    while (step > kMinStep) {
      trial.amplitudes = x.amplitudes + step * d;
      double ft;
      try {
        ft = obj.value(trial);
      } catch (const NonFiniteFunctional&) {
        step *= cfg.backtracking;
        continue;
      }
      if (ft > f) {
        RealVector g_new;
        ft = obj.value_and_gradient(trial, cfg.gradient_mode, g_new);
        mem_s.emplace_back(step * d);
        mem_y.emplace_back(-(g_new - g));  // curvature pairs for the -f problem
        if (static_cast<int>(mem_s.size()) > cfg.lbfgs_memory) {
          mem_s.pop_front();
          mem_y.pop_front();
        }
        if (mem_s.back().dot(mem_y.back()) <= 0.0) {  // reject non-curvature pair
          mem_s.pop_back();
          mem_y.pop_back();
        }
        x = trial;
        f = ft;
        g = g_new;
        if (f > best_f) {
          best_f = f;
          best_x = x;
        }
        res.history.push_back({it, f, step});
        accepted = true;
        break;
      }
      step *= cfg.backtracking;
    }
    if (!accepted) {
      res.converged_reason = ConvergedReason::gradient_small;
      break;
    }
    if (obj.gate_error_of(x, f) <= cfg.target_error) {
      res.converged_reason = ConvergedReason::target_reached;
      break;
    }
  }
  res.iterations = std::min(it, cfg.max_iterations);
  res.pulse = best_x;
  return res;
}

}  // namespace

std::string to_string(ConvergedReason reason) {
  switch (reason) {
    case ConvergedReason::target_reached: return "target_reached";
    case ConvergedReason::gradient_small: return "gradient_small";
    case ConvergedReason::max_iterations: return "max_iterations";
  }
  return "unknown";
}

void OptimizerConfig::validate() const {
  if (max_iterations < 1) throw std::invalid_argument("OptimizerConfig: max_iterations < 1");
  if (!(target_error > 0.0)) throw std::invalid_argument("OptimizerConfig: target_error <= 0");
  if (!(gradient_tolerance > 0.0))
    throw std::invalid_argument("OptimizerConfig: gradient_tolerance <= 0");
  if (!(initial_step > 0.0)) throw std::invalid_argument("OptimizerConfig: initial_step <= 0");
  if (!(backtracking > 0.0 && backtracking < 1.0))
    throw std::invalid_argument("OptimizerConfig: backtracking must be in (0, 1)");
  if (!(growth > 1.0)) throw std::invalid_argument("OptimizerConfig: growth must be > 1");
  if (restarts < 1) throw std::invalid_argument("OptimizerConfig: restarts < 1");
  if (lbfgs_memory < 1) throw std::invalid_argument("OptimizerConfig: lbfgs_memory < 1");
  if (perturbation_scale && !(*perturbation_scale >= 0.0))
    throw std::invalid_argument("OptimizerConfig: perturbation_scale < 0");
}

ControlPulse perturbed_pulse(const ControlPulse& base, double scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ControlPulse out = base;
  for (int j = 0; j < out.slices(); ++j) {
    // Portable uniform double in [0, 1): top 53 bits of the raw draw.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    out.amplitudes(j) += scale * (2.0 * u - 1.0);
  }
  return out;
}

OptimizationResult grape_optimize(const ModelParams& params, const ControlPulse& initial,
                                  const PenaltyConfig& penalty, const OptimizerConfig& cfg) {
  params.validate();
  initial.validate();
  cfg.validate();
  if (penalty.enabled) penalty.validate();
  const Objective obj{params, penalty, target_not_gate()};

  OptimizationResult res = cfg.update_rule == UpdateRule::lbfgs
                               ? run_lbfgs(obj, initial, cfg)
                               : run_gradient_ascent(obj, initial, cfg);
  const PenaltyConfig report_cfg = penalty;
  res.report = fidelity_report(params, res.pulse, report_cfg, target_not_gate(),
                               cfg.gradient_mode);
  return res;
}

OptimizationResult multi_start(const ModelParams& params, double t_g, int n_slices,
                               const PenaltyConfig& penalty, const OptimizerConfig& cfg) {
  cfg.validate();
  const ControlPulse base = rectangular_pulse(t_g, n_slices);
  const double scale =
      cfg.perturbation_scale.value_or(0.1 * std::numbers::pi / (2.0 * t_g));

  std::optional<OptimizationResult> best;
  for (int r = 0; r < cfg.restarts; ++r) {
    const ControlPulse start =
        r == 0 ? base : perturbed_pulse(base, scale, cfg.seed + 1000ULL * static_cast<std::uint64_t>(r));
    OptimizationResult res = grape_optimize(params, start, penalty, cfg);
    const double objective = penalty.enabled ? res.report.phi2_penalized : res.report.phi2;
    const double best_objective =
        best ? (penalty.enabled ? best->report.phi2_penalized : best->report.phi2) : -1.0;
    if (!best || objective > best_objective) best = std::move(res);
    if (best->report.gate_error <= cfg.target_error) break;  // at target; later starts can't help
  }
  return std::move(*best);
}

}  // namespace qoct

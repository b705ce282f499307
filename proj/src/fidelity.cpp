#include "qoct/fidelity.hpp"

#include <cmath>

#include "qoct/detail/eig3.hpp"

namespace qoct {

namespace {

// Qubit-subspace trace of U_F^dag M: z = <0|U_F^dag M|0> + <1|U_F^dag M|1>.
Complex subspace_overlap(const Eigen::Matrix3cd& u_f, const Eigen::Matrix3cd& m) {
  const Eigen::Matrix3cd prod = u_f.adjoint() * m;
  return prod(0, 0) + prod(1, 1);
}

// Exact derivative of exp(-i dt H(lambda)) with respect to lambda, via the
// spectral form: V [ (V^T X V) .* Phi ] V^T with
// Phi_ab = -i dt exp(-i dt (e_a + e_b)/2) sinc(dt (e_a - e_b)/2).
Eigen::Matrix3cd slice_derivative_exact(const detail::Eig3& eig, const Eigen::Matrix3d& x,
                                        double dt) {
  const Eigen::Matrix3d m = eig.evecs.transpose() * x * eig.evecs;
  Eigen::Matrix3cd core;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const double mean = 0.5 * (eig.evals(a) + eig.evals(b));
      const double half_gap = 0.5 * (eig.evals(a) - eig.evals(b));
      const double arg = dt * half_gap;
      const double sinc = std::abs(arg) < 1e-8 ? 1.0 - arg * arg / 6.0 : std::sin(arg) / arg;
      core(a, b) = Complex(0.0, -dt) * std::exp(Complex(0.0, -dt * mean)) * sinc * m(a, b);
    }
  }
  return eig.evecs.cast<Complex>() * core * eig.evecs.transpose().cast<Complex>();
}

RealVector gradient_impl(const ModelParams& params, const ControlPulse& pulse,
                         const ComplexMatrix& u_f, const PropagatorStack& stack,
                         GradientMode mode) {
  const int n = pulse.slices();
  const double dt = pulse.dt();
  const Eigen::Matrix3cd uf3 = u_f;
  const Eigen::Matrix3d x = drive_generator(params).real();
  const Complex z_conj = std::conj(subspace_overlap(uf3, stack.total));

  RealVector grad(n);
  for (int j = 0; j < n; ++j) {
    const Eigen::Matrix3cd b = stack.backward[j];
    Complex dz;
    if (mode == GradientMode::first_order) {
      const Eigen::Matrix3cd f = stack.forward[j];
      dz = Complex(0.0, -dt) * subspace_overlap(uf3, b * x.cast<Complex>() * f);
    } else {
      const Eigen::Matrix3d h = detail::rwa_hamiltonian_real(params.delta_omega,
                                                             params.coupling_scale,
                                                             pulse.amplitudes(j));
      const Eigen::Matrix3cd du = slice_derivative_exact(detail::eig_real_sym(h), x, dt);
      const Eigen::Matrix3cd f_prev =
          j == 0 ? Eigen::Matrix3cd::Identity() : Eigen::Matrix3cd(stack.forward[j - 1]);
      dz = subspace_overlap(uf3, b * du * f_prev);
    }
    grad(j) = 0.5 * std::real(z_conj * dz);
  }
  return grad;
}

}  // namespace

double phi1(const ComplexMatrix& u, const ComplexMatrix& u_f) {
  const Complex tr = (u_f.adjoint() * u).trace();
  return std::norm(tr) / 9.0;
}

double phi2(const ComplexMatrix& u, const ComplexMatrix& u_f) {
  const ComplexMatrix prod = u_f.adjoint() * u;
  return 0.25 * std::norm(prod(0, 0) + prod(1, 1));
}

double penalty_strength(const PenaltyConfig& cfg, double t, double t_g) {
  cfg.validate();
  const double lead = std::tanh(t / cfg.t0);
  const double tail = std::tanh((t_g - t) / cfg.t0);
  const double shape =
      cfg.form == PenaltyConfig::Form::edge_symmetric ? 2.0 - lead - tail : 2.0 - lead + tail;
  return cfg.gamma * shape;
}

double penalty_value(const PenaltyConfig& cfg, const ControlPulse& pulse) {
  if (!cfg.enabled || cfg.gamma == 0.0) return 0.0;
  const double dt = pulse.dt();
  double acc = 0.0;
  for (int j = 0; j < pulse.slices(); ++j) {
    const double t_mid = (j + 0.5) * dt;
    const double lam = pulse.amplitudes(j);
    acc += penalty_strength(cfg, t_mid, pulse.gate_time) * lam * lam * dt;
  }
  return acc;
}

double phi2_penalized(const ModelParams& params, const ControlPulse& pulse,
                      const PenaltyConfig& cfg, const ComplexMatrix& u_f) {
  return phi2(propagate(params, pulse).total, u_f) - penalty_value(cfg, pulse);
}

RealVector gradient_phi2(const ModelParams& params, const ControlPulse& pulse,
                         const ComplexMatrix& u_f, GradientMode mode) {
  return gradient_impl(params, pulse, u_f, propagate(params, pulse), mode);
}

RealVector gradient_phi2(const ModelParams& params, const ControlPulse& pulse,
                         const ComplexMatrix& u_f, const PropagatorStack& stack,
                         GradientMode mode) {
  return gradient_impl(params, pulse, u_f, stack, mode);
}

namespace {

void subtract_penalty_slope(const PenaltyConfig& cfg, const ControlPulse& pulse,
                            RealVector& grad) {
  if (!cfg.enabled || cfg.gamma == 0.0) return;
  const double dt = pulse.dt();
  for (int j = 0; j < pulse.slices(); ++j) {
    const double t_mid = (j + 0.5) * dt;
    grad(j) -= 2.0 * penalty_strength(cfg, t_mid, pulse.gate_time) * pulse.amplitudes(j) * dt;
  }
}

}  // namespace

RealVector gradient_phi2_penalized(const ModelParams& params, const ControlPulse& pulse,
                                   const PenaltyConfig& cfg, const ComplexMatrix& u_f,
                                   GradientMode mode) {
  RealVector grad = gradient_phi2(params, pulse, u_f, mode);
  subtract_penalty_slope(cfg, pulse, grad);
  return grad;
}

RealVector gradient_phi2_penalized(const ModelParams& params, const ControlPulse& pulse,
                                   const PenaltyConfig& cfg, const ComplexMatrix& u_f,
                                   const PropagatorStack& stack, GradientMode mode) {
  RealVector grad = gradient_phi2(params, pulse, u_f, stack, mode);
  subtract_penalty_slope(cfg, pulse, grad);
  return grad;
}

double verify_gradient(const ModelParams& params, const ControlPulse& pulse,
                       const std::optional<PenaltyConfig>& cfg, const ComplexMatrix& u_f, double h,
                       GradientMode mode) {
  if (!(h > 0.0)) throw std::invalid_argument("verify_gradient: step h must be > 0");
  const bool penalized = cfg && cfg->enabled;
  const auto objective = [&](const ControlPulse& p) {
    return penalized ? phi2_penalized(params, p, *cfg, u_f)
                     : phi2(propagate(params, p).total, u_f);
  };
  const RealVector analytic = penalized
                                  ? gradient_phi2_penalized(params, pulse, *cfg, u_f, mode)
                                  : gradient_phi2(params, pulse, u_f, mode);
  double max_dev = 0.0;
  ControlPulse probe = pulse;
  for (int j = 0; j < pulse.slices(); ++j) {
    const double lam = pulse.amplitudes(j);
    probe.amplitudes(j) = lam + h;
    const double up = objective(probe);
    probe.amplitudes(j) = lam - h;
    const double down = objective(probe);
    probe.amplitudes(j) = lam;
    max_dev = std::max(max_dev, std::abs((up - down) / (2.0 * h) - analytic(j)));
  }
  return max_dev;
}

FidelityReport fidelity_report(const ModelParams& params, const ControlPulse& pulse,
                               const PenaltyConfig& cfg, const ComplexMatrix& u_f,
                               GradientMode mode) {
  const PropagatorStack stack = propagate(params, pulse);
  FidelityReport rep;
  rep.phi1 = phi1(stack.total, u_f);
  rep.phi2 = phi2(stack.total, u_f);
  rep.phi2_penalized = rep.phi2 - penalty_value(cfg, pulse);
  rep.gate_error = 1.0 - rep.phi2;
  if (cfg.enabled) {
    rep.gradient = gradient_phi2_penalized(params, pulse, cfg, u_f, stack, mode);
  } else {
    rep.gradient = gradient_phi2(params, pulse, u_f, stack, mode);
  }
  return rep;
}

}  // namespace qoct

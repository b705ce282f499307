#include "qoct/propagation.hpp"

#include <cmath>
#include <numbers>

#include "qoct/detail/eig3.hpp"

namespace qoct {

std::vector<ComplexMatrix> slice_propagators(const ModelParams& params, const ControlPulse& pulse) {
  params.validate();
  pulse.validate();
  const int n = pulse.slices();
  const double dt = pulse.dt();
  std::vector<ComplexMatrix> us;
  us.reserve(n);
  for (int j = 0; j < n; ++j) {
    const Eigen::Matrix3d h = detail::rwa_hamiltonian_real(params.delta_omega,
                                                           params.coupling_scale,
                                                           pulse.amplitudes(j));
    us.emplace_back(detail::expm_from_eig(detail::eig_real_sym(h), dt));
  }
  return us;
}

PropagatorStack propagate(const ModelParams& params, const ControlPulse& pulse) {
  const std::vector<ComplexMatrix> us = slice_propagators(params, pulse);
  const int n = static_cast<int>(us.size());
  PropagatorStack stack;
  stack.forward.resize(n);
  stack.backward.resize(n);

  Eigen::Matrix3cd acc = us[0];
  stack.forward[0] = acc;
  for (int j = 1; j < n; ++j) {
    acc = Eigen::Matrix3cd(us[j]) * acc;
    stack.forward[j] = acc;
  }
  stack.total = stack.forward[n - 1];

  acc = Eigen::Matrix3cd::Identity();
  stack.backward[n - 1] = acc;
  for (int j = n - 2; j >= 0; --j) {
    acc = acc * Eigen::Matrix3cd(us[j + 1]);
    stack.backward[j] = acc;
  }
  return stack;
}

Trajectory evolve_state(const ModelParams& params, const ControlPulse& pulse,
                        const StateVector& psi0) {
  if (psi0.size() != 3) throw DimensionMismatch("evolve_state: state must be three-dimensional");
  if (std::abs(psi0.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("evolve_state: initial state must be normalized");
  }
  const std::vector<ComplexMatrix> us = slice_propagators(params, pulse);
  const double dt = pulse.dt();

  Trajectory traj;
  traj.times.reserve(us.size() + 1);
  traj.populations.reserve(us.size() + 1);
  Eigen::Vector3cd psi = psi0;
  traj.times.push_back(0.0);
  traj.populations.emplace_back(psi.cwiseAbs2().real());
  for (std::size_t j = 0; j < us.size(); ++j) {
    psi = Eigen::Matrix3cd(us[j]) * psi;
    traj.times.push_back((static_cast<double>(j) + 1.0) * dt);
    traj.populations.emplace_back(psi.cwiseAbs2().real());
  }
  return traj;
}

int lab_frame_min_substeps(const ModelParams& params, const ControlPulse& pulse) {
  return static_cast<int>(std::ceil(40.0 * params.epsilon * pulse.dt() / std::numbers::pi));
}

ComplexMatrix propagate_lab_frame(const ModelParams& params, const ControlPulse& pulse,
                                  int substeps) {
  params.validate_lab();
  pulse.validate();
  const int floor_steps = lab_frame_min_substeps(params, pulse);
  if (substeps < floor_steps) {
    throw InsufficientResolution("propagate_lab_frame: need at least " +
                                 std::to_string(floor_steps) + " substeps per slice, got " +
                                 std::to_string(substeps));
  }
  const double dt = pulse.dt();
  const double sub_dt = dt / substeps;
  const double e_l = 3.0 * params.epsilon - params.delta_omega;
  const double sq2 = params.coupling_scale * std::sqrt(2.0);

  Eigen::Matrix3cd u = Eigen::Matrix3cd::Identity();
  for (int j = 0; j < pulse.slices(); ++j) {
    const double lambda = pulse.amplitudes(j);
    for (int s = 0; s < substeps; ++s) {
      const double t_mid = j * dt + (s + 0.5) * sub_dt;
      const double delta = 2.0 * lambda * std::cos(2.0 * params.epsilon * t_mid);
      Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
      h(0, 0) = -params.epsilon;
      h(1, 1) = params.epsilon;
      h(2, 2) = e_l;
      h(0, 1) = h(1, 0) = delta;
      h(1, 2) = h(2, 1) = sq2 * delta;
      u = detail::expm_from_eig(detail::eig_real_sym(h), sub_dt) * u;
    }
  }
  return rotating_frame_transform(params, pulse.gate_time).adjoint() * u;
}

}  // namespace qoct

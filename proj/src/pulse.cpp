#include "qoct/pulse.hpp"

#include <cmath>
#include <numbers>

namespace qoct {

namespace {

// Average of a piecewise-constant envelope over each slice of a uniform grid:
// amplitudes_j = (1/dt) * integral of the envelope over slice j. Interior
// slices keep their exact amplitude; slices straddling a segment boundary get
// the area-preserving average, so the total area is conserved.
Eigen::VectorXd project_segments(const std::vector<PulseSegment>& segments, double t_g,
                                 int n_slices) {
  const double dt = t_g / n_slices;
  Eigen::VectorXd amps = Eigen::VectorXd::Zero(n_slices);
  double seg_start = 0.0;
  for (const PulseSegment& seg : segments) {
    const double seg_end = seg_start + seg.duration;
    if (seg.amplitude != 0.0) {
      const int j_lo = std::max(0, static_cast<int>(std::floor(seg_start / dt)));
      const int j_hi = std::min(n_slices - 1, static_cast<int>(std::floor((seg_end - 1e-15 * t_g) / dt)));
      for (int j = j_lo; j <= j_hi; ++j) {
        const double lo = std::max(seg_start, j * dt);
        const double hi = std::min(seg_end, (j + 1) * dt);
        if (hi > lo) amps(j) += seg.amplitude * (hi - lo) / dt;
      }
    }
    seg_start = seg_end;
  }
  return amps;
}

}  // namespace

ControlPulse rectangular_pulse(double t_g, int n_slices) {
  if (!(t_g > 0.0)) throw std::invalid_argument("rectangular_pulse: t_g must be > 0");
  if (n_slices < 1) throw std::invalid_argument("rectangular_pulse: need at least one slice");
  ControlPulse p;
  p.gate_time = t_g;
  p.amplitudes = Eigen::VectorXd::Constant(n_slices, std::numbers::pi / (2.0 * t_g));
  return p;
}

ControlPulse gaussian_pulse(double t_g, double alpha, int n_slices, bool renormalize) {
  if (!(t_g > 0.0)) throw std::invalid_argument("gaussian_pulse: t_g must be > 0");
  if (!(alpha > 0.0)) throw std::invalid_argument("gaussian_pulse: alpha must be > 0");
  if (n_slices < 1) throw std::invalid_argument("gaussian_pulse: need at least one slice");
  ControlPulse p;
  p.gate_time = t_g;
  p.amplitudes.resize(n_slices);
  const double dt = t_g / n_slices;
  const double peak = (alpha / t_g) * std::sqrt(std::numbers::pi / 2.0);
  for (int j = 0; j < n_slices; ++j) {
    const double t_mid = (j + 0.5) * dt;
    const double arg = (alpha / t_g) * (t_mid - t_g / 2.0);
    p.amplitudes(j) = peak * std::exp(-arg * arg);
  }
  if (renormalize) {
    p.amplitudes *= (std::numbers::pi / 2.0) / p.area();
  }
  return p;
}

std::vector<PulseSegment> composite_layout(double theta1, double theta2, double rho,
                                           double delta_omega) {
  constexpr double kAngleTol = 1e-12;
  if (!(rho > 0.0)) throw std::invalid_argument("composite_layout: rho must be > 0");
  if (std::abs(2.0 * theta1 + theta2 - std::numbers::pi / 2.0) > kAngleTol) {
    throw std::invalid_argument("composite_layout: angles must satisfy 2*theta1 + theta2 = pi/2");
  }
  const double wait = std::numbers::pi / delta_omega;
  return {{rho, theta1 / rho}, {0.0, wait}, {rho, theta2 / rho}, {0.0, wait}, {rho, theta1 / rho}};
}

double composite_min_duration(double theta1, double theta2, double rho, double delta_omega) {
  double total = 0.0;
  for (const PulseSegment& seg : composite_layout(theta1, theta2, rho, delta_omega)) {
    total += seg.duration;
  }
  return total;
}

ControlPulse composite_sequence(double t_g, double theta1, double theta2, double rho, int n_slices,
                                double delta_omega) {
  const std::vector<PulseSegment> layout = composite_layout(theta1, theta2, rho, delta_omega);
  const double t_min = composite_min_duration(theta1, theta2, rho, delta_omega);
  if (t_g < t_min * (1.0 - 1e-12)) {
    throw InfeasibleDuration("composite_sequence: t_g = " + std::to_string(t_g) +
                             " is shorter than the layout duration " + std::to_string(t_min));
  }
  if (n_slices < 1) throw std::invalid_argument("composite_sequence: need at least one slice");
  ControlPulse p;
  p.gate_time = t_g;
  p.amplitudes = project_segments(layout, t_g, n_slices);
  return p;
}

ControlPulse resample(const ControlPulse& pulse, int n_slices_new) {
  pulse.validate();
  if (n_slices_new < 1) throw std::invalid_argument("resample: need at least one slice");
  std::vector<PulseSegment> segments(pulse.slices());
  const double dt = pulse.dt();
  for (int j = 0; j < pulse.slices(); ++j) {
    segments[j] = {pulse.amplitudes(j), dt};
  }
  ControlPulse out;
  out.gate_time = pulse.gate_time;
  out.amplitudes = project_segments(segments, pulse.gate_time, n_slices_new);
  return out;
}

ComplexMatrix free_evolution_check(const ModelParams& params) {
  return expm_hermitian(rwa_hamiltonian(params, 0.0), std::numbers::pi / params.delta_omega);
}

}  // namespace qoct

#ifndef QOCT_PULSE_HPP
#define QOCT_PULSE_HPP

// ---------------------------------------------------------------------------
// Piecewise-constant control pulses and the reference pulse families:
// rectangular pi/2 pulse, Gaussian, and the composite R/W refocusing sequence
// (three weak rotations separated by two pi-phase free-evolution windows).
// ---------------------------------------------------------------------------

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "qoct/linalg.hpp"
#include "qoct/model.hpp"

namespace qoct {

struct InfeasibleDuration : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ControlPulse {
  double gate_time = 0.0;        // t_g, units 1/dw
  Eigen::VectorXd amplitudes;    // lambda_j, units dw; N = amplitudes.size()

  int slices() const { return static_cast<int>(amplitudes.size()); }
  double dt() const { return gate_time / static_cast<double>(slices()); }
  // Discrete pulse area sum_j lambda_j * dt; pi/2 for a NOT-gate pulse.
  double area() const { return amplitudes.sum() * dt(); }

  void validate() const {
    if (!(gate_time > 0.0)) throw std::invalid_argument("ControlPulse: gate_time must be > 0");
    if (slices() < 1) throw std::invalid_argument("ControlPulse: need at least one slice");
    if (!amplitudes.allFinite()) throw std::invalid_argument("ControlPulse: non-finite amplitude");
  }
};

// One constant-amplitude span of an ideal (un-sliced) envelope.
struct PulseSegment {
  double amplitude = 0.0;
  double duration = 0.0;
};

// Constant amplitude pi/(2 t_g) on all slices; total area exactly pi/2.
ControlPulse rectangular_pulse(double t_g, int n_slices);

// lambda(t) = (alpha/t_g) sqrt(pi/2) exp(-alpha^2/t_g^2 (t - t_g/2)^2) sampled
// at slice midpoints. With renormalize (default), amplitudes are rescaled so
// the discrete area is exactly pi/2; without it the formula is used verbatim
// (whose full-line area is pi/sqrt(2), not pi/2).
ControlPulse gaussian_pulse(double t_g, double alpha, int n_slices, bool renormalize = true);

// Ideal segment layout R(theta1) W(pi/dw) R(theta2) W(pi/dw) R(theta1):
// constant-amplitude rho rotations of durations theta_i/rho separated by two
// zero-amplitude windows of duration pi/dw. Requires 2*theta1 + theta2 = pi/2.
std::vector<PulseSegment> composite_layout(double theta1, double theta2, double rho,
                                           double delta_omega = 1.0);

// Minimal gate time that fits the composite layout.
double composite_min_duration(double theta1, double theta2, double rho, double delta_omega = 1.0);

// The layout above projected onto a uniform N-slice grid over [0, t_g] with
// area-preserving averaging on boundary slices; any surplus duration beyond
// the layout is zero-amplitude tail. Throws InfeasibleDuration if t_g is too
// short for the requested rho.
ControlPulse composite_sequence(double t_g, double theta1, double theta2, double rho, int n_slices,
                                double delta_omega = 1.0);

// Area-weighted resampling onto a new uniform grid; preserves total area to
// rounding error.
ControlPulse resample(const ControlPulse& pulse, int n_slices_new);

// Propagator of zero-drive evolution for t = pi/dw; equals diag(1, 1, -1):
// identity on the qubit subspace, pi phase shift on the leakage level.
ComplexMatrix free_evolution_check(const ModelParams& params);

}  // namespace qoct

#endif  // QOCT_PULSE_HPP

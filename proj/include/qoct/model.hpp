#ifndef QOCT_MODEL_HPP
#define QOCT_MODEL_HPP

// ---------------------------------------------------------------------------
// Physical system definition: a qubit (|0>, |1>) plus one weakly off-resonant
// leakage level |L>, driven by a single real envelope.
//
// Basis ordering is fixed everywhere: index 0 -> |0>, 1 -> |1>, 2 -> |L>.
// Qubit Paulis: sigma_z = |1><1| - |0><0|, sigma_x = |1><0| + |0><1|.
//
// Rotating-frame (primary) Hamiltonian:
//   H(lambda) = -dw |L><L| + lambda sigma_x
//               + coupling_scale * sqrt(2) * lambda (|1><L| + |L><1|)
// with dw the leakage detuning. Real symmetric in this basis.
//
// Lab-frame Hamiltonian (validation path only):
//   H_lab(t) = eps sigma_z + delta(t) sigma_x + E_L |L><L|
//              + coupling_scale * sqrt(2) * delta(t) (|1><L| + |L><1|)
// with E_L = 3 eps - dw, carrier delta(t) = Lambda(t) cos(2 eps t), and
// Lambda(t) = 2 lambda(t) so that the textbook rotating-wave reduction of the
// lab frame reproduces the rotating-frame drive coefficient exactly.
// ---------------------------------------------------------------------------

#include <cmath>
#include <stdexcept>

#include "qoct/linalg.hpp"

namespace qoct {

struct ModelParams {
  double delta_omega = 1.0;    // leakage detuning dw (> 0); the unit of frequency
  double epsilon = 30.0;       // qubit half-splitting, lab-frame checks only
  double coupling_scale = 1.0; // multiplier on the sqrt(2) leakage element; 0 decouples |L>

  void validate() const {
    if (!(delta_omega > 0.0)) throw std::invalid_argument("ModelParams: delta_omega must be > 0");
    if (!(coupling_scale >= 0.0 && coupling_scale <= 1.0))
      throw std::invalid_argument("ModelParams: coupling_scale must be in [0, 1]");
  }
  void validate_lab() const {
    validate();
    if (!(epsilon > 0.0)) throw std::invalid_argument("ModelParams: epsilon must be > 0");
  }
};

// H(lambda) in the rotating frame; real symmetric 3x3.
inline ComplexMatrix rwa_hamiltonian(const ModelParams& p, double lambda) {
  p.validate();
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(2, 2) = -p.delta_omega;
  h(0, 1) = h(1, 0) = lambda;
  const double leak = p.coupling_scale * std::sqrt(2.0) * lambda;
  h(1, 2) = h(2, 1) = leak;
  return h;
}

// dH/dlambda: the control generator, independent of lambda.
inline ComplexMatrix drive_generator(const ModelParams& p) {
  p.validate();
  ComplexMatrix x = ComplexMatrix::Zero(3, 3);
  x(0, 1) = x(1, 0) = 1.0;
  const double leak = p.coupling_scale * std::sqrt(2.0);
  x(1, 2) = x(2, 1) = leak;
  return x;
}

// Target NOT gate |L><L| + sigma_x with both free phases set to zero; the
// fidelity functionals are invariant to those phases by construction.
inline ComplexMatrix target_not_gate() {
  ComplexMatrix u = ComplexMatrix::Zero(3, 3);
  u(0, 1) = u(1, 0) = 1.0;
  u(2, 2) = 1.0;
  return u;
}

// Lab-frame H at absolute time t for envelope value lambda.
inline ComplexMatrix lab_hamiltonian(const ModelParams& p, double lambda, double t) {
  p.validate_lab();
  const double e_l = 3.0 * p.epsilon - p.delta_omega;
  const double delta = 2.0 * lambda * std::cos(2.0 * p.epsilon * t);
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(0, 0) = -p.epsilon;
  h(1, 1) = p.epsilon;
  h(2, 2) = e_l;
  h(0, 1) = h(1, 0) = delta;
  const double leak = p.coupling_scale * std::sqrt(2.0) * delta;
  h(1, 2) = h(2, 1) = leak;
  return h;
}

// V(t) = exp(-i t D), D = diag(-eps, eps, 3 eps): the frame in which the
// rotating-frame Hamiltonian lives. H_R = V^dag H_lab V - D up to terms
// oscillating at 4 eps.
inline ComplexMatrix rotating_frame_transform(const ModelParams& p, double t) {
  p.validate_lab();
  ComplexMatrix v = ComplexMatrix::Zero(3, 3);
  v(0, 0) = std::exp(Complex(0.0, p.epsilon * t));
  v(1, 1) = std::exp(Complex(0.0, -p.epsilon * t));
  v(2, 2) = std::exp(Complex(0.0, -3.0 * p.epsilon * t));
  return v;
}

}  // namespace qoct

#endif  // QOCT_MODEL_HPP

#ifndef QOCT_PROPAGATION_HPP
#define QOCT_PROPAGATION_HPP

// ---------------------------------------------------------------------------
// Piecewise-constant time evolution: per-slice propagators, cumulative
// forward/backward stacks for gradient evaluation, population trajectories,
// and the sub-sliced lab-frame path used to validate the rotating-wave
// approximation.
// ---------------------------------------------------------------------------

#include <vector>

#include "qoct/linalg.hpp"
#include "qoct/model.hpp"
#include "qoct/pulse.hpp"

namespace qoct {

struct InsufficientResolution : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct PropagatorStack {
  // forward[j] = U_{j+1} ... U_1 (0-based j), so forward.back() == total.
  std::vector<ComplexMatrix> forward;
  // backward[j] = U_N ... U_{j+2}, so backward[j] * U_{j+1} * forward[j-1] == total
  // and backward.back() == identity.
  std::vector<ComplexMatrix> backward;
  ComplexMatrix total;
};

struct Trajectory {
  std::vector<double> times;                    // N + 1 slice-boundary times
  std::vector<Eigen::Vector3d> populations;     // (p0, p1, pL) per time point
};

// Per-slice propagator exp(-i dt H(lambda_j)) for every slice.
std::vector<ComplexMatrix> slice_propagators(const ModelParams& params, const ControlPulse& pulse);

// Forward/backward cumulative products and the total gate propagator.
PropagatorStack propagate(const ModelParams& params, const ControlPulse& pulse);

// Populations of |0>, |1>, |L> after each slice, starting from psi0.
Trajectory evolve_state(const ModelParams& params, const ControlPulse& pulse,
                        const StateVector& psi0);

// Lab-frame evolution with `substeps` midpoint-sampled sub-slices per pulse
// slice, referred back through the rotating frame: returns V(t_g)^dag U_lab.
// Throws InsufficientResolution unless substeps >= ceil(40 eps dt / pi),
// i.e. at least 20 sub-slices per carrier period.
ComplexMatrix propagate_lab_frame(const ModelParams& params, const ControlPulse& pulse,
                                  int substeps);

int lab_frame_min_substeps(const ModelParams& params, const ControlPulse& pulse);

}  // namespace qoct

#endif  // QOCT_PROPAGATION_HPP

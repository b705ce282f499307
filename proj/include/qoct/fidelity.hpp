#ifndef QOCT_FIDELITY_HPP
#define QOCT_FIDELITY_HPP

// ---------------------------------------------------------------------------
// Gate fidelity functionals and their gradients.
//
//   phi1 = (1/9) |tr(U_F^dag U)|^2           (global-phase insensitive)
//   phi2 = (1/4) |<0|U_F^dag U|0> + <1|U_F^dag U|1>|^2
//                                             (leakage-phase insensitive)
//   phi2_penalized = phi2 - sum_j gamma_A(t_j) lambda_j^2 dt
//
// The gradient of phi2 comes in two flavors: the first-order form
// dU_j/dlambda_j ~ -i dt X U_j (the classic GRAPE update, default for
// reporting), and the exact spectral Frechet derivative of the slice
// exponential. Both are validated against central finite differences.
// ---------------------------------------------------------------------------

#include <optional>

#include "qoct/linalg.hpp"
#include "qoct/model.hpp"
#include "qoct/propagation.hpp"
#include "qoct/pulse.hpp"

namespace qoct {

enum class GradientMode { first_order, exact };

struct PenaltyConfig {
  enum class Form { edge_symmetric, paper_verbatim };
  double gamma = 5.0;  // overall strength, units 1/dw
  double t0 = 0.1;     // rise-time scale, units 1/dw
  bool enabled = false;
  Form form = Form::edge_symmetric;

  void validate() const {
    if (!(gamma >= 0.0)) throw std::invalid_argument("PenaltyConfig: gamma must be >= 0");
    if (!(t0 > 0.0)) throw std::invalid_argument("PenaltyConfig: t0 must be > 0");
  }
};

struct FidelityReport {
  double phi1 = 0.0;
  double phi2 = 0.0;
  double phi2_penalized = 0.0;  // equals phi2 when the penalty is disabled
  double gate_error = 1.0;      // 1 - phi2
  RealVector gradient;          // d(objective)/d lambda_j for the active functional
};

double phi1(const ComplexMatrix& u, const ComplexMatrix& u_f);
double phi2(const ComplexMatrix& u, const ComplexMatrix& u_f);

// Time-dependent penalty strength gamma_A(t). The edge-symmetric form
// gamma (2 - tanh(t/t0) - tanh((t_g - t)/t0)) suppresses amplitude near both
// pulse edges; the paper-verbatim form gamma (2 - tanh(t/t0) + tanh((t_g - t)/t0))
// weights the edges asymmetrically (~3 gamma at t = 0, ~gamma at t = t_g) over
// a ~2 gamma interior plateau.
double penalty_strength(const PenaltyConfig& cfg, double t, double t_g);

// Discrete penalty term sum_j gamma_A(t_j^mid) lambda_j^2 dt.
double penalty_value(const PenaltyConfig& cfg, const ControlPulse& pulse);

double phi2_penalized(const ModelParams& params, const ControlPulse& pulse,
                      const PenaltyConfig& cfg, const ComplexMatrix& u_f);

// Gradient of phi2 with respect to the slice amplitudes. When a stack for
// this exact pulse is already available, pass it to avoid re-propagating.
RealVector gradient_phi2(const ModelParams& params, const ControlPulse& pulse,
                         const ComplexMatrix& u_f, GradientMode mode = GradientMode::first_order);
RealVector gradient_phi2(const ModelParams& params, const ControlPulse& pulse,
                         const ComplexMatrix& u_f, const PropagatorStack& stack,
                         GradientMode mode);

// Gradient of the penalized functional: gradient_phi2 minus 2 gamma_A lambda_j dt.
RealVector gradient_phi2_penalized(const ModelParams& params, const ControlPulse& pulse,
                                   const PenaltyConfig& cfg, const ComplexMatrix& u_f,
                                   GradientMode mode = GradientMode::first_order);
RealVector gradient_phi2_penalized(const ModelParams& params, const ControlPulse& pulse,
                                   const PenaltyConfig& cfg, const ComplexMatrix& u_f,
                                   const PropagatorStack& stack, GradientMode mode);

// Max absolute deviation between the analytic gradient and a central
// finite-difference gradient with step h. The penalty applies when
// cfg && cfg->enabled.
double verify_gradient(const ModelParams& params, const ControlPulse& pulse,
                       const std::optional<PenaltyConfig>& cfg, const ComplexMatrix& u_f, double h,
                       GradientMode mode = GradientMode::first_order);

// Full evaluation bundle for one pulse; gradient is that of the active
// functional (penalized when cfg.enabled).
FidelityReport fidelity_report(const ModelParams& params, const ControlPulse& pulse,
                               const PenaltyConfig& cfg, const ComplexMatrix& u_f,
                               GradientMode mode = GradientMode::first_order);

}  // namespace qoct

#endif  // QOCT_FIDELITY_HPP

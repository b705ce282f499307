#ifndef QOCT_PRESETS_HPP
#define QOCT_PRESETS_HPP

// ---------------------------------------------------------------------------
// Device presets mapping the dimensionless toolkit units onto physical
// hardware: times are in 1/dw, so t_phys = t / (2 pi f_detuning) with the
// detuning frequency in GHz giving times in nanoseconds; amplitudes are in
// units of dw, so lambda/2pi in GHz is lambda * f_detuning.
// ---------------------------------------------------------------------------

#include <optional>
#include <stdexcept>
#include <string>

namespace qoct {

struct NoPreset : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Preset {
  std::string name;
  double f_detuning_ghz = 0.0;  // leakage detuning dw / 2pi in GHz

  // Natural time (units 1/dw) to nanoseconds.
  double time_to_ns(double t_natural) const { return t_natural / (2.0 * 3.141592653589793 * f_detuning_ghz); }
  // Amplitude (units dw) to a drive frequency lambda/2pi in GHz.
  double amplitude_to_ghz(double lambda_natural) const { return lambda_natural * f_detuning_ghz; }
};

// Known presets: "phase-qubit" (0.2 GHz detuning) and "transmon" (0.455 GHz).
Preset lookup_preset(const std::string& name);

std::optional<Preset> try_lookup_preset(const std::string& name);

}  // namespace qoct

#endif  // QOCT_PRESETS_HPP

#include "qoct/presets.hpp"

namespace qoct {

std::optional<Preset> try_lookup_preset(const std::string& name) {
  if (name == "phase-qubit") return Preset{name, 0.2};
  if (name == "transmon") return Preset{name, 0.455};
  return std::nullopt;
}

Preset lookup_preset(const std::string& name) {
  auto p = try_lookup_preset(name);
  if (!p) throw NoPreset("unknown device preset: '" + name + "' (known: phase-qubit, transmon)");
  return *p;
}

}  // namespace qoct

#ifndef QOCT_IO_HPP
#define QOCT_IO_HPP

// ---------------------------------------------------------------------------
// CSV emission/parsing, key=value config files, and run-directory manifests.
//
// CSV schemas (all numeric fields written with 15 significant digits so that
// read-back reproduces in-memory values):
//   pulse:      t_start,lambda
//   trajectory: t,p0,p1,pL
//   history:    iteration,phi2,step
//   sweep:      family,t_g,seed,error_phi2,error_phi1,iterations,wall_time_s
// ---------------------------------------------------------------------------

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "qoct/optimizer.hpp"
#include "qoct/propagation.hpp"
#include "qoct/pulse.hpp"

namespace qoct {

struct IoError : std::runtime_error {
  explicit IoError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what) {}
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SweepRecord {
  std::string family;
  double t_g = 0.0;
  std::uint64_t seed = 0;
  double error_phi2 = 1.0;
  double error_phi1 = 1.0;
  int iterations = 0;
  double wall_time_s = 0.0;
  std::string note;  // diagnostic for failed points; not part of the CSV schema
};

void write_pulse_csv(const std::filesystem::path& path, const ControlPulse& pulse);
ControlPulse read_pulse_csv(const std::filesystem::path& path);

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);
void write_history_csv(const std::filesystem::path& path,
                       const std::vector<HistoryEntry>& history);
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRecord>& records);

// Plain-text manifest: one artifact path per line, relative to the directory.
void write_manifest(const std::filesystem::path& dir, const std::vector<std::string>& artifacts);

// Key = value configuration file: '#' comments, blank lines ignored.
// Returns insertion-ordered pairs; duplicate keys are a ConfigError.
std::vector<std::pair<std::string, std::string>> read_key_value_file(
    const std::filesystem::path& path);

// Typed accessors over a parsed key=value set. Every lookup consumes the key;
// unconsumed keys at the end are hard errors (no silent ignoring).
class ConfigMap {
 public:
  explicit ConfigMap(std::vector<std::pair<std::string, std::string>> entries);

  bool contains(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback);
  double get_real(const std::string& key, double fallback);
  int get_int(const std::string& key, int fallback);
  std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback);
  bool get_bool(const std::string& key, bool fallback);

  // Throws ConfigError listing every unconsumed key.
  void finish() const;

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, bool> consumed_;
};

}  // namespace qoct

#endif  // QOCT_IO_HPP

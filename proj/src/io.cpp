#include "qoct/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qoct {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  return out;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  return fields;
}

double parse_real(const std::string& text, const std::string& context) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(context + ": expected real number, got '" + text + "'");
  }
}

}  // namespace

void write_pulse_csv(const std::filesystem::path& path, const ControlPulse& pulse) {
  pulse.validate();
  std::ofstream out = open_out(path);
  out << "t_start,lambda\n";
  const double dt = pulse.dt();
  for (int j = 0; j < pulse.slices(); ++j) {
    out << fmt(j * dt) << ',' << fmt(pulse.amplitudes(j)) << '\n';
  }
  if (!out) throw IoError(path.string(), "write failed");
}

ControlPulse read_pulse_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  std::string line;
  if (!std::getline(in, line) || trim(line) != "t_start,lambda") {
    throw IoError(path.string(), "expected header 't_start,lambda'");
  }
  std::vector<double> t_starts, lambdas;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 2) throw IoError(path.string(), "expected two columns, got: " + line);
    t_starts.push_back(parse_real(fields[0], path.string()));
    lambdas.push_back(parse_real(fields[1], path.string()));
  }
  if (t_starts.size() < 2) {
    throw IoError(path.string(), "need at least two slices to reconstruct the time grid");
  }
  const int n = static_cast<int>(t_starts.size());
  const double dt = t_starts.back() / (n - 1);
  ControlPulse pulse;
  pulse.gate_time = t_starts.back() + dt;
  pulse.amplitudes = Eigen::Map<Eigen::VectorXd>(lambdas.data(), n);
  pulse.validate();
  return pulse;
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream out = open_out(path);
  out << "t,p0,p1,pL\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    out << fmt(traj.times[i]) << ',' << fmt(traj.populations[i](0)) << ','
        << fmt(traj.populations[i](1)) << ',' << fmt(traj.populations[i](2)) << '\n';
  }
  if (!out) throw IoError(path.string(), "write failed");
}

void write_history_csv(const std::filesystem::path& path,
                       const std::vector<HistoryEntry>& history) {
  std::ofstream out = open_out(path);
  out << "iteration,phi2,step\n";
  for (const HistoryEntry& h : history) {
    out << h.iteration << ',' << fmt(h.phi2) << ',' << fmt(h.step) << '\n';
  }
  if (!out) throw IoError(path.string(), "write failed");
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRecord>& records) {
  std::ofstream out = open_out(path);
  out << "family,t_g,seed,error_phi2,error_phi1,iterations,wall_time_s\n";
  for (const SweepRecord& r : records) {
    out << r.family << ',' << fmt(r.t_g) << ',' << r.seed << ',' << fmt(r.error_phi2) << ','
        << fmt(r.error_phi1) << ',' << r.iterations << ',' << fmt(r.wall_time_s) << '\n';
  }
  if (!out) throw IoError(path.string(), "write failed");
}

void write_manifest(const std::filesystem::path& dir, const std::vector<std::string>& artifacts) {
  std::ofstream out = open_out(dir / "manifest.txt");
  for (const std::string& a : artifacts) out << a << '\n';
  if (!out) throw IoError((dir / "manifest.txt").string(), "write failed");
}

std::vector<std::pair<std::string, std::string>> read_key_value_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string text = trim(line);
    if (text.empty()) continue;
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": expected 'key = value', got '" + text + "'");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": empty key");
    }
    for (const auto& [k, v] : entries) {
      if (k == key) {
        throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": duplicate key '" +
                          key + "'");
      }
    }
    entries.emplace_back(key, value);
  }
  return entries;
}

ConfigMap::ConfigMap(std::vector<std::pair<std::string, std::string>> entries) {
  for (auto& [k, v] : entries) {
    values_.emplace(std::move(k), std::move(v));
  }
  for (const auto& [k, v] : values_) consumed_[k] = false;
}

bool ConfigMap::contains(const std::string& key) const { return values_.count(key) > 0; }

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  consumed_[key] = true;
  return it->second;
}

double ConfigMap::get_real(const std::string& key, double fallback) {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  consumed_[key] = true;
  return parse_real(it->second, key);
}

int ConfigMap::get_int(const std::string& key, int fallback) {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  consumed_[key] = true;
  try {
    std::size_t pos = 0;
    const int v = std::stoi(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected integer, got '" + it->second + "'");
  }
}

std::uint64_t ConfigMap::get_uint64(const std::string& key, std::uint64_t fallback) {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  consumed_[key] = true;
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected unsigned integer, got '" + it->second + "'");
  }
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  consumed_[key] = true;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ConfigError(key + ": expected boolean (true/false/1/0/on/off), got '" + v + "'");
}

void ConfigMap::finish() const {
  std::string unknown;
  for (const auto& [k, used] : consumed_) {
    if (!used) unknown += (unknown.empty() ? "" : ", ") + k;
  }
  if (!unknown.empty()) throw ConfigError("unknown configuration key(s): " + unknown);
}

}  // namespace qoct

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "qoct/fidelity.hpp"
#include "qoct/io.hpp"
#include "qoct/plot.hpp"
#include "qoct/presets.hpp"
#include "qoct/propagation.hpp"

using namespace qoct;

namespace {

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "qoct_test_io";
  std::filesystem::create_directories(dir);
  return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ControlPulse random_pulse(double t_g, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  ControlPulse p;
  p.gate_time = t_g;
  p.amplitudes.resize(n);
  for (int j = 0; j < n; ++j) p.amplitudes(j) = u(rng);
  return p;
}

}  // namespace

TEST_CASE("pulse CSV survives a round trip and re-evaluates to the same fidelity") {
  const auto dir = scratch_dir();
  const ControlPulse p = random_pulse(6.283, 73, 12345);
  const auto path = dir / "roundtrip_pulse.csv";
  write_pulse_csv(path, p);

  const ControlPulse q = read_pulse_csv(path);
  REQUIRE(q.slices() == p.slices());
  CHECK(std::abs(q.gate_time - p.gate_time) < 1e-12 * p.gate_time);
  for (int j = 0; j < p.slices(); ++j) {
    CHECK(std::abs(q.amplitudes(j) - p.amplitudes(j)) <= 1e-12 * std::abs(p.amplitudes(j)));
  }

  ModelParams params;
  const ComplexMatrix uf = target_not_gate();
  const double before = phi2(propagate(params, p).total, uf);
  const double after = phi2(propagate(params, q).total, uf);
  CHECK(std::abs(after - before) < 1e-10);

  const std::string text = read_text(path);
  CHECK(text.rfind("t_start,lambda", 0) == 0);  // schema header comes first
}

TEST_CASE("pulse CSV parsing rejects malformed input") {
  const auto dir = scratch_dir();
  CHECK_THROWS_AS(read_pulse_csv(dir / "does_not_exist.csv"), IoError);

  const auto header_only = dir / "header_only.csv";
  write_text(header_only, "t_start,lambda\n");
  CHECK_THROWS_AS(read_pulse_csv(header_only), IoError);

  // Malformed numbers surface as configuration errors with the offending
  // token; missing/short files surface as I/O errors.
  const auto garbage = dir / "garbage.csv";
  write_text(garbage, "t_start,lambda\n0,0.5\nnot-a-number,0.5\n");
  CHECK_THROWS_AS(read_pulse_csv(garbage), ConfigError);
}

TEST_CASE("trajectory, history, and sweep CSVs carry their schema headers") {
  const auto dir = scratch_dir();

  ModelParams params;
  ControlPulse p;
  p.gate_time = 2.0;
  p.amplitudes = Eigen::VectorXd::Zero(2);
  StateVector psi0 = StateVector::Zero(3);
  psi0(0) = 1.0;
  const auto traj_path = dir / "traj.csv";
  write_trajectory_csv(traj_path, evolve_state(params, p, psi0));
  const std::string traj_text = read_text(traj_path);
  CHECK(traj_text.rfind("t,p0,p1,pL", 0) == 0);
  CHECK(traj_text.find("\n0,1,0,0\n") != std::string::npos);  // the initial point

  const auto hist_path = dir / "hist.csv";
  write_history_csv(hist_path, {{0, 0.25, 0.0}, {1, 0.75, 0.5}});
  const std::string hist_text = read_text(hist_path);
  CHECK(hist_text.rfind("iteration,phi2,step", 0) == 0);
  CHECK(hist_text.find("\n1,0.75,0.5\n") != std::string::npos);

  SweepRecord rec;
  rec.family = "rectangular";
  rec.t_g = 5.0;
  rec.seed = 42;
  rec.error_phi2 = 0.125;
  rec.error_phi1 = 0.25;
  rec.iterations = 7;
  rec.wall_time_s = 0.5;
  const auto sweep_path = dir / "sweep.csv";
  write_sweep_csv(sweep_path, {rec});
  const std::string sweep_text = read_text(sweep_path);
  CHECK(sweep_text.rfind("family,t_g,seed,error_phi2,error_phi1,iterations,wall_time_s", 0) == 0);
  CHECK(sweep_text.find("rectangular,5,42,0.125,0.25,7,0.5") != std::string::npos);
}

TEST_CASE("manifests list one artifact per line") {
  const auto dir = scratch_dir();
  write_manifest(dir, {"a.csv", "b.svg"});
  CHECK(read_text(dir / "manifest.txt") == "a.csv\nb.svg\n");
}

TEST_CASE("key=value files parse comments, blanks, and reject duplicates") {
  const auto dir = scratch_dir();
  const auto path = dir / "config.txt";
  write_text(path,
             "# a comment\n"
             "\n"
             "model.delta_omega = 1.5\n"
             "optimizer.restarts=3\n"
             "  penalty.enabled = true  \n");
  const auto entries = read_key_value_file(path);
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].first == "model.delta_omega");
  CHECK(entries[0].second == "1.5");
  CHECK(entries[1].first == "optimizer.restarts");
  CHECK(entries[2].second == "true");

  write_text(path, "a = 1\na = 2\n");
  CHECK_THROWS_AS(read_key_value_file(path), ConfigError);
  write_text(path, "just a line with no assignment\n");
  CHECK_THROWS_AS(read_key_value_file(path), ConfigError);
}

TEST_CASE("typed config lookups consume keys and flag leftovers") {
  const std::vector<std::pair<std::string, std::string>> entries = {
      {"model.delta_omega", "2.5"},
      {"optimizer.restarts", "4"},
      {"penalty.enabled", "on"},
      {"mystery.knob", "7"}};
  ConfigMap cfg(entries);
  CHECK(cfg.get_real("model.delta_omega", 1.0) == 2.5);
  CHECK(cfg.get_int("optimizer.restarts", 8) == 4);
  CHECK(cfg.get_bool("penalty.enabled", false) == true);
  CHECK(cfg.get_real("absent.key", -1.5) == -1.5);

  // One key was never consumed; finishing must name it.
  try {
    cfg.finish();
    FAIL("finish() accepted an unconsumed key");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("mystery.knob") != std::string::npos);
  }

  const std::vector<std::pair<std::string, std::string>> bad_entries = {
      {"optimizer.restarts", "many"}};
  ConfigMap bad(bad_entries);
  CHECK_THROWS_AS(bad.get_int("optimizer.restarts", 1), ConfigError);
  const std::vector<std::pair<std::string, std::string>> bad_bool_entries = {
      {"penalty.enabled", "maybe"}};
  ConfigMap bad_bool(bad_bool_entries);
  CHECK_THROWS_AS(bad_bool.get_bool("penalty.enabled", false), ConfigError);
}

TEST_CASE("device presets convert natural units to hardware units") {
  const Preset phase_qubit = lookup_preset("phase-qubit");
  CHECK(phase_qubit.f_detuning_ghz == 0.2);
  // One natural time unit is 1/(2 pi f); the reference gate time 2 pi maps
  // to exactly 1/f nanoseconds.
  CHECK(phase_qubit.time_to_ns(2.0 * 3.141592653589793) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(phase_qubit.amplitude_to_ghz(0.5) == doctest::Approx(0.1).epsilon(1e-12));

  const Preset transmon = lookup_preset("transmon");
  CHECK(transmon.time_to_ns(2.0 * 3.141592653589793) ==
        doctest::Approx(1.0 / 0.455).epsilon(1e-12));

  CHECK_FALSE(try_lookup_preset("bogus").has_value());
  try {
    lookup_preset("bogus");
    FAIL("lookup_preset accepted an unknown name");
  } catch (const NoPreset& e) {
    const std::string msg = e.what();
    CHECK(msg.find("phase-qubit") != std::string::npos);
    CHECK(msg.find("transmon") != std::string::npos);
  }
}

TEST_CASE("the SVG writer produces well-formed plots on linear and log axes") {
  const auto dir = scratch_dir();

  PlotSpec spec;
  spec.title = "error vs duration";
  spec.x_label = "gate time";
  spec.y_label = "error";
  PlotSeries s;
  s.label = "rect & <friends>";  // exercises XML escaping
  s.x = {1.0, 2.0, 3.0, 4.0};
  s.y = {0.5, 0.1, 0.0, 1e-7};  // zero must survive the log-floor clamp
  spec.series.push_back(s);
  spec.log_y = true;

  const auto path = dir / "plot.svg";
  write_svg_plot(path, spec);
  const std::string svg = read_text(path);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("error vs duration") != std::string::npos);
  CHECK(svg.find("rect &amp; &lt;friends&gt;") != std::string::npos);
  CHECK(svg.find("nan") == std::string::npos);
  CHECK(svg.find("inf") == std::string::npos);

  PlotSpec empty;
  CHECK_THROWS_AS(write_svg_plot(dir / "bad.svg", empty), std::invalid_argument);
  PlotSeries ragged;
  ragged.label = "ragged";
  ragged.x = {1.0, 2.0};
  ragged.y = {1.0};
  empty.series.push_back(ragged);
  CHECK_THROWS_AS(write_svg_plot(dir / "bad.svg", empty), std::invalid_argument);
}

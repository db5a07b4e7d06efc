#pragma once

#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "specwalk/boxcount.hpp"
#include "specwalk/lyapunov.hpp"
#include "specwalk/spectrum.hpp"
#include "specwalk/version.hpp"
#include "specwalk/walker.hpp"

namespace specwalk {

// Thrown on malformed input files / schemas (CLI maps it to exit code 2).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline nlohmann::json spectrum_to_json(const WeightedSpectrum& spec) {
  nlohmann::json model = spec.meta.contains("model") ? spec.meta["model"] : nlohmann::json{};
  nlohmann::json j{{"version", 1},
                   {"model", model},
                   {"beta", spec.beta},
                   {"energies", spec.energies},
                   {"weights", spec.weights},
                   {"meta", spec.meta}};
  return j;
}

inline WeightedSpectrum spectrum_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("version") || !j.contains("energies") ||
      !j.contains("weights") || !j.contains("beta"))
    throw ValidationError("spectrum file: missing required fields");
  if (j["version"] != 1) throw ValidationError("spectrum file: unsupported version");
  WeightedSpectrum spec;
  spec.beta = j["beta"].get<double>();
  spec.energies = j["energies"].get<std::vector<double>>();
  spec.weights = j["weights"].get<std::vector<double>>();
  if (j.contains("meta")) spec.meta = j["meta"];
  if (j.contains("model") && !j["model"].is_null()) spec.meta["model"] = j["model"];
  try {
    spec.validate();
  } catch (const std::exception& e) {
    throw ValidationError(std::string("spectrum file: ") + e.what());
  }
  return spec;
}

inline nlohmann::json one_particle_to_json(const OneParticleSpectrum& ops) {
  nlohmann::json model = ops.meta.contains("model") ? ops.meta["model"] : nlohmann::json{};
  return nlohmann::json{{"version", 1},
                        {"kind", "one_particle"},
                        {"model", model},
                        {"levels", ops.distinct_levels},
                        {"degeneracies", ops.degeneracies},
                        {"offset", ops.offset},
                        {"n_modes", ops.n_modes},
                        {"meta", ops.meta}};
}

inline OneParticleSpectrum one_particle_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("kind", "") != "one_particle" || !j.contains("levels") ||
      !j.contains("degeneracies"))
    throw ValidationError("one-particle file: missing required fields");
  if (j["version"] != 1) throw ValidationError("one-particle file: unsupported version");
  OneParticleSpectrum ops;
  ops.distinct_levels = j["levels"].get<std::vector<double>>();
  ops.degeneracies = j["degeneracies"].get<std::vector<int>>();
  ops.offset = j.value("offset", 0.0);
  ops.n_modes = j.value("n_modes", 0);
  if (j.contains("meta")) ops.meta = j["meta"];
  try {
    ops.validate();
  } catch (const std::exception& e) {
    throw ValidationError(std::string("one-particle file: ") + e.what());
  }
  return ops;
}

inline bool json_is_one_particle(const nlohmann::json& j) {
  return j.is_object() && j.value("kind", "") == "one_particle";
}

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    throw ValidationError("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

// nlohmann serializes doubles with shortest round-trip representation, so
// numeric fields re-load bit-exactly.
inline void save_json_file(const nlohmann::json& j, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << j.dump(2) << "\n";
  if (!f) throw std::runtime_error("write failed for " + path);
}

// RFC 4180 line endings.
inline constexpr const char* kCsvEol = "\r\n";

class CsvWriter {
public:
  explicit CsvWriter(const std::string& path) : f_(path) {
    if (!f_) throw std::runtime_error("cannot open " + path + " for writing");
    f_.precision(17);
  }
  template <typename... Ts>
  void row(const Ts&... vals) {
    bool first = true;
    ((f_ << (first ? "" : ",") << vals, first = false), ...);
    f_ << kCsvEol;
  }
  void close() { f_.close(); }

private:
  std::ofstream f_;
};

inline void write_walk_csv(const WalkPath& path, const std::string& file) {
  CsvWriter w(file);
  w.row("step", "re", "im");
  for (std::size_t i = 0; i < path.points.size(); ++i)
    w.row(i, path.points[i].real(), path.points[i].imag());
}

inline void write_sff_csv(const SffSampleSet& s, const std::string& file) {
  CsvWriter w(file);
  w.row("t", "sff");
  for (std::size_t i = 0; i < s.times.size(); ++i) w.row(s.times[i], s.values[i]);
}

inline void write_lyapunov_csv(const LyapunovReport& rep, const std::string& file) {
  CsvWriter w(file);
  w.row("L", "q", "R");
  for (const auto& row : rep.by_size) w.row(row.L, row.q, row.R);
}

inline void write_windowed_csv(const std::vector<std::array<double, 3>>& rows,
                               const std::string& file) {
  CsvWriter w(file);
  w.row("s", "h", "R1");
  for (const auto& r : rows) w.row(r[0], r[1], r[2]);
}

inline nlohmann::json boxcount_fit_to_json(const BoxCountFit& fit) {
  return {{"epsilons", fit.epsilons}, {"counts", fit.counts},
          {"window", {fit.win_lo, fit.win_hi}}, {"d_F", fit.slope},
          {"stderr", fit.stderr_slope}, {"r2", fit.r2}};
}

// Every output file gets a sibling <output>.manifest.json recording enough
// to regenerate it bit-exactly on the same build.
inline void write_manifest(const std::string& output_path, const std::string& command,
                           const nlohmann::json& flags, double wall_clock_s) {
  nlohmann::json j{{"command", command},
                   {"flags", flags},
                   {"output", output_path},
                   {"tool_version", kVersion},
                   {"wall_clock_s", wall_clock_s}};
  save_json_file(j, output_path + ".manifest.json");
}

} // namespace specwalk

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/detection.hpp"
#include "core/entanglement.hpp"
#include "core/interferometer.hpp"
#include "core/source.hpp"

namespace hbtsim::config {

/// Flat `key = value` store with dotted section keys and '#' comments;
/// no nesting. Unknown keys are rejected at parse time so typos fail fast.
class KeyValues {
 public:
  static KeyValues parse_file(const std::string& path);
  static KeyValues parse_text(const std::string& text);

  void set(const std::string& key, const std::string& value);
  std::optional<std::string> get(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

/// Fully resolved experiment configuration (defaults + file + overrides).
struct ExperimentConfig {
  source::SourceConfig source1;
  source::SourceConfig source2;
  interf::InterferometerGeometry geometry;
  detect::DetectorConfig detector3;
  detect::DetectorConfig detector4;

  // Simulation controls.
  double dt = 1e-6;          // s per bin
  uint64_t n_bins = 100000;  // bins per run (per theta point for scans)
  double lag_span_tau_c = 4.0;  // correlation lag grid reach, in units of tau_c
  uint64_t block_bins = 0;      // error-block length; 0 = auto
  uint64_t chunk_bins = 0;      // work-chunk length; 0 = auto

  // Fringe scan grid: theta_j = j * theta_max / theta_points, phi34 = 2 theta.
  uint64_t theta_points = 32;
  double theta_max = 6.283185307179586476925286766559;

  // Entanglement scan grid.
  ent::ScanFamily ent_family = ent::ScanFamily::Tunable;
  uint64_t ent_phi_points = 64;
  double ent_phi_max = 6.283185307179586476925286766559;
  double ent_phi1 = 0.0;

  // Intensity histogram.
  uint64_t hist_bins = 64;
  double hist_max_over_mean = 8.0;

  void validate() const;  // throws Error(invalid_config)

  size_t lag_bins() const;
  uint64_t effective_block_bins() const;
  uint64_t effective_chunk_bins() const;
  bool dt_warning() const;  // dt undersamples the coherence decay
};

/// Defaults -> file (optional) -> master-seed override (optional).
/// A master seed rederives every component seed so one flag reseeds the
/// whole experiment reproducibly.
ExperimentConfig build_config(const KeyValues* file_values,
                              std::optional<uint64_t> master_seed);

/// Canonical `key = value` listing of every setting, sorted by key.
std::vector<std::pair<std::string, std::string>> to_entries(const ExperimentConfig& cfg);

/// FNV-1a over the canonical listing; stamped into output headers.
uint64_t config_hash(const ExperimentConfig& cfg);

std::string format_double(double v);  // shortest round-trip-ish, 9 significant digits

}  // namespace hbtsim::config

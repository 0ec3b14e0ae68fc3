#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hbtsim::detect {

/// Semiclassical photodetector: Poisson counts at rate eta*I + dark, thinned
/// by a non-paralyzable dead time.
struct DetectorConfig {
  double efficiency = 0.05;   // dimensionless, [0,1]
  double dark_rate = 100.0;   // counts/s
  double dead_time = 45e-9;   // s
  uint64_t seed = 1;

  void validate() const;  // throws Error(invalid_config)
};

struct CountRecord {
  std::vector<uint32_t> counts;
  double dt = 0.0;  // s per bin
  DetectorConfig config;

  double total_time() const { return dt * static_cast<double>(counts.size()); }
  uint64_t total_counts() const;
};

/// Convert an intensity timeline (photons/s per bin) into per-bin counts.
/// Per bin, events are Poisson with mean (eta*I + dark)*dt, placed uniformly
/// inside the bin, and events closer than dead_time to the previous accepted
/// event are dropped (non-paralyzable: dropped events do not extend the dead
/// window). Dead time carries across bin boundaries. Deterministic given
/// (inputs, cfg.seed, stream_tag).
CountRecord detect(std::span<const double> intensity, double dt, const DetectorConfig& cfg,
                   uint64_t stream_tag = 0);

/// Total counts / total time. Throws Error(bad_argument) on an empty record.
double mean_rate(const CountRecord& record);

/// Non-paralyzable dead-time throughput: observed rate for true rate
/// `rate` and dead time `dead_time`.
inline double dead_time_throughput(double rate, double dead_time) {
  return rate / (1.0 + rate * dead_time);
}

}  // namespace hbtsim::detect

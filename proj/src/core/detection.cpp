#include "core/detection.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace hbtsim::detect {

void DetectorConfig::validate() const {
  require(efficiency >= 0.0 && efficiency <= 1.0, ErrorCode::invalid_config,
          "detector: efficiency must be in [0,1]");
  require(dark_rate >= 0.0 && std::isfinite(dark_rate), ErrorCode::invalid_config,
          "detector: dark_rate must be >= 0");
  require(dead_time >= 0.0 && std::isfinite(dead_time), ErrorCode::invalid_config,
          "detector: dead_time must be >= 0");
}

uint64_t CountRecord::total_counts() const {
  uint64_t total = 0;
  for (uint32_t c : counts) total += c;
  return total;
}

CountRecord detect(std::span<const double> intensity, double dt, const DetectorConfig& cfg,
                   uint64_t stream_tag) {
  cfg.validate();
  require(dt > 0.0 && std::isfinite(dt), ErrorCode::bad_argument, "detect: dt must be positive");

  CountRecord rec;
  rec.dt = dt;
  rec.config = cfg;
  rec.counts.resize(intensity.size());

  std::mt19937_64 gen(rng::mix(cfg.seed, stream_tag));
  std::poisson_distribution<uint32_t> poisson;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  using PoissonParam = std::poisson_distribution<uint32_t>::param_type;

  double last_accepted = -std::numeric_limits<double>::infinity();
  std::vector<double> events;
  for (size_t bin = 0; bin < intensity.size(); ++bin) {
    require(intensity[bin] >= 0.0, ErrorCode::bad_argument, "detect: intensity must be >= 0");
    const double mean = (cfg.efficiency * intensity[bin] + cfg.dark_rate) * dt;
    uint32_t raw = mean > 0.0 ? poisson(gen, PoissonParam(mean)) : 0;
    if (raw == 0) continue;
    if (cfg.dead_time <= 0.0) {
      rec.counts[bin] = raw;
      continue;
    }
    const double t0 = static_cast<double>(bin) * dt;
    events.resize(raw);
    for (uint32_t k = 0; k < raw; ++k) events[k] = t0 + uniform(gen) * dt;
    std::sort(events.begin(), events.end());
    uint32_t kept = 0;
    for (double t : events) {
      if (t - last_accepted >= cfg.dead_time) {
        last_accepted = t;
        ++kept;
      }
    }
    rec.counts[bin] = kept;
  }
  return rec;
}

double mean_rate(const CountRecord& record) {
  require(!record.counts.empty(), ErrorCode::bad_argument, "mean_rate: empty record");
  return static_cast<double>(record.total_counts()) / record.total_time();
}

}  // namespace hbtsim::detect

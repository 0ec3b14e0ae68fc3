#include "core/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace hbtsim::config {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "source1.mean_intensity", "source1.tau_c_us", "source1.seed", "source1.generator",
      "source1.n_scatterers",
      "source2.mean_intensity", "source2.tau_c_us", "source2.seed", "source2.generator",
      "source2.n_scatterers",
      "geometry.lambda_nm", "geometry.r13_m", "geometry.r14_m", "geometry.r23_m",
      "geometry.r24_m", "geometry.analyzer3_rad", "geometry.analyzer4_rad",
      "geometry.split13", "geometry.split14", "geometry.split23", "geometry.split24",
      "detector3.efficiency", "detector3.dark_hz", "detector3.dead_time_ns", "detector3.seed",
      "detector4.efficiency", "detector4.dark_hz", "detector4.dead_time_ns", "detector4.seed",
      "sim.dt_us", "sim.n_bins", "sim.lag_span_tau_c", "sim.block_bins", "sim.chunk_bins",
      "scan.theta_points", "scan.theta_max_rad",
      "ent.family", "ent.phi_points", "ent.phi_max_rad", "ent.phi1_rad",
      "hist.bins", "hist.max_over_mean",
  };
  return keys;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    require(pos == value.size(), ErrorCode::invalid_config,
            "config: trailing characters in value for " + key);
    return v;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error(ErrorCode::invalid_config, "config: cannot parse number for " + key);
  }
}

uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    require(pos == value.size(), ErrorCode::invalid_config,
            "config: trailing characters in value for " + key);
    return v;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error(ErrorCode::invalid_config, "config: cannot parse integer for " + key);
  }
}

}  // namespace

KeyValues KeyValues::parse_text(const std::string& text) {
  KeyValues out;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::invalid_config,
            "config: line " + std::to_string(lineno) + " is not `key = value`");
    out.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

KeyValues KeyValues::parse_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::invalid_config, "config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

void KeyValues::set(const std::string& key, const std::string& value) {
  require(known_keys().count(key) == 1, ErrorCode::invalid_config,
          "config: unknown key '" + key + "'");
  require(!value.empty(), ErrorCode::invalid_config, "config: empty value for " + key);
  entries_[key] = value;
}

std::optional<std::string> KeyValues::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ExperimentConfig::validate() const {
  source1.validate();
  source2.validate();
  geometry.validate();
  detector3.validate();
  detector4.validate();
  require(dt > 0.0 && std::isfinite(dt), ErrorCode::invalid_config, "sim.dt_us must be positive");
  require(n_bins >= 1, ErrorCode::invalid_config, "sim.n_bins must be >= 1");
  require(lag_span_tau_c >= 0.0, ErrorCode::invalid_config, "sim.lag_span_tau_c must be >= 0");
  require(theta_points >= 1, ErrorCode::invalid_config, "scan.theta_points must be >= 1");
  require(theta_max > 0.0, ErrorCode::invalid_config, "scan.theta_max_rad must be positive");
  require(ent_phi_points >= 2, ErrorCode::invalid_config, "ent.phi_points must be >= 2");
  require(hist_bins >= 2, ErrorCode::invalid_config, "hist.bins must be >= 2");
  require(hist_max_over_mean > 0.0, ErrorCode::invalid_config,
          "hist.max_over_mean must be positive");
}

size_t ExperimentConfig::lag_bins() const {
  const double tau_c = std::max(source1.coherence_time, source2.coherence_time);
  const double bins = std::ceil(lag_span_tau_c * tau_c / dt);
  return static_cast<size_t>(std::min(bins, 4096.0));
}

uint64_t ExperimentConfig::effective_block_bins() const {
  if (block_bins > 0) return block_bins;
  const double tau_c = std::max(source1.coherence_time, source2.coherence_time);
  // Blocks must span several coherence times for honest jackknife errors,
  // and there should be enough of them to estimate a variance.
  const uint64_t min_len = static_cast<uint64_t>(std::ceil(8.0 * tau_c / dt));
  return std::max<uint64_t>({min_len, n_bins / 256, 1});
}

uint64_t ExperimentConfig::effective_chunk_bins() const {
  if (chunk_bins > 0) return chunk_bins;
  const uint64_t block = effective_block_bins();
  // Chunks are units of parallel work; keep them block-aligned.
  uint64_t chunk = block;
  while (chunk < 16384 && chunk < n_bins) chunk += block;
  return chunk;
}

bool ExperimentConfig::dt_warning() const {
  return source::dt_undersamples(dt, std::min(source1.coherence_time, source2.coherence_time));
}

namespace {

void apply_source(const KeyValues& kv, const std::string& prefix, source::SourceConfig& cfg) {
  if (auto v = kv.get(prefix + ".mean_intensity")) cfg.mean_intensity = parse_double(prefix, *v);
  if (auto v = kv.get(prefix + ".tau_c_us")) cfg.coherence_time = parse_double(prefix, *v) * 1e-6;
  if (auto v = kv.get(prefix + ".seed")) cfg.seed = parse_u64(prefix, *v);
  if (auto v = kv.get(prefix + ".n_scatterers"))
    cfg.n_scatterers = static_cast<int>(parse_u64(prefix, *v));
  if (auto v = kv.get(prefix + ".generator")) {
    if (*v == "spectral") {
      cfg.kind = source::GeneratorKind::Spectral;
    } else if (*v == "scatterer_sum") {
      cfg.kind = source::GeneratorKind::ScattererSum;
    } else {
      throw Error(ErrorCode::invalid_config,
                  "config: " + prefix + ".generator must be spectral or scatterer_sum");
    }
  }
}

void apply_detector(const KeyValues& kv, const std::string& prefix, detect::DetectorConfig& cfg) {
  if (auto v = kv.get(prefix + ".efficiency")) cfg.efficiency = parse_double(prefix, *v);
  if (auto v = kv.get(prefix + ".dark_hz")) cfg.dark_rate = parse_double(prefix, *v);
  if (auto v = kv.get(prefix + ".dead_time_ns")) cfg.dead_time = parse_double(prefix, *v) * 1e-9;
  if (auto v = kv.get(prefix + ".seed")) cfg.seed = parse_u64(prefix, *v);
}

}  // namespace

ExperimentConfig build_config(const KeyValues* kv, std::optional<uint64_t> master_seed) {
  ExperimentConfig cfg;
  // Defaults mirror the experimental parameters: 852 nm, tau_c = 750 us,
  // 5% efficiency, 100/s dark counts, 45 ns dead time, 1 MHz sampling,
  // 1e5 samples.
  cfg.source1.mean_intensity = 2.0e6;
  cfg.source1.coherence_time = 750e-6;
  cfg.source1.seed = 101;
  cfg.source2 = cfg.source1;
  cfg.source2.seed = 202;
  cfg.detector3.seed = 303;
  cfg.detector4.seed = 404;

  if (kv) {
    apply_source(*kv, "source1", cfg.source1);
    apply_source(*kv, "source2", cfg.source2);
    apply_detector(*kv, "detector3", cfg.detector3);
    apply_detector(*kv, "detector4", cfg.detector4);
    auto& g = cfg.geometry;
    if (auto v = kv->get("geometry.lambda_nm")) g.wavelength = parse_double("lambda", *v) * 1e-9;
    if (auto v = kv->get("geometry.r13_m")) g.r13 = parse_double("r13", *v);
    if (auto v = kv->get("geometry.r14_m")) g.r14 = parse_double("r14", *v);
    if (auto v = kv->get("geometry.r23_m")) g.r23 = parse_double("r23", *v);
    if (auto v = kv->get("geometry.r24_m")) g.r24 = parse_double("r24", *v);
    if (auto v = kv->get("geometry.analyzer3_rad")) g.analyzer3_angle = parse_double("a3", *v);
    if (auto v = kv->get("geometry.analyzer4_rad")) g.analyzer4_angle = parse_double("a4", *v);
    if (auto v = kv->get("geometry.split13")) g.split13 = parse_double("split13", *v);
    if (auto v = kv->get("geometry.split14")) g.split14 = parse_double("split14", *v);
    if (auto v = kv->get("geometry.split23")) g.split23 = parse_double("split23", *v);
    if (auto v = kv->get("geometry.split24")) g.split24 = parse_double("split24", *v);
    if (auto v = kv->get("sim.dt_us")) cfg.dt = parse_double("dt", *v) * 1e-6;
    if (auto v = kv->get("sim.n_bins")) cfg.n_bins = parse_u64("n_bins", *v);
    if (auto v = kv->get("sim.lag_span_tau_c")) cfg.lag_span_tau_c = parse_double("lag", *v);
    if (auto v = kv->get("sim.block_bins")) cfg.block_bins = parse_u64("block", *v);
    if (auto v = kv->get("sim.chunk_bins")) cfg.chunk_bins = parse_u64("chunk", *v);
    if (auto v = kv->get("scan.theta_points")) cfg.theta_points = parse_u64("theta", *v);
    if (auto v = kv->get("scan.theta_max_rad")) cfg.theta_max = parse_double("theta_max", *v);
    if (auto v = kv->get("ent.family")) {
      if (*v == "tunable") {
        cfg.ent_family = ent::ScanFamily::Tunable;
      } else if (*v == "orthogonal") {
        cfg.ent_family = ent::ScanFamily::Orthogonal;
      } else {
        throw Error(ErrorCode::invalid_config,
                    "config: ent.family must be tunable or orthogonal");
      }
    }
    if (auto v = kv->get("ent.phi_points")) cfg.ent_phi_points = parse_u64("phi_points", *v);
    if (auto v = kv->get("ent.phi_max_rad")) cfg.ent_phi_max = parse_double("phi_max", *v);
    if (auto v = kv->get("ent.phi1_rad")) cfg.ent_phi1 = parse_double("phi1", *v);
    if (auto v = kv->get("hist.bins")) cfg.hist_bins = parse_u64("hist", *v);
    if (auto v = kv->get("hist.max_over_mean")) cfg.hist_max_over_mean = parse_double("hist", *v);
  }

  if (master_seed) {
    cfg.source1.seed = rng::mix(*master_seed, 1);
    cfg.source2.seed = rng::mix(*master_seed, 2);
    cfg.detector3.seed = rng::mix(*master_seed, 3);
    cfg.detector4.seed = rng::mix(*master_seed, 4);
  }

  cfg.validate();
  return cfg;
}

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::vector<std::pair<std::string, std::string>> to_entries(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> e;
  auto add = [&e](const std::string& k, const std::string& v) { e.emplace_back(k, v); };
  auto add_source = [&](const std::string& p, const source::SourceConfig& s) {
    add(p + ".mean_intensity", format_double(s.mean_intensity));
    add(p + ".tau_c_us", format_double(s.coherence_time * 1e6));
    add(p + ".seed", std::to_string(s.seed));
    add(p + ".generator", s.kind == source::GeneratorKind::Spectral ? "spectral" : "scatterer_sum");
    add(p + ".n_scatterers", std::to_string(s.n_scatterers));
  };
  auto add_detector = [&](const std::string& p, const detect::DetectorConfig& d) {
    add(p + ".efficiency", format_double(d.efficiency));
    add(p + ".dark_hz", format_double(d.dark_rate));
    add(p + ".dead_time_ns", format_double(d.dead_time * 1e9));
    add(p + ".seed", std::to_string(d.seed));
  };
  add_source("source1", cfg.source1);
  add_source("source2", cfg.source2);
  const auto& g = cfg.geometry;
  add("geometry.lambda_nm", format_double(g.wavelength * 1e9));
  add("geometry.r13_m", format_double(g.r13));
  add("geometry.r14_m", format_double(g.r14));
  add("geometry.r23_m", format_double(g.r23));
  add("geometry.r24_m", format_double(g.r24));
  add("geometry.analyzer3_rad", format_double(g.analyzer3_angle));
  add("geometry.analyzer4_rad", format_double(g.analyzer4_angle));
  add("geometry.split13", format_double(g.split13));
  add("geometry.split14", format_double(g.split14));
  add("geometry.split23", format_double(g.split23));
  add("geometry.split24", format_double(g.split24));
  add_detector("detector3", cfg.detector3);
  add_detector("detector4", cfg.detector4);
  add("sim.dt_us", format_double(cfg.dt * 1e6));
  add("sim.n_bins", std::to_string(cfg.n_bins));
  add("sim.lag_span_tau_c", format_double(cfg.lag_span_tau_c));
  add("sim.block_bins", std::to_string(cfg.block_bins));
  add("sim.chunk_bins", std::to_string(cfg.chunk_bins));
  add("scan.theta_points", std::to_string(cfg.theta_points));
  add("scan.theta_max_rad", format_double(cfg.theta_max));
  add("ent.family", cfg.ent_family == ent::ScanFamily::Tunable ? "tunable" : "orthogonal");
  add("ent.phi_points", std::to_string(cfg.ent_phi_points));
  add("ent.phi_max_rad", format_double(cfg.ent_phi_max));
  add("ent.phi1_rad", format_double(cfg.ent_phi1));
  add("hist.bins", std::to_string(cfg.hist_bins));
  add("hist.max_over_mean", format_double(cfg.hist_max_over_mean));
  std::sort(e.begin(), e.end());
  return e;
}

uint64_t config_hash(const ExperimentConfig& cfg) {
  uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  auto eat = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0x1f;
    h *= 0x100000001b3ULL;
  };
  for (const auto& [k, v] : to_entries(cfg)) {
    eat(k);
    eat(v);
  }
  return h;
}

}  // namespace hbtsim::config

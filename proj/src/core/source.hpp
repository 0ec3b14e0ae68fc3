#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace hbtsim::source {

using Complex = std::complex<double>;

enum class GeneratorKind { Spectral, ScattererSum };

/// Pseudo-thermal source parameters. The emitted field is a circular
/// complex Gaussian process with <|E|^2> = mean_intensity and
/// |g1(tau)| = exp(-pi tau^2 / (2 tau_c^2)), so the intensity correlation
/// is G2(tau) = 1 + exp(-pi (tau/tau_c)^2).
struct SourceConfig {
  double mean_intensity = 1.0;  // photons/s
  double coherence_time = 750e-6;  // s
  uint64_t seed = 1;
  GeneratorKind kind = GeneratorKind::Spectral;
  int n_scatterers = 1024;  // ScattererSum only

  void validate() const;  // throws Error(invalid_config)
};

/// G2(tau) = 1 + exp(-pi (tau/tau_c)^2). Throws for tau_c <= 0.
double theoretical_g2(double tau, double tau_c);

/// Ratio of dt to the largest dt that still samples the coherence decay
/// faithfully (tau_c / 10); > 1 means the caller should flag the run.
bool dt_undersamples(double dt, double tau_c);

/// Index-addressed synthesizer of one source's field samples. Sample m is
/// a pure function of (config, dt, m): any block partition reproduces the
/// same continuous realization bit for bit.
class FieldGenerator {
 public:
  virtual ~FieldGenerator() = default;
  virtual void block(uint64_t first_index, std::span<Complex> out) = 0;
  double dt() const { return dt_; }
  const SourceConfig& config() const { return cfg_; }

 protected:
  FieldGenerator(const SourceConfig& cfg, double dt);
  SourceConfig cfg_;
  double dt_;
};

std::unique_ptr<FieldGenerator> make_generator(const SourceConfig& cfg, double dt);

/// Spectral synthesis: white complex Gaussian noise filtered with the
/// Gaussian kernel exp(-pi t^2 / tau_c^2) (the square root of the target
/// power spectrum), evaluated blockwise by FFT overlap-save.
std::unique_ptr<FieldGenerator> make_spectral_generator(const SourceConfig& cfg, double dt);

/// Sum over scatterers E = sum_i E_i exp(i(phase_i + omega_i t)) with
/// Gaussian-distributed scatterer frequencies; decorrelates on tau_c with
/// the same Gaussian law, independently of the spectral route.
std::unique_ptr<FieldGenerator> make_scatterer_generator(const SourceConfig& cfg, double dt);

/// Sequentially advanced stream view over a generator; single owner.
class ThermalFieldStream {
 public:
  ThermalFieldStream(const SourceConfig& cfg, double dt);

  /// Next n samples at the stream's sample spacing; advances the stream.
  std::vector<Complex> sample_block(size_t n);
  void sample_into(std::span<Complex> out);

  uint64_t position() const { return position_; }
  double dt() const { return gen_->dt(); }
  const SourceConfig& config() const { return gen_->config(); }

 private:
  std::unique_ptr<FieldGenerator> gen_;
  uint64_t position_ = 0;
};

/// |E|^2 for a block of field samples.
std::vector<double> intensities(std::span<const Complex> field);

}  // namespace hbtsim::source

#include "core/source.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace hbtsim::source {

namespace {

constexpr double kPi = 3.14159265358979323846;

// FFTW's planner is not thread safe; executing distinct plans on their own
// buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

uint64_t next_pow2(uint64_t v) {
  uint64_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

}  // namespace

void SourceConfig::validate() const {
  require(mean_intensity > 0.0 && std::isfinite(mean_intensity), ErrorCode::invalid_config,
          "source: mean_intensity must be positive");
  require(coherence_time > 0.0 && std::isfinite(coherence_time), ErrorCode::invalid_config,
          "source: coherence_time must be positive");
  require(n_scatterers >= 1, ErrorCode::invalid_config, "source: n_scatterers must be >= 1");
}

double theoretical_g2(double tau, double tau_c) {
  require(tau_c > 0.0, ErrorCode::bad_argument, "theoretical_g2: tau_c must be positive");
  const double x = tau / tau_c;
  return 1.0 + std::exp(-kPi * x * x);
}

bool dt_undersamples(double dt, double tau_c) { return dt > tau_c / 10.0; }

FieldGenerator::FieldGenerator(const SourceConfig& cfg, double dt) : cfg_(cfg), dt_(dt) {
  cfg_.validate();
  require(dt > 0.0 && std::isfinite(dt), ErrorCode::invalid_config, "source: dt must be positive");
}

// ---------------------------------------------------------------------------
// Spectral synthesis (overlap-save FIR of counter-addressed white noise)
// ---------------------------------------------------------------------------

class SpectralGenerator final : public FieldGenerator {
 public:
  SpectralGenerator(const SourceConfig& cfg, double dt) : FieldGenerator(cfg, dt) {
    // Kernel taps g(h) = exp(-pi (h dt)^2 / tau_c^2) truncated where the
    // tail drops below ~1e-14 of the peak.
    const double ratio = cfg_.coherence_time / dt_;
    half_taps_ = static_cast<size_t>(std::ceil(3.2 * ratio));
    half_taps_ = std::max<size_t>(half_taps_, 1);
    require(half_taps_ <= (1u << 22), ErrorCode::invalid_config,
            "source: dt too small relative to tau_c (kernel would be enormous)");
    const size_t taps = 2 * half_taps_ + 1;
    std::vector<double> kernel(taps);
    double sum_sq = 0.0;
    for (size_t j = 0; j < taps; ++j) {
      const double t = (static_cast<double>(j) - static_cast<double>(half_taps_)) * dt_;
      const double u = t / cfg_.coherence_time;
      kernel[j] = std::exp(-kPi * u * u);
      sum_sq += kernel[j] * kernel[j];
    }
    // Exact mean intensity for any dt: <|E|^2> = scale^2 * sum g^2.
    const double scale = std::sqrt(cfg_.mean_intensity / sum_sq);

    fft_len_ = next_pow2(std::max<uint64_t>(4 * taps, 1 << 14));
    valid_per_seg_ = fft_len_ - 2 * half_taps_;

    buf_ = fftw_alloc_complex(fft_len_);
    kernel_fft_ = fftw_alloc_complex(fft_len_);
    require(buf_ && kernel_fft_, ErrorCode::runtime, "source: fftw allocation failed");
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fwd_ = fftw_plan_dft_1d(static_cast<int>(fft_len_), buf_, buf_, FFTW_FORWARD,
                              FFTW_ESTIMATE);
      bwd_ = fftw_plan_dft_1d(static_cast<int>(fft_len_), buf_, buf_, FFTW_BACKWARD,
                              FFTW_ESTIMATE);
    }
    require(fwd_ && bwd_, ErrorCode::runtime, "source: fftw planning failed");

    for (size_t i = 0; i < fft_len_; ++i) buf_[i][0] = buf_[i][1] = 0.0;
    for (size_t j = 0; j < taps; ++j) buf_[j][0] = kernel[j] * scale;
    fftw_execute(fwd_);
    // Fold the 1/N of the inverse transform into the cached kernel FFT.
    const double inv_n = 1.0 / static_cast<double>(fft_len_);
    for (size_t i = 0; i < fft_len_; ++i) {
      kernel_fft_[i][0] = buf_[i][0] * inv_n;
      kernel_fft_[i][1] = buf_[i][1] * inv_n;
    }
  }

  ~SpectralGenerator() override {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd_) fftw_destroy_plan(fwd_);
    if (bwd_) fftw_destroy_plan(bwd_);
    fftw_free(buf_);
    fftw_free(kernel_fft_);
  }

  SpectralGenerator(const SpectralGenerator&) = delete;
  SpectralGenerator& operator=(const SpectralGenerator&) = delete;

  void block(uint64_t first, std::span<Complex> out) override {
    size_t done = 0;
    while (done < out.size()) {
      const size_t m = std::min<size_t>(valid_per_seg_, out.size() - done);
      const uint64_t seg_first = first + done;
      // White noise indices [seg_first - half_taps, seg_first + m + half_taps).
      // Negative stream indices before sample 0 are part of the stationary
      // process's past and are generated the same way (offset shields the
      // unsigned arithmetic).
      const size_t fill = m + 2 * half_taps_;
      for (size_t j = 0; j < fill; ++j) {
        const uint64_t wn_index =
            seg_first + j + (kIndexOffset - static_cast<uint64_t>(half_taps_));
        const Complex w = rng::complex_gaussian_at(cfg_.seed, wn_index);
        buf_[j][0] = w.real();
        buf_[j][1] = w.imag();
      }
      for (size_t j = fill; j < fft_len_; ++j) buf_[j][0] = buf_[j][1] = 0.0;
      fftw_execute(fwd_);
      for (size_t i = 0; i < fft_len_; ++i) {
        const double re = buf_[i][0] * kernel_fft_[i][0] - buf_[i][1] * kernel_fft_[i][1];
        const double im = buf_[i][0] * kernel_fft_[i][1] + buf_[i][1] * kernel_fft_[i][0];
        buf_[i][0] = re;
        buf_[i][1] = im;
      }
      fftw_execute(bwd_);
      for (size_t t = 0; t < m; ++t) {
        const size_t j = 2 * half_taps_ + t;
        out[done + t] = Complex(buf_[j][0], buf_[j][1]);
      }
      done += m;
    }
  }

 private:
  static constexpr uint64_t kIndexOffset = 1ULL << 32;

  size_t half_taps_ = 0;
  size_t fft_len_ = 0;
  size_t valid_per_seg_ = 0;
  fftw_complex* buf_ = nullptr;
  fftw_complex* kernel_fft_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

// ---------------------------------------------------------------------------
// Scatterer-sum synthesis (independent cross-check of the spectral route)
// ---------------------------------------------------------------------------

class ScattererSumGenerator final : public FieldGenerator {
 public:
  ScattererSumGenerator(const SourceConfig& cfg, double dt) : FieldGenerator(cfg, dt) {
    const int n = cfg_.n_scatterers;
    phase0_.resize(n);
    omega_.resize(n);
    rot_.resize(n);
    const double sigma_omega = std::sqrt(kPi) / cfg_.coherence_time;
    for (int i = 0; i < n; ++i) {
      uint64_t s = rng::mix(cfg_.seed, static_cast<uint64_t>(i));
      const double u1 = rng::uniform_pos(rng::splitmix64(s));
      const double u2 = rng::uniform(rng::splitmix64(s));
      const double u3 = rng::uniform(rng::splitmix64(s));
      phase0_[i] = rng::kTwoPi * u3;
      // Box-Muller: Gaussian frequency spread gives the Gaussian |g1|.
      omega_[i] = sigma_omega * std::sqrt(-2.0 * std::log(u1)) * std::cos(rng::kTwoPi * u2);
      rot_[i] = std::polar(1.0, omega_[i] * dt_);
    }
    amp_ = std::sqrt(cfg_.mean_intensity / static_cast<double>(n));
  }

  void block(uint64_t first, std::span<Complex> out) override {
    const size_t n = phase0_.size();
    const double t0 = static_cast<double>(first) * dt_;
    std::vector<Complex> z(n);
    for (size_t i = 0; i < n; ++i) z[i] = std::polar(1.0, phase0_[i] + omega_[i] * t0);
    for (auto& sample : out) {
      Complex acc{0.0, 0.0};
      for (size_t i = 0; i < n; ++i) {
        acc += z[i];
        z[i] *= rot_[i];
      }
      sample = amp_ * acc;
    }
  }

 private:
  std::vector<double> phase0_;
  std::vector<double> omega_;
  std::vector<Complex> rot_;
  double amp_ = 0.0;
};

std::unique_ptr<FieldGenerator> make_spectral_generator(const SourceConfig& cfg, double dt) {
  return std::make_unique<SpectralGenerator>(cfg, dt);
}

std::unique_ptr<FieldGenerator> make_scatterer_generator(const SourceConfig& cfg, double dt) {
  return std::make_unique<ScattererSumGenerator>(cfg, dt);
}

std::unique_ptr<FieldGenerator> make_generator(const SourceConfig& cfg, double dt) {
  if (cfg.kind == GeneratorKind::Spectral) return make_spectral_generator(cfg, dt);
  return make_scatterer_generator(cfg, dt);
}

ThermalFieldStream::ThermalFieldStream(const SourceConfig& cfg, double dt)
    : gen_(make_generator(cfg, dt)) {}

std::vector<Complex> ThermalFieldStream::sample_block(size_t n) {
  require(n >= 1, ErrorCode::bad_argument, "sample_block: n must be >= 1");
  std::vector<Complex> out(n);
  sample_into(out);
  return out;
}

void ThermalFieldStream::sample_into(std::span<Complex> out) {
  gen_->block(position_, out);
  position_ += out.size();
}

std::vector<double> intensities(std::span<const Complex> field) {
  std::vector<double> out(field.size());
  for (size_t i = 0; i < field.size(); ++i) out[i] = std::norm(field[i]);
  return out;
}

}  // namespace hbtsim::source

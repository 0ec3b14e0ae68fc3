#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace hbtsim::corr {

/// Streaming, mergeable accumulator for auto/cross correlations of a pair
/// of synchronized bin streams (a_t, b_t), over the dense lag grid
/// 0..max_lag (in bins).
///
/// For every lag l it keeps ratio-of-means ingredients over all pairs
/// (t, t+l) inside one record: pair count, early/late marginal sums, and
/// the four products ab, ba, aa, bb. Zero-lag autocorrelations additionally
/// use factorial sums a(a-1) to remove photon shot noise from count data.
///
/// Error bars come from delete-one-block jackknife over contiguous error
/// blocks of `block_len` samples. A block closes when it is full, at
/// push_gap(), and at a merge seam.
///
/// Exactness contract: merging accumulators reproduces the per-lag sums,
/// counts and estimator values of accumulating the concatenated stream,
/// bit for bit when the inputs are integer-valued (sums of integers stay
/// exact in doubles). Jackknife errors are additionally bit-identical when
/// the split points are multiples of block_len, which is how the drivers
/// split work.
///
/// push_gap() declares a discontinuity: later samples never pair with
/// earlier ones. Use it to pool independent records in one accumulator.
class CorrelationAccumulator {
 public:
  CorrelationAccumulator(size_t max_lag, size_t block_len);

  void push_pair(double a, double b);
  void push_gap();

  /// Appends rhs as if its samples were pushed after ours (concatenation
  /// semantics, including cross-seam pairs). Requires identical max_lag
  /// and block_len.
  void merge(const CorrelationAccumulator& rhs);

  struct Estimate {
    double value = 0.0;
    /// Jackknife standard error; NaN when fewer than two blocks contribute.
    double stderr_ = std::numeric_limits<double>::quiet_NaN();
    uint64_t n = 0;
  };

  /// <a_t b_{t+lag}> / (<a_t><b_{t+lag}>).
  Estimate g2_cross(size_t lag) const;
  /// <b_t a_{t+lag}> / (<b_t><a_{t+lag}>), i.e. the cross correlation at
  /// negative lag -lag.
  Estimate g2_cross_reversed(size_t lag) const;
  /// <a_t a_{t+lag}> / (<a_t><a_{t+lag}>), lag >= 1. At lag 0 this is the
  /// raw second moment including shot noise; use g2_auto_zero_a for counts.
  Estimate g2_auto_a(size_t lag) const;
  Estimate g2_auto_b(size_t lag) const;
  /// Shot-noise-free zero-lag autocorrelation <a(a-1)>/<a>^2 (factorial
  /// moments; meaningful for integer count data).
  Estimate g2_auto_zero_a() const;
  Estimate g2_auto_zero_b() const;

  Estimate mean_a() const;
  Estimate mean_b() const;

  uint64_t count() const { return total_count_; }
  size_t max_lag() const { return max_lag_; }
  size_t block_len() const { return block_len_; }

  struct LagSums {
    uint64_t n = 0;
    double a_early = 0.0, b_early = 0.0;
    double a_late = 0.0, b_late = 0.0;
    double ab = 0.0, ba = 0.0, aa = 0.0, bb = 0.0;
  };
  struct GlobalSums {
    uint64_t n = 0;
    double a = 0.0, b = 0.0;
    double a_fact = 0.0, b_fact = 0.0;  // sum a(a-1), b(b-1)
  };

  /// Totals over all blocks (inspection hook, also used by the tests).
  LagSums lag_totals(size_t lag) const;
  GlobalSums global_totals() const;

 private:
  struct Block {
    uint64_t start = 0;
    uint64_t len = 0;
    bool closed = false;
    std::vector<LagSums> lags;
    GlobalSums global;
  };

  void open_block();
  Block& current_block();
  static void add_pair_sums(Block& target, size_t lag, double a_early, double b_early,
                            double a_late, double b_late);
  size_t block_index_of(uint64_t sample) const;
  std::pair<double, double> sample_at(uint64_t idx) const;
  Estimate ratio_estimate(double num, double den_x, double den_y, uint64_t n,
                          const char* what, size_t lag_for_blocks, int kind) const;

  size_t max_lag_;
  size_t block_len_;

  uint64_t total_count_ = 0;
  uint64_t record_start_ = 0;
  uint64_t first_record_len_ = kNoGap;  // kNoGap until the first gap

  // Ring over the last max_lag_+1 samples; slot t % (max_lag_+1).
  std::vector<double> ring_a_, ring_b_;

  std::vector<std::pair<double, double>> head_;  // first max_lag_ samples
  std::vector<Block> blocks_;

  static constexpr uint64_t kNoGap = std::numeric_limits<uint64_t>::max();
};

/// Result of fitting y(x) ~ offset + amplitude * cos(omega x + phase) with
/// fixed omega by weighted linear least squares.
struct CosineFit {
  double offset = 0.0;
  double offset_err = 0.0;
  double amplitude = 0.0;
  double amplitude_err = 0.0;
  double phase = 0.0;
  double residual_rms = 0.0;
};

/// Weighted least squares for A + P cos(omega x) + Q sin(omega x); weights
/// are 1/err^2 (err <= 0 entries get unit weight). Throws on fewer than 4
/// points.
CosineFit fit_cosine(const std::vector<double>& x, const std::vector<double>& y,
                     const std::vector<double>& yerr, double omega);

/// Period of the dominant nonzero frequency of uniformly sampled y, by
/// discrete Fourier transform: returns span * points / (k_dominant *
/// (points-0)) ... i.e. span / k_dominant where span = n * step.
double dominant_period(const std::vector<double>& y, double step);

}  // namespace hbtsim::corr

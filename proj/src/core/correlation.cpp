#include "core/correlation.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace hbtsim::corr {

namespace {
constexpr uint64_t kMinSamples = 1000;  // estimator precondition
constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

CorrelationAccumulator::CorrelationAccumulator(size_t max_lag, size_t block_len)
    : max_lag_(max_lag), block_len_(block_len) {
  require(block_len_ >= 1, ErrorCode::bad_argument, "accumulator: block_len must be >= 1");
  ring_a_.resize(max_lag_ + 1);
  ring_b_.resize(max_lag_ + 1);
  head_.reserve(max_lag_);
}

void CorrelationAccumulator::open_block() {
  Block b;
  b.start = total_count_;
  b.lags.resize(max_lag_ + 1);
  blocks_.push_back(std::move(b));
}

CorrelationAccumulator::Block& CorrelationAccumulator::current_block() {
  if (blocks_.empty() || blocks_.back().closed || blocks_.back().len >= block_len_) {
    open_block();
  }
  return blocks_.back();
}

void CorrelationAccumulator::add_pair_sums(Block& target, size_t lag, double ae, double be,
                                           double al, double bl) {
  LagSums& s = target.lags[lag];
  s.n += 1;
  s.a_early += ae;
  s.b_early += be;
  s.a_late += al;
  s.b_late += bl;
  s.ab += ae * bl;
  s.ba += be * al;
  s.aa += ae * al;
  s.bb += be * bl;
}

size_t CorrelationAccumulator::block_index_of(uint64_t sample) const {
  // Blocks are ordered by start; walk back from the end (pairs only reach
  // max_lag_ samples back, so this stays short).
  size_t bi = blocks_.size();
  while (bi > 1 && blocks_[bi - 1].start > sample) --bi;
  return bi - 1;
}

void CorrelationAccumulator::push_pair(double a, double b) {
  current_block();
  const uint64_t t = total_count_;
  const size_t ring_len = max_lag_ + 1;
  ring_a_[t % ring_len] = a;
  ring_b_[t % ring_len] = b;
  if (head_.size() < max_lag_) head_.emplace_back(a, b);

  const uint64_t reach = t - record_start_;  // pairs cannot cross a gap
  const size_t lmax = static_cast<size_t>(std::min<uint64_t>(max_lag_, reach));
  size_t bi = blocks_.size() - 1;
  for (size_t l = 0; l <= lmax; ++l) {
    const uint64_t t_early = t - l;
    while (bi > 0 && blocks_[bi].start > t_early) --bi;
    add_pair_sums(blocks_[bi], l, ring_a_[t_early % ring_len], ring_b_[t_early % ring_len], a,
                  b);
  }

  Block& blk = blocks_.back();
  GlobalSums& g = blk.global;
  g.n += 1;
  g.a += a;
  g.b += b;
  g.a_fact += a * (a - 1.0);
  g.b_fact += b * (b - 1.0);

  blk.len += 1;
  total_count_ += 1;
}

void CorrelationAccumulator::push_gap() {
  if (total_count_ == record_start_) return;  // collapse consecutive gaps
  if (first_record_len_ == kNoGap) first_record_len_ = total_count_;
  record_start_ = total_count_;
  if (!blocks_.empty()) blocks_.back().closed = true;  // blocks never span gaps
}

void CorrelationAccumulator::merge(const CorrelationAccumulator& rhs) {
  require(rhs.max_lag_ == max_lag_ && rhs.block_len_ == block_len_, ErrorCode::bad_argument,
          "accumulator merge: lag grid and block length must match");
  if (rhs.total_count_ == 0) return;
  const uint64_t offset = total_count_;
  const size_t ring_len = max_lag_ + 1;

  if (offset > 0) {
    // Cross-seam pairs: early sample in our final record, late sample in
    // rhs's first record. Both ends are within max_lag_ of the seam, so the
    // tail ring and rhs's head buffer cover them.
    const uint64_t rhs_first_len =
        rhs.first_record_len_ == kNoGap ? rhs.total_count_ : rhs.first_record_len_;
    for (size_t l = 1; l <= max_lag_; ++l) {
      const uint64_t u_max = std::min<uint64_t>(l, rhs_first_len);
      for (uint64_t u = 0; u < u_max; ++u) {
        if (offset + u < l) continue;
        const uint64_t t_early = offset + u - l;
        if (t_early < record_start_) continue;
        const auto [al, bl] = rhs.head_[static_cast<size_t>(u)];
        add_pair_sums(blocks_[block_index_of(t_early)], l, ring_a_[t_early % ring_len],
                      ring_b_[t_early % ring_len], al, bl);
      }
    }
    blocks_.back().closed = true;  // seam closes our last block
  }

  for (const Block& b : rhs.blocks_) {
    Block shifted = b;
    shifted.start += offset;
    blocks_.push_back(std::move(shifted));
  }

  // Tail ring: last max_lag_+1 samples of the concatenation.
  const uint64_t copy_from = rhs.total_count_ >= ring_len ? rhs.total_count_ - ring_len : 0;
  for (uint64_t idx = copy_from; idx < rhs.total_count_; ++idx) {
    const auto [a, b] = rhs.sample_at(idx);
    ring_a_[(offset + idx) % ring_len] = a;
    ring_b_[(offset + idx) % ring_len] = b;
  }

  // Head: first max_lag_ samples of the concatenation.
  for (uint64_t idx = 0; head_.size() < max_lag_ && idx < rhs.total_count_; ++idx) {
    head_.push_back(rhs.head_[static_cast<size_t>(idx)]);
  }

  if (rhs.first_record_len_ != kNoGap) {
    if (first_record_len_ == kNoGap) first_record_len_ = offset + rhs.first_record_len_;
    record_start_ = offset + rhs.record_start_;
  }  // else rhs is a single record continuing ours; record_start_ keeps.
  total_count_ += rhs.total_count_;
}

std::pair<double, double> CorrelationAccumulator::sample_at(uint64_t idx) const {
  // Valid only for idx in the head buffer or the last max_lag_+1 samples.
  if (idx < head_.size()) return head_[static_cast<size_t>(idx)];
  const size_t ring_len = max_lag_ + 1;
  return {ring_a_[idx % ring_len], ring_b_[idx % ring_len]};
}

CorrelationAccumulator::LagSums CorrelationAccumulator::lag_totals(size_t lag) const {
  require(lag <= max_lag_, ErrorCode::bad_argument, "lag outside the accumulator grid");
  LagSums total;
  for (const Block& b : blocks_) {
    const LagSums& s = b.lags[lag];
    total.n += s.n;
    total.a_early += s.a_early;
    total.b_early += s.b_early;
    total.a_late += s.a_late;
    total.b_late += s.b_late;
    total.ab += s.ab;
    total.ba += s.ba;
    total.aa += s.aa;
    total.bb += s.bb;
  }
  return total;
}

CorrelationAccumulator::GlobalSums CorrelationAccumulator::global_totals() const {
  GlobalSums total;
  for (const Block& b : blocks_) {
    total.n += b.global.n;
    total.a += b.global.a;
    total.b += b.global.b;
    total.a_fact += b.global.a_fact;
    total.b_fact += b.global.b_fact;
  }
  return total;
}

// kind: 0 = ab, 1 = ba, 2 = aa, 3 = bb, 4 = factorial a, 5 = factorial b,
// 6 = mean a, 7 = mean b.
CorrelationAccumulator::Estimate CorrelationAccumulator::ratio_estimate(
    double num, double den_x, double den_y, uint64_t n, const char* what, size_t lag,
    int kind) const {
  require(n >= kMinSamples, ErrorCode::bad_argument,
          std::string(what) + ": insufficient samples (need >= 1000)");
  const bool is_mean = (kind >= 6);
  if (!is_mean) {
    require(den_x != 0.0 && den_y != 0.0, ErrorCode::bad_argument,
            std::string(what) + ": zero mean, estimator undefined");
  }

  Estimate est;
  est.n = n;
  est.value = is_mean ? num / static_cast<double>(n)
                      : num * static_cast<double>(n) / (den_x * den_y);

  // Delete-one-block jackknife.
  std::vector<double> theta;
  theta.reserve(blocks_.size());
  for (const Block& b : blocks_) {
    double bn = 0.0, bnum = 0.0, bdx = 0.0, bdy = 0.0;
    if (kind <= 3) {
      const LagSums& s = b.lags[lag];
      if (s.n == 0) continue;
      bn = static_cast<double>(s.n);
      switch (kind) {
        case 0: bnum = s.ab; bdx = s.a_early; bdy = s.b_late; break;
        case 1: bnum = s.ba; bdx = s.b_early; bdy = s.a_late; break;
        case 2: bnum = s.aa; bdx = s.a_early; bdy = s.a_late; break;
        default: bnum = s.bb; bdx = s.b_early; bdy = s.b_late; break;
      }
    } else {
      const GlobalSums& g = b.global;
      if (g.n == 0) continue;
      bn = static_cast<double>(g.n);
      switch (kind) {
        case 4: bnum = g.a_fact; bdx = g.a; bdy = g.a; break;
        case 5: bnum = g.b_fact; bdx = g.b; bdy = g.b; break;
        case 6: bnum = g.a; break;
        default: bnum = g.b; break;
      }
    }
    const double rn = static_cast<double>(n) - bn;
    if (rn <= 0.0) continue;
    if (is_mean) {
      theta.push_back((num - bnum) / rn);
    } else {
      const double dx = den_x - bdx, dy = den_y - bdy;
      if (dx == 0.0 || dy == 0.0) continue;
      theta.push_back((num - bnum) * rn / (dx * dy));
    }
  }
  const size_t j = theta.size();
  if (j >= 2) {
    double mean = 0.0;
    for (double th : theta) mean += th;
    mean /= static_cast<double>(j);
    double ss = 0.0;
    for (double th : theta) ss += (th - mean) * (th - mean);
    est.stderr_ = std::sqrt(ss * static_cast<double>(j - 1) / static_cast<double>(j));
  }
  return est;
}

CorrelationAccumulator::Estimate CorrelationAccumulator::g2_cross(size_t lag) const {
  const LagSums s = lag_totals(lag);
  return ratio_estimate(s.ab, s.a_early, s.b_late, s.n, "g2_cross", lag, 0);
}

CorrelationAccumulator::Estimate CorrelationAccumulator::g2_cross_reversed(size_t lag) const {
  const LagSums s = lag_totals(lag);
  return ratio_estimate(s.ba, s.b_early, s.a_late, s.n, "g2_cross", lag, 1);
}

CorrelationAccumulator::Estimate CorrelationAccumulator::g2_auto_a(size_t lag) const {
  const LagSums s = lag_totals(lag);
  return ratio_estimate(s.aa, s.a_early, s.a_late, s.n, "g2_auto", lag, 2);
}

CorrelationAccumulator::Estimate CorrelationAccumulator::g2_auto_b(size_t lag) const {
  const LagSums s = lag_totals(lag);
  return ratio_estimate(s.bb, s.b_early, s.b_late, s.n, "g2_auto", lag, 3);
}

CorrelationAccumulator::Estimate CorrelationAccumulator::g2_auto_zero_a() const {
  const GlobalSums g = global_totals();
  return ratio_estimate(g.a_fact, g.a, g.a, g.n, "g2_auto_zero", 0, 4);
}

CorrelationAccumulator::Estimate CorrelationAccumulator::g2_auto_zero_b() const {
  const GlobalSums g = global_totals();
  return ratio_estimate(g.b_fact, g.b, g.b, g.n, "g2_auto_zero", 0, 5);
}

CorrelationAccumulator::Estimate CorrelationAccumulator::mean_a() const {
  const GlobalSums g = global_totals();
  return ratio_estimate(g.a, 1.0, 1.0, g.n, "mean", 0, 6);
}

CorrelationAccumulator::Estimate CorrelationAccumulator::mean_b() const {
  const GlobalSums g = global_totals();
  return ratio_estimate(g.b, 1.0, 1.0, g.n, "mean", 0, 7);
}

CosineFit fit_cosine(const std::vector<double>& x, const std::vector<double>& y,
                     const std::vector<double>& yerr, double omega) {
  const size_t n = x.size();
  require(n >= 4 && y.size() == n && yerr.size() == n, ErrorCode::bad_argument,
          "fit_cosine: need >= 4 points with matching arrays");
  // Normal equations for [A, P, Q] with basis {1, cos(wx), sin(wx)}.
  double m[3][3] = {};
  double v[3] = {};
  for (size_t i = 0; i < n; ++i) {
    const double w = yerr[i] > 0.0 ? 1.0 / (yerr[i] * yerr[i]) : 1.0;
    const double basis[3] = {1.0, std::cos(omega * x[i]), std::sin(omega * x[i])};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) m[r][c] += w * basis[r] * basis[c];
      v[r] += w * basis[r] * y[i];
    }
  }
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  require(std::abs(det) > 1e-12, ErrorCode::bad_argument, "fit_cosine: singular design matrix");
  double inv[3][3];
  inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
  inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
  inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
  inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
  inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
  inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
  inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
  inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
  inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;

  const double A = inv[0][0] * v[0] + inv[0][1] * v[1] + inv[0][2] * v[2];
  const double P = inv[1][0] * v[0] + inv[1][1] * v[1] + inv[1][2] * v[2];
  const double Q = inv[2][0] * v[0] + inv[2][1] * v[1] + inv[2][2] * v[2];

  CosineFit fit;
  fit.offset = A;
  fit.amplitude = std::sqrt(P * P + Q * Q);
  fit.phase = std::atan2(-Q, P);
  fit.offset_err = std::sqrt(std::max(0.0, inv[0][0]));
  if (fit.amplitude > 0.0) {
    // Delta method for amplitude = sqrt(P^2 + Q^2).
    const double gp = P / fit.amplitude, gq = Q / fit.amplitude;
    const double var = gp * gp * inv[1][1] + gq * gq * inv[2][2] + 2.0 * gp * gq * inv[1][2];
    fit.amplitude_err = std::sqrt(std::max(0.0, var));
  }
  double ss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double model = A + P * std::cos(omega * x[i]) + Q * std::sin(omega * x[i]);
    ss += (y[i] - model) * (y[i] - model);
  }
  fit.residual_rms = std::sqrt(ss / static_cast<double>(n));
  return fit;
}

double dominant_period(const std::vector<double>& y, double step) {
  const size_t n = y.size();
  require(n >= 4, ErrorCode::bad_argument, "dominant_period: need >= 4 points");
  size_t best_k = 1;
  double best_power = -1.0;
  for (size_t k = 1; k <= n / 2; ++k) {
    double re = 0.0, im = 0.0;
    for (size_t t = 0; t < n; ++t) {
      const double arg =
          kTwoPi * static_cast<double>(k) * static_cast<double>(t) / static_cast<double>(n);
      re += y[t] * std::cos(arg);
      im -= y[t] * std::sin(arg);
    }
    const double power = re * re + im * im;
    if (power > best_power) {
      best_power = power;
      best_k = k;
    }
  }
  const double span = step * static_cast<double>(n);
  return span / static_cast<double>(best_k);
}

}  // namespace hbtsim::corr

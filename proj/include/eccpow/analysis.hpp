#pragma once

// Analytical side of the puzzle: decoding-success probability bounds,
// first-success hash-cycle statistics, and Monte Carlo estimators. Bound
// arithmetic is exact (big integers/rationals) until a final floating
// render, so binomial sums at n=160 scale do not overflow or round.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "eccpow/decoder.hpp"
#include "eccpow/pcm.hpp"
#include "eccpow/prng.hpp"
#include "eccpow/util.hpp"

namespace eccpow {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// One row of the design space: code dimensions plus the published upper
// bound delta1 on the relative minimum distance for (w_c, w_r).
struct CodePoint {
  std::uint32_t n = 0;
  std::uint32_t k = 0;
  std::uint16_t w_c = 0;
  std::uint16_t w_r = 0;
  BigRational delta1;

  double alpha() const {
    return static_cast<double>(w_c) / static_cast<double>(w_r);
  }
};

// Design dimension k = n - m = n(1 - w_c/w_r), before rank correction.
inline std::uint32_t design_k(std::uint32_t n, std::uint16_t w_c,
                              std::uint16_t w_r) {
  return n - n / w_r * w_c;
}

// delta1 values published for regular (w_c, w_r) ensembles; shipped data,
// not computed here.
inline std::optional<BigRational> delta1_lookup(std::uint16_t w_c,
                                                std::uint16_t w_r) {
  if (w_c == 4 && w_r == 5) return BigRational(3238, 10000);
  if (w_c == 4 && w_r == 8) return BigRational(1765, 10000);
  return std::nullopt;
}

inline double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0))
    throw ParameterError("binary entropy is defined on [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

inline BigInt binomial(std::uint32_t n, std::uint32_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt c = 1;
  for (std::uint32_t i = 1; i <= k; ++i) {
    c *= n - k + i;
    c /= i;
  }
  return c;
}

// |Hamming ball of radius t| = sum_{l=0}^{t} C(n, l).
inline BigInt hamming_ball(std::uint32_t n, std::uint32_t t) {
  BigInt sum = 0;
  BigInt c = 1;
  for (std::uint32_t l = 0;; ++l) {
    sum += c;
    if (l == t || l == n) break;
    c *= n - l;
    c /= l + 1;
  }
  return sum;
}

// Decoding-success probability of an optimal (bounded-distance) decoder:
// p = 2^{k-n} * sum_{l=0}^{floor((d-1)/2)} C(n, l), exact.
inline BigRational ds_probability_optimal(std::uint32_t n, std::uint32_t k,
                                          std::uint32_t d) {
  if (d < 1 || d > n)
    throw ParameterError("ds probability requires 1 <= d <= n");
  if (k > n) throw ParameterError("ds probability requires k <= n");
  BigInt ball = hamming_ball(n, (d - 1) / 2);
  BigInt denom = BigInt(1) << (n - k);
  return BigRational(ball, denom);
}

struct Prop1Bounds {
  double lower = 0;
  double upper = 0;
  double log2_lower = 0;  // exact exponents; the linear values may underflow
  double log2_upper = 0;
};

// 2^{-n*alpha} <= p <= 2^{-n(alpha - H(delta/2))}.
inline Prop1Bounds prop1_bounds(std::uint32_t n, double alpha, double delta) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ParameterError("prop1 bounds require 0 < alpha < 1");
  if (!(delta > 0.0 && delta < 0.5))
    throw ParameterError("prop1 bounds require 0 < delta < 1/2");
  Prop1Bounds b;
  b.log2_lower = -static_cast<double>(n) * alpha;
  b.log2_upper = -static_cast<double>(n) * (alpha - binary_entropy(delta / 2));
  b.lower = std::exp2(b.log2_lower);
  b.upper = std::exp2(b.log2_upper);
  return b;
}

// g(n, k, delta1) = 2^{k-n} * sum_{l=0}^{floor((floor(n*delta1)-1)/2)} C(n,l),
// the closed-form upper bound on p built from the ensemble distance bound.
inline BigRational g_bound(std::uint32_t n, std::uint32_t k,
                           const BigRational& delta1) {
  if (!(delta1 > 0 && delta1 < 1))
    throw ParameterError("g bound requires 0 < delta1 < 1");
  if (k > n) throw ParameterError("g bound requires k <= n");
  BigInt nd = numerator(delta1) * n / denominator(delta1);  // floor(n*delta1)
  if (nd < 1) throw ParameterError("g bound requires floor(n*delta1) >= 1");
  auto t = static_cast<std::uint32_t>((nd - 1) / 2);
  return BigRational(hamming_ball(n, t), BigInt(1) << (n - k));
}

// First-success hash cycle X_M of an M-miner race:
// X_M ~ Geometric(1 - p_fa) with p_fa = (1 - p)^M.
struct FshcStats {
  double p = 0;
  std::uint64_t miners = 0;
  double p_fa = 0;
  double mean = 0;
  double variance = 0;

  // Pr{X_M = l} = p_fa^{l-1} (1 - p_fa)
  double pmf(std::uint64_t l) const {
    if (l < 1) return 0.0;
    return std::exp(static_cast<double>(l - 1) * std::log(p_fa)) * (1.0 - p_fa);
  }
};

inline FshcStats fshc_stats(double p, std::uint64_t miners) {
  if (!(p > 0.0 && p <= 1.0))
    throw ParameterError("fshc stats require 0 < p <= 1 (p = 0 has no mean)");
  if (miners < 1) throw ParameterError("fshc stats require M >= 1");
  FshcStats s;
  s.p = p;
  s.miners = miners;
  double log_pfa = static_cast<double>(miners) * std::log1p(-p);
  s.p_fa = std::exp(log_pfa);
  double one_minus_pfa = -std::expm1(log_pfa);
  s.mean = 1.0 / one_minus_pfa;
  s.variance = s.p_fa / (one_minus_pfa * one_minus_pfa);
  return s;
}

// Exact-rational variant; doubles flatten mean - 1 below 2^-53, which hides
// the strict monotonicity of the mean in M.
struct FshcStatsExact {
  BigRational p;
  std::uint64_t miners = 0;
  BigRational p_fa;
  BigRational mean;
  BigRational variance;
};

inline FshcStatsExact fshc_stats_exact(const BigRational& p,
                                       std::uint64_t miners) {
  if (!(p > 0 && p <= 1))
    throw ParameterError("fshc stats require 0 < p <= 1 (p = 0 has no mean)");
  if (miners < 1) throw ParameterError("fshc stats require M >= 1");
  FshcStatsExact s;
  s.p = p;
  s.miners = miners;
  // (1-p)^M as a coprime pair: gcd(b-a, b) = gcd(a, b) = 1.
  BigInt a = numerator(p), b = denominator(p);
  BigInt num = pow(b - a, static_cast<unsigned>(miners));
  BigInt den = pow(b, static_cast<unsigned>(miners));
  s.p_fa = BigRational(num, den);
  s.mean = BigRational(den, den - num);
  s.variance = s.p_fa * s.mean * s.mean;
  return s;
}

inline BigRational fshc_lower_bound_exact(std::uint32_t n, std::uint32_t k,
                                          const BigRational& delta1,
                                          std::uint64_t miners) {
  if (miners < 1) throw ParameterError("fshc lower bound requires M >= 1");
  BigRational g = g_bound(n, k, delta1);
  // 1 / (1 - (1-g)^M), exact.
  BigInt a = numerator(g), b = denominator(g);
  BigInt num = pow(b - a, static_cast<unsigned>(miners));
  BigInt den = pow(b, static_cast<unsigned>(miners));
  return BigRational(den, den - num);
}

// Lower bound on E[X_M] induced by p <= g(n, k, delta1).
inline double fshc_lower_bound(std::uint32_t n, std::uint32_t k,
                               const BigRational& delta1,
                               std::uint64_t miners) {
  return fshc_lower_bound_exact(n, k, delta1, miners).convert_to<double>();
}

struct PEstimate {
  double p_hat = 0;
  double ci_low = 0;
  double ci_high = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;

  double half_width() const { return (ci_high - ci_low) / 2; }
};

// Monte Carlo decoding-success probability: fraction of uniform random
// n-bit inputs (from the seeded deterministic stream) on which the decoder
// converges. Wilson 95% interval.
inline PEstimate estimate_p(const ParityCheckMatrix& h,
                            const DecoderParams& params, std::uint64_t trials,
                            std::int64_t seed) {
  if (trials < 1) throw ParameterError("estimate_p requires trials >= 1");
  MinSumDecoder decoder(h, params);
  Sha256Stream rng(seed);
  std::uint64_t successes = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    BitVec r = rng.next_bits(h.n);
    if (decoder.decode(r).converged) ++successes;
  }
  PEstimate est;
  est.trials = trials;
  est.successes = successes;
  est.p_hat = static_cast<double>(successes) / static_cast<double>(trials);
  const double z = 1.959963984540054;  // 97.5% normal quantile
  double t = static_cast<double>(trials);
  double denom = 1.0 + z * z / t;
  double center = (est.p_hat + z * z / (2 * t)) / denom;
  double half = z *
                std::sqrt(est.p_hat * (1.0 - est.p_hat) / t +
                          z * z / (4 * t * t)) /
                denom;
  est.ci_low = std::max(0.0, center - half);
  est.ci_high = std::min(1.0, center + half);
  return est;
}

// Exact decoder success fraction over all 2^n inputs; grounds the Monte
// Carlo estimator and the exponential floor on enumerable codes.
inline BigRational success_fraction_exhaustive(const ParityCheckMatrix& h,
                                               const DecoderParams& params) {
  if (h.n > 20)
    throw CapacityError("exhaustive success fraction capped at n <= 20");
  MinSumDecoder decoder(h, params);
  BitVec r(h.n);
  std::uint64_t successes = 0;
  const std::uint64_t total = std::uint64_t{1} << h.n;
  for (std::uint64_t v = 0; v < total; ++v) {
    for (std::uint32_t j = 0; j < h.n; ++j) r[j] = (v >> j) & 1u;
    if (decoder.decode(r).converged) ++successes;
  }
  return BigRational(successes, total);
}

struct GofResult {
  double statistic = 0;
  double p_value = 1;
  std::size_t bins = 0;
  double rate = 0;  // fitted geometric success rate 1/mean
};

// Chi-square goodness-of-fit of positive integer samples against the
// geometric distribution with rate 1/mean. Cells are pooled left to right
// to expected count >= 5; the tail joins the last cell once its expected
// mass drops below 5. Degrees of freedom = bins - 2 (one fitted parameter);
// fewer than 3 bins degenerates to a pass.
inline GofResult geometric_gof(std::span<const std::uint64_t> samples) {
  if (samples.size() < 100)
    throw InputError("geometric gof requires at least 100 samples");
  double sum = 0;
  for (std::uint64_t s : samples) {
    if (s < 1) throw InputError("geometric gof samples must be >= 1");
    sum += static_cast<double>(s);
  }
  const double n = static_cast<double>(samples.size());
  const double mean = sum / n;
  GofResult res;
  res.rate = 1.0 / mean;
  if (res.rate >= 1.0) {  // every sample is 1: rate-1 geometric, trivially fit
    res.bins = 1;
    return res;
  }

  std::map<std::uint64_t, std::uint64_t> counts;
  for (std::uint64_t s : samples) ++counts[s];

  const double q = res.rate, r = 1.0 - q;
  double expect_l = n * q;  // expected count at value l
  double tail = n * r;      // expected count of values > l
  auto next_count = counts.begin();
  std::uint64_t seen = 0;  // observed count of values <= l

  std::vector<double> bin_exp, bin_obs;
  double e_acc = 0, o_acc = 0;
  for (std::uint64_t l = 1;; ++l) {
    e_acc += expect_l;
    while (next_count != counts.end() && next_count->first == l) {
      o_acc += static_cast<double>(next_count->second);
      seen += next_count->second;
      ++next_count;
    }
    if (tail < 5.0) {  // fold the entire remaining tail into this bin
      e_acc += tail;
      o_acc += n - static_cast<double>(seen);
      bin_exp.push_back(e_acc);
      bin_obs.push_back(o_acc);
      break;
    }
    if (e_acc >= 5.0) {
      bin_exp.push_back(e_acc);
      bin_obs.push_back(o_acc);
      e_acc = 0;
      o_acc = 0;
    }
    expect_l *= r;
    tail *= r;
  }

  res.bins = bin_exp.size();
  for (std::size_t i = 0; i < bin_exp.size(); ++i) {
    double d = bin_obs[i] - bin_exp[i];
    res.statistic += d * d / bin_exp[i];
  }
  if (res.bins < 3) {
    res.p_value = 1.0;
    return res;
  }
  boost::math::chi_squared dist(static_cast<double>(res.bins - 2));
  res.p_value = boost::math::cdf(boost::math::complement(dist, res.statistic));
  return res;
}

// Block generation time model: T = expected_cycles * (c*m*n) / tau.
inline double block_time(double tau, double expected_cycles, double m,
                         double n, double c) {
  if (!(tau > 0 && expected_cycles > 0 && m > 0 && n > 0 && c > 0))
    throw ParameterError("block time requires positive arguments");
  return expected_cycles * (c * m * n) / tau;
}

// Exact form of sum_{l=0}^{k} C(n,l) <= 2^{n H(k/n)}: both sides scaled by
// k^k (n-k)^{n-k}, turning the right side into n^n.
inline bool entropy_sum_bound_holds(std::uint32_t n, std::uint32_t k) {
  if (k < 1 || 2 * k > n)
    throw ParameterError("entropy-sum check requires 1 <= k <= n/2");
  BigInt lhs = hamming_ball(n, k) * pow(BigInt(k), k) *
               pow(BigInt(n - k), n - k);
  return lhs <= pow(BigInt(n), n);
}

}  // namespace eccpow

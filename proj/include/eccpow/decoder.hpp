#pragma once

// Quantized integer min-sum decoder on the bipartite graph of H. All
// message arithmetic is integral (channel values +-L0, messages saturated
// to +-127, totals in 32-bit), so identical inputs decode bit-identically
// on every platform.

#include <cmath>
#include <cstdint>
#include <vector>

#include "eccpow/pcm.hpp"
#include "eccpow/util.hpp"

namespace eccpow {

struct DecoderParams {
  std::uint32_t max_iter = 20;
  std::uint32_t epsilon_num = 1;  // crossover probability epsilon = num/den
  std::uint32_t epsilon_den = 4;
  std::uint32_t llr_scale = 8;

  friend bool operator==(const DecoderParams&, const DecoderParams&) = default;
};

inline constexpr std::int32_t kLlrSaturation = 127;

// L0 = round(llr_scale * ln((1-eps)/eps)), the quantized channel magnitude.
inline std::int32_t channel_llr_magnitude(const DecoderParams& p) {
  if (p.max_iter == 0)
    throw ParameterError("decoder: max_iter must be positive");
  if (p.llr_scale == 0)
    throw ParameterError("decoder: llr_scale must be positive");
  if (p.epsilon_num == 0 ||
      2 * static_cast<std::uint64_t>(p.epsilon_num) >= p.epsilon_den)
    throw ParameterError("decoder: epsilon must satisfy 0 < epsilon < 1/2");
  double ratio = static_cast<double>(p.epsilon_den - p.epsilon_num) /
                 static_cast<double>(p.epsilon_num);
  auto l0 = static_cast<std::int32_t>(std::llround(p.llr_scale * std::log(ratio)));
  if (l0 < 1 || l0 > kLlrSaturation)
    throw ParameterError("decoder: quantized channel LLR out of [1, 127]");
  return l0;
}

struct DecoderOutput {
  BitVec word;
  bool converged = false;
  std::uint32_t iterations_used = 0;
};

inline bool is_codeword(const ParityCheckMatrix& h, const BitVec& c) {
  if (c.size() != h.n)
    throw InputError("is_codeword: word length does not match H");
  for (const auto& row : h.rows) {
    unsigned parity = 0;
    for (std::uint32_t col : row) parity ^= c[col] & 1u;
    if (parity) return false;
  }
  return true;
}

// One decoder instance holds the graph in CSR form plus iteration
// workspace; instances are not safe for concurrent decode calls, but many
// instances may share one H. Construction is O(edges).
class MinSumDecoder {
 public:
  MinSumDecoder(const ParityCheckMatrix& h, const DecoderParams& params)
      : n_(h.n), params_(params), l0_(channel_llr_magnitude(params)) {
    row_ptr_.reserve(h.rows.size() + 1);
    row_ptr_.push_back(0);
    for (const auto& row : h.rows) {
      for (std::uint32_t col : row) edge_var_.push_back(col);
      row_ptr_.push_back(static_cast<std::uint32_t>(edge_var_.size()));
    }
    var_edges_.resize(n_);
    for (std::uint32_t e = 0; e < edge_var_.size(); ++e)
      var_edges_[edge_var_[e]].push_back(e);
    v2c_.resize(edge_var_.size());
    c2v_.resize(edge_var_.size());
    total_.resize(n_);
    word_.resize(n_);
  }

  std::uint32_t n() const { return n_; }
  const DecoderParams& params() const { return params_; }
  std::int32_t channel_magnitude() const { return l0_; }

  DecoderOutput decode(const BitVec& r) {
    if (r.size() != n_)
      throw InputError("decode: input length does not match H");

    DecoderOutput out;
    out.word.resize(n_);
    for (std::uint32_t j = 0; j < n_; ++j) out.word[j] = r[j] & 1u;
    if (syndrome_zero(out.word)) {
      out.converged = true;
      out.iterations_used = 0;
      return out;
    }

    for (std::uint32_t j = 0; j < n_; ++j) {
      std::int32_t ch = (r[j] & 1u) ? -l0_ : l0_;
      for (std::uint32_t e : var_edges_[j]) v2c_[e] = ch;
    }

    for (std::uint32_t iter = 1; iter <= params_.max_iter; ++iter) {
      update_checks();
      update_totals(r);
      for (std::uint32_t j = 0; j < n_; ++j) word_[j] = total_[j] < 0 ? 1 : 0;
      if (syndrome_zero(word_)) {
        out.word = word_;
        out.converged = true;
        out.iterations_used = iter;
        return out;
      }
      for (std::uint32_t e = 0; e < edge_var_.size(); ++e)
        v2c_[e] = saturate(total_[edge_var_[e]] - c2v_[e]);
    }

    out.word = word_;
    out.converged = false;
    out.iterations_used = params_.max_iter;
    return out;
  }

 private:
  static std::int32_t saturate(std::int32_t v) {
    if (v > kLlrSaturation) return kLlrSaturation;
    if (v < -kLlrSaturation) return -kLlrSaturation;
    return v;
  }

  bool syndrome_zero(const BitVec& c) const {
    for (std::size_t row = 0; row + 1 < row_ptr_.size(); ++row) {
      unsigned parity = 0;
      for (std::uint32_t e = row_ptr_[row]; e < row_ptr_[row + 1]; ++e)
        parity ^= c[edge_var_[e]] & 1u;
      if (parity) return false;
    }
    return true;
  }

  void update_checks() {
    for (std::size_t row = 0; row + 1 < row_ptr_.size(); ++row) {
      const std::uint32_t begin = row_ptr_[row], end = row_ptr_[row + 1];
      std::int32_t min1 = kLlrSaturation + 1, min2 = kLlrSaturation + 1;
      std::uint32_t argmin = begin;
      int sign_prod = 1;
      for (std::uint32_t e = begin; e < end; ++e) {
        std::int32_t v = v2c_[e];
        if (v < 0) sign_prod = -sign_prod;
        std::int32_t mag = v < 0 ? -v : v;
        if (mag < min1) {
          min2 = min1;
          min1 = mag;
          argmin = e;
        } else if (mag < min2) {
          min2 = mag;
        }
      }
      for (std::uint32_t e = begin; e < end; ++e) {
        std::int32_t mag = e == argmin ? min2 : min1;
        int sign = sign_prod * (v2c_[e] < 0 ? -1 : 1);
        c2v_[e] = saturate(sign * mag);
      }
    }
  }

  void update_totals(const BitVec& r) {
    for (std::uint32_t j = 0; j < n_; ++j)
      total_[j] = (r[j] & 1u) ? -l0_ : l0_;
    for (std::uint32_t e = 0; e < edge_var_.size(); ++e)
      total_[edge_var_[e]] += c2v_[e];
  }

  std::uint32_t n_;
  DecoderParams params_;
  std::int32_t l0_;
  std::vector<std::uint32_t> row_ptr_;
  std::vector<std::uint32_t> edge_var_;
  std::vector<std::vector<std::uint32_t>> var_edges_;
  std::vector<std::int32_t> v2c_, c2v_, total_;
  BitVec word_;
};

inline DecoderOutput decode(const ParityCheckMatrix& h, const BitVec& r,
                            const DecoderParams& params) {
  MinSumDecoder d(h, params);
  return d.decode(r);
}

}  // namespace eccpow

// Acceptance suite: one pass/fail line per criterion, tolerances and time
// budgets pinned inline. Exits 0 only if every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "eccpow/eccpow.hpp"

using namespace eccpow;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 3) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

Digest stream_digest(Sha256Stream& rng) {
  Digest d;
  for (auto& b : d) b = rng.next_byte();
  return d;
}

// 1. Matrix structure: 100 instances at (120, 4, 5) are 96x120 with exact
// row/column degrees, reproducible, and bit-identical to an independently
// coded dense construction. Budget 5 s.
bool criterion1(std::string* detail) {
  auto t0 = Clock::now();
  const std::uint32_t n = 120;
  const std::uint16_t w_c = 4, w_r = 5;
  const std::uint32_t block_rows = n / w_r;
  Sha256Stream rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    Digest prev = stream_digest(rng);
    ParityCheckMatrix h = build_pcm(prev, n, w_c, w_r);
    if (h.m != 96 || h.n != 120 || h.rows.size() != 96) {
      *detail = "wrong dimensions";
      return false;
    }
    std::vector<int> col_deg(n, 0);
    for (const auto& row : h.rows) {
      if (row.size() != w_r) {
        *detail = "row degree != " + std::to_string(w_r);
        return false;
      }
      for (std::uint32_t c : row) ++col_deg[c];
    }
    for (int d : col_deg)
      if (d != w_c) {
        *detail = "column degree != " + std::to_string(w_c);
        return false;
      }

    // Independent construction: dense base block plus permuted copies.
    std::int64_t s = 0;
    for (std::uint8_t byte : prev) s += byte;
    Gf2Matrix ref(h.m, n);
    for (std::uint16_t b = 0; b < w_c; ++b) {
      std::vector<std::uint32_t> perm(n);
      for (std::uint32_t j = 0; j < n; ++j) perm[j] = j;
      if (b > 0) perm = seeded_permutation(s - b + 1, n);
      for (std::uint32_t i = 0; i < block_rows; ++i)
        for (std::uint32_t j = i * w_r; j < (i + 1) * w_r; ++j)
          ref.set(b * block_rows + i, perm[j], true);
    }
    if (!(to_dense(h) == ref)) {
      *detail = "independent dense construction differs";
      return false;
    }
    if (!(build_pcm(prev, n, w_c, w_r) == h)) {
      *detail = "rebuild is not bit-identical";
      return false;
    }
  }
  double dt = seconds_since(t0);
  *detail = "100 instances at (120,4,5), independent reconstruction match, " +
            fmt(dt) + " s (budget 5 s)";
  return dt < 5.0;
}

// 2. Null space: on 20 codes with n <= 48, H*G = 0 exactly and
// rank(H) + k' = n, with the rank recomputed independently.
bool criterion2(std::string* detail) {
  struct Params {
    std::uint32_t n;
    std::uint16_t w_c, w_r;
  };
  const Params sets[] = {{12, 3, 6}, {24, 3, 6}, {48, 3, 6}, {24, 4, 6},
                         {48, 4, 8}, {30, 3, 5}, {40, 4, 5}, {36, 3, 4},
                         {48, 5, 6}, {42, 3, 7}};
  Sha256Stream rng(202);
  int checked = 0;
  for (const Params& p : sets) {
    for (int rep = 0; rep < 2; ++rep) {
      ParityCheckMatrix h = build_pcm(stream_digest(rng), p.n, p.w_c, p.w_r);
      GeneratorMatrix g = derive_generator(h);
      if (g.rank + g.k() != p.n) {
        *detail = "rank + k' != n at n=" + std::to_string(p.n);
        return false;
      }
      if (g.rank != gf2_rank(to_dense(h))) {
        *detail = "rank disagrees with independent elimination";
        return false;
      }
      for (const auto& row : h.rows)
        for (std::size_t j = 0; j < g.k(); ++j) {
          bool parity = false;
          for (std::uint32_t c : row) parity ^= g.mat.get(c, j);
          if (parity) {
            *detail = "H*G != 0 at n=" + std::to_string(p.n);
            return false;
          }
        }
      ++checked;
    }
  }
  *detail = std::to_string(checked) + " codes, H*G = 0 and rank + k' = n";
  return true;
}

// 3. Decoder soundness: 10^5 random inputs at (24,3,6) never converge to a
// non-codeword; codeword inputs are 0-iteration fixed points; exhaustive
// sweep at n = 12.
bool criterion3(std::string* detail) {
  DecoderParams params;
  ParityCheckMatrix h24 = build_pcm(sha256("soundness-24"), 24, 3, 6);
  MinSumDecoder dec24(h24, params);
  Sha256Stream rng(303);
  std::uint64_t converged = 0;
  for (int i = 0; i < 100000; ++i) {
    DecoderOutput out = dec24.decode(rng.next_bits(24));
    if (out.converged) {
      ++converged;
      if (!is_codeword(h24, out.word)) {
        *detail = "converged output fails the syndrome check";
        return false;
      }
    } else if (out.iterations_used != params.max_iter) {
      *detail = "non-convergence before the iteration cap";
      return false;
    }
  }

  GeneratorMatrix g = derive_generator(h24);
  for (int i = 0; i < 50; ++i) {
    BitVec cw(24, 0);
    for (std::size_t j = 0; j < g.k(); ++j)
      if (rng.next_bits(1)[0])
        for (std::uint32_t r = 0; r < 24; ++r) cw[r] ^= g.mat.get(r, j);
    DecoderOutput out = dec24.decode(cw);
    if (!out.converged || out.iterations_used != 0 || out.word != cw) {
      *detail = "codeword input is not a 0-iteration fixed point";
      return false;
    }
  }

  ParityCheckMatrix h12 = build_pcm(sha256("soundness-12"), 12, 3, 6);
  MinSumDecoder dec12(h12, params);
  BitVec r(12);
  for (std::uint32_t v = 0; v < (1u << 12); ++v) {
    for (std::uint32_t j = 0; j < 12; ++j) r[j] = (v >> j) & 1u;
    DecoderOutput out = dec12.decode(r);
    if (out.converged && !is_codeword(h12, out.word)) {
      *detail = "exhaustive n=12: converged to a non-codeword";
      return false;
    }
    if (is_codeword(h12, r) &&
        (!out.converged || out.iterations_used != 0 || out.word != r)) {
      *detail = "exhaustive n=12: codeword not a fixed point";
      return false;
    }
  }
  *detail = "10^5 random inputs at n=24 (" + std::to_string(converged) +
            " converged), 50 codeword fixed points, exhaustive n=12";
  return true;
}

// 4. Success-probability floor 2^{k'-n}: exact at n = 12, Monte Carlo with
// a 3-sigma allowance at n = 24.
bool criterion4(std::string* detail) {
  DecoderParams params;
  ParityCheckMatrix h12 = build_pcm(sha256("floor-12"), 12, 3, 6);
  std::size_t k12 = derive_generator(h12).k();
  BigRational fraction = success_fraction_exhaustive(h12, params);
  BigRational floor12(1, BigInt(1) << (12 - k12));
  if (fraction < floor12) {
    *detail = "exhaustive fraction below 2^{k'-12}";
    return false;
  }

  ParityCheckMatrix h24 = build_pcm(sha256("floor-24"), 24, 3, 6);
  std::size_t k24 = derive_generator(h24).k();
  PEstimate est = estimate_p(h24, params, 100000, 404);
  double floor24 = std::exp2(static_cast<double>(k24) - 24.0);
  if (est.p_hat < floor24 - 3.0 * est.half_width()) {
    *detail = "estimate below 2^{k'-24} - 3*CI";
    return false;
  }
  *detail = "n=12 fraction " + fmt(fraction.convert_to<double>()) +
            " >= 2^-" + std::to_string(12 - k12) + "; n=24 p_hat " +
            fmt(est.p_hat) + " >= " + fmt(floor24) + " - 3*CI";
  return true;
}

// 5. Geometric law: 10^4 games per M in {1,2,5} against p_hat from 10^5
// trials; mean within 5%, chi-square fit at significance 0.01. Budget 600 s.
bool criterion5(std::string* detail) {
  auto t0 = Clock::now();
  ChainConfig cfg;
  cfg.difficulty_levels = {24};
  std::vector<std::uint32_t> m_list{1, 2, 5};
  std::vector<MiningGameReport> reports =
      run_experiment(cfg, 10000, m_list, 424242, 100000);
  std::ostringstream os;
  bool pass = true;
  for (const MiningGameReport& rep : reports) {
    double rel = std::abs(rep.mean - rep.theory.mean) / rep.theory.mean;
    if (rel > 0.05) pass = false;
    if (rep.gof.p_value < 0.01) pass = false;
    os << "M=" << rep.miners << " mean " << fmt(rep.mean, 4) << " vs "
       << fmt(rep.theory.mean, 4) << " (" << fmt(100 * rel, 2) << "%), gof_p "
       << fmt(rep.gof.p_value, 2) << "; ";
  }
  double dt = seconds_since(t0);
  os << fmt(dt) << " s (budget 600 s)";
  *detail = os.str();
  return pass && dt < 600.0;
}

// 6. Mean strictly decreasing in M at exact precision for
// p in {1e-4, 1e-2, 1/2} over M = 1..10^4, with the closed form spot-checked
// against the library at decade checkpoints; the double version reaches 1
// within 1e-6 by M = 10^6 at p = 0.01.
bool criterion6(std::string* detail) {
  for (auto [a0, b0] : {std::pair<int, int>{1, 10000}, {1, 100}, {1, 2}}) {
    BigInt a = a0, b = b0;
    BigInt num = b - a, den = b;  // (1-p)^M as a coprime pair, M = 1
    BigInt prev_num = num, prev_den = den;
    for (int m = 2; m <= 10000; ++m) {
      num *= b - a;
      den *= b;
      // mean_M < mean_{M-1}  <=>  den*prev_num > prev_den*num
      if (!(den * prev_num > prev_den * num)) {
        *detail = "mean not strictly decreasing at p=1/" +
                  std::to_string(b0) + ", M=" + std::to_string(m);
        return false;
      }
      if (m == 10 || m == 100 || m == 1000 || m == 10000) {
        FshcStatsExact lib = fshc_stats_exact(BigRational(a, b), m);
        if (lib.mean != BigRational(den, den - num)) {
          *detail = "library mean differs from the closed form at M=" +
                    std::to_string(m);
          return false;
        }
      }
      prev_num = num;
      prev_den = den;
    }
  }
  double tail = fshc_stats(0.01, 1000000).mean;
  if (!(tail < 1.0 + 1e-6)) {
    *detail = "mean(p=0.01, M=10^6) = " + fmt(tail, 17) + " not within 1e-6 of 1";
    return false;
  }
  *detail = "strict decrease over M=1..10^4 at p in {1e-4,1e-2,0.5}; "
            "mean(0.01, 10^6) = " + fmt(tail, 8);
  return true;
}

// 7. Bound-table scaling: M-scaling ratios within [4.85, 5.15] and
// [19.4, 20.6] per row, and strict growth of the bound in n. Absolute
// agreement with the published numbers is reported elsewhere, not gated.
bool criterion7(std::string* detail) {
  const BigRational delta1(3238, 10000);
  struct Row {
    std::uint32_t n, k;
  };
  const Row rows[] = {{80, 12}, {120, 24}, {160, 32}};
  std::ostringstream os;
  for (const Row& row : rows) {
    double m1 = fshc_lower_bound(row.n, row.k, delta1, 1);
    double m5 = fshc_lower_bound(row.n, row.k, delta1, 5);
    double m20 = fshc_lower_bound(row.n, row.k, delta1, 20);
    double r5 = m1 / m5, r20 = m1 / m20;
    if (r5 < 4.85 || r5 > 5.15 || r20 < 19.4 || r20 > 20.6) {
      *detail = "scaling ratios out of band at n=" + std::to_string(row.n);
      return false;
    }
    os << "n=" << row.n << " r5=" << fmt(r5, 6) << " r20=" << fmt(r20, 6)
       << "; ";
  }
  for (std::uint64_t m : {std::uint64_t{1}, std::uint64_t{5},
                          std::uint64_t{20}}) {
    if (!(fshc_lower_bound_exact(80, 12, delta1, m) <
              fshc_lower_bound_exact(120, 24, delta1, m) &&
          fshc_lower_bound_exact(120, 24, delta1, m) <
              fshc_lower_bound_exact(160, 32, delta1, m))) {
      *detail = "bound not strictly increasing in n at M=" + std::to_string(m);
      return false;
    }
  }
  os << "strict growth in n";
  *detail = os.str();
  return true;
}

// 8. Entropy-sum inequality, exact big-integer form, all 1 <= k <= n/2 for
// n <= 64.
bool criterion8(std::string* detail) {
  std::size_t pairs = 0;
  for (std::uint32_t n = 2; n <= 64; ++n)
    for (std::uint32_t k = 1; 2 * k <= n; ++k) {
      ++pairs;
      if (!entropy_sum_bound_holds(n, k)) {
        *detail = "violated at n=" + std::to_string(n) +
                  ", k=" + std::to_string(k);
        return false;
      }
    }
  *detail = "holds for all " + std::to_string(pairs) + " (n,k) pairs, n<=64";
  return true;
}

// 9. Cost asymmetry at n = 24: verifying a header costs at most two hash
// cycles of wall time, and solve amortizes to one cycle per cycle spent
// (within 20%).
bool criterion9(std::string* detail) {
  ChainConfig cfg;
  cfg.difficulty_levels = {24};
  DecoderParams params = decoder_params(cfg);
  BlockHeader tmpl;
  tmpl.version = 1;
  tmpl.prev_hash = sha256("asymmetry");
  tmpl.merkle_root = sha256("asymmetry-merkle");
  tmpl.timestamp = kSimGenesisTimestamp;
  tmpl.n = 24;
  tmpl.w_c = 3;
  tmpl.w_r = 6;
  ParityCheckMatrix h = build_pcm(tmpl.prev_hash, 24, 3, 6);

  // Mean single hash cycle: nonce set + hash vector + decode + check.
  MinSumDecoder decoder(h, params);
  BlockHeader hdr = tmpl;
  const int cycles = 20000;
  int hits = 0;
  auto t0 = Clock::now();
  for (int i = 0; i < cycles; ++i) {
    hdr.nonce = static_cast<std::uint32_t>(i);
    hits += decoder.decode(build_hash_vector(hdr, 24).bits).converged;
  }
  double cycle_t = seconds_since(t0) / cycles;

  auto sol = solve(tmpl, h, params);
  if (!sol) {
    *detail = "reference solve failed";
    return false;
  }
  BlockHeader solved = tmpl;
  solved.nonce = sol->nonce;
  const int reps = 2000;
  int ok = 0;
  t0 = Clock::now();
  for (int i = 0; i < reps; ++i) ok += verify(solved, cfg);
  double verify_t = seconds_since(t0) / reps;
  if (ok != reps) {
    *detail = "verification flaked";
    return false;
  }

  // Instances are prepared up front; the solver is timed from the point the
  // puzzle (H, template) is in hand, matching what verification gets.
  const int solves = 400;
  std::vector<BlockHeader> templates;
  std::vector<ParityCheckMatrix> instances;
  for (int i = 0; i < solves; ++i) {
    BlockHeader t2 = tmpl;
    t2.prev_hash = sha256("asymmetry-" + std::to_string(i));
    instances.push_back(build_pcm(t2.prev_hash, 24, 3, 6));
    templates.push_back(t2);
  }
  std::uint64_t solve_cycles = 0;
  t0 = Clock::now();
  for (int i = 0; i < solves; ++i) {
    auto s = solve(templates[i], instances[i], params);
    if (!s) {
      *detail = "solve exhausted the nonce space";
      return false;
    }
    solve_cycles += s->cycles_spent;
  }
  double solve_per_cycle = seconds_since(t0) / static_cast<double>(solve_cycles);

  std::ostringstream os;
  os << "cycle " << fmt(1e6 * cycle_t) << " us, verify " << fmt(1e6 * verify_t)
     << " us (<= 2x), solve/cycle " << fmt(1e6 * solve_per_cycle)
     << " us (within 20%), " << hits << "/" << cycles << " cycle hits";
  *detail = os.str();
  return verify_t <= 2.0 * cycle_t && solve_per_cycle >= 0.8 * cycle_t &&
         solve_per_cycle <= 1.2 * cycle_t;
}

// 10. End-to-end: mine 20 blocks through the CLI, validate, then each
// single-field tamper (nonce, timestamp, prev_hash, n) must invalidate the
// chain. Budget 120 s.
bool criterion10(std::string* detail) {
  auto t0 = Clock::now();
  fs::path dir = fs::temp_directory_path() / "eccpow_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::string config = (dir / "config.json").string();
  std::string chain = (dir / "chain.jsonl").string();
  ChainConfig cfg;
  cfg.difficulty_levels = {24};
  save_config(cfg, config);

  auto validate_code = [&](const std::string& path) {
    std::ostringstream out, err;
    return run_cli({"chain", "validate", "--config", config, "--chain", path},
                   out, err);
  };

  std::ostringstream out, err;
  if (run_cli({"mine", "--config", config, "--chain", chain, "--blocks", "20"},
              out, err) != 0) {
    *detail = "mine exited nonzero";
    return false;
  }
  if (validate_code(chain) != 0) {
    *detail = "honest chain failed validation";
    return false;
  }
  std::vector<Block> blocks = load_chain(chain);
  if (blocks.size() != 20) {
    *detail = "expected 20 blocks";
    return false;
  }

  std::size_t victim = blocks.size();
  for (std::size_t i = 0; i < blocks.size(); ++i)
    if (blocks[i].header.nonce > 0) victim = i;
  if (victim == blocks.size()) {
    *detail = "no block with a nonzero nonce to tamper";
    return false;
  }

  auto tamper_fails = [&](const char* name, auto mutate) {
    std::vector<Block> copy = blocks;
    mutate(copy);
    std::string path = (dir / (std::string("tampered_") + name + ".jsonl"))
                           .string();
    save_chain(copy, path);
    if (validate_code(path) != 1) {
      *detail = std::string("tampered ") + name + " not rejected";
      return false;
    }
    return true;
  };

  // Sequential mining rejected every smaller nonce, so nonce-1 cannot solve;
  // the other tampers hit a non-tip block so linkage breaks regardless of
  // decoder luck. The n tamper keeps the file parseable by padding the word.
  bool ok =
      tamper_fails("nonce",
                   [&](std::vector<Block>& c) { c[victim].header.nonce -= 1; }) &&
      tamper_fails("timestamp",
                   [](std::vector<Block>& c) { c[5].header.timestamp += 1; }) &&
      tamper_fails("prev_hash",
                   [](std::vector<Block>& c) {
                     c[7].header.prev_hash[0] ^= 0xff;
                   }) &&
      tamper_fails("n", [](std::vector<Block>& c) {
        c[3].header.n = 48;
        c[3].solution_word.resize(48, 0);
      });
  fs::remove_all(dir);
  if (!ok) return false;

  double dt = seconds_since(t0);
  *detail = "20 blocks mined and validated; nonce/timestamp/prev_hash/n "
            "tampers all rejected; " + fmt(dt) + " s (budget 120 s)";
  return dt < 120.0;
}

// 11. Time variance: over a 50-block simulated chain, consecutive blocks
// with distinct seed sums S never share a matrix; equal-S collisions are
// counted and logged.
bool criterion11(std::string* detail) {
  ChainConfig cfg;
  cfg.difficulty_levels = {24};
  ChainSimReport rep = simulate_chain(cfg, 50, 3, 777);
  if (!validate_chain(rep.blocks, cfg).valid) {
    *detail = "simulated chain failed validation";
    return false;
  }
  std::uint32_t collisions = 0;
  for (std::size_t i = 1; i < rep.blocks.size(); ++i) {
    ParityCheckMatrix prev = build_pcm(rep.blocks[i - 1].header.prev_hash, 24,
                                       3, 6);
    ParityCheckMatrix cur = build_pcm(rep.blocks[i].header.prev_hash, 24, 3,
                                      6);
    if (rep.seed_sums[i] != rep.seed_sums[i - 1]) {
      if (prev == cur) {
        *detail = "distinct seeds produced an identical matrix";
        return false;
      }
    } else {
      ++collisions;
      if (!(prev == cur)) {
        *detail = "equal seeds produced different matrices";
        return false;
      }
    }
  }
  if (collisions != rep.seed_collisions) {
    *detail = "collision count disagrees with the report";
    return false;
  }
  *detail = "50 blocks; " + std::to_string(collisions) +
            " consecutive equal-S collisions (S in [0,8160]); all distinct-S "
            "neighbors differ";
  return true;
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    bool (*run)(std::string*);
  };
  const Entry entries[] = {
      {"pcm structure and determinism", criterion1},
      {"generator null-space exactness", criterion2},
      {"decoder soundness", criterion3},
      {"success-probability floor", criterion4},
      {"geometric law agreement", criterion5},
      {"exact mean monotonicity", criterion6},
      {"bound-table scaling", criterion7},
      {"entropy-sum inequality", criterion8},
      {"verification cost asymmetry", criterion9},
      {"end-to-end tamper detection", criterion10},
      {"per-block matrix variation", criterion11},
  };
  int failures = 0;
  for (std::size_t i = 0; i < std::size(entries); ++i) {
    std::string detail;
    bool pass = false;
    try {
      pass = entries[i].run(&detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!pass) ++failures;
    std::cout << "criterion " << i + 1 << ": " << (pass ? "PASS" : "FAIL")
              << " - " << entries[i].name << ": " << detail << '\n';
  }
  std::cout << (std::size(entries) - failures) << "/" << std::size(entries)
            << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}

#pragma once

// Command-line surface. Diagnostics go to the error stream; data rows go to
// the output stream or the --out file, so reports stay pipeline-safe.
// Exit codes: 0 success/valid, 1 verification/validation failure, 2 usage
// or config error.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eccpow/analysis.hpp"
#include "eccpow/chain.hpp"
#include "eccpow/chain_config.hpp"
#include "eccpow/puzzle.hpp"
#include "eccpow/sim.hpp"

namespace eccpow {
namespace detail {

inline std::string sci(double v, int digits = 10) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(digits) << v;
  return os.str();
}

struct MineOptions {
  std::string config_path;
  std::string chain_path;
  std::uint32_t blocks = 1;
  unsigned workers = 1;
  std::int64_t seed = 0;
  bool random_order = false;
};

inline int cmd_mine(const MineOptions& opt, std::ostream& out,
                    std::ostream& err) {
  ChainConfig cfg = load_config(opt.config_path);
  std::vector<Block> chain;
  {
    std::ifstream probe(opt.chain_path);
    if (probe.good()) chain = load_chain(opt.chain_path);
  }

  Digest prev_hash{};
  std::uint64_t height = 0;
  std::uint64_t timestamp = kSimGenesisTimestamp;
  std::uint32_t n = cfg.difficulty_levels.front();
  if (!chain.empty()) {
    const Block& tip = chain.back();
    prev_hash = header_hash(tip.header);
    height = tip.height + 1;
    timestamp = tip.header.timestamp + 1;
    if (cfg.has_level(tip.header.n)) n = tip.header.n;
  }

  for (std::uint32_t b = 0; b < opt.blocks; ++b) {
    BlockHeader tmpl;
    tmpl.version = 1;
    tmpl.prev_hash = prev_hash;
    tmpl.merkle_root = sim_digest(opt.seed, "mine-merkle", height);
    tmpl.timestamp = timestamp;
    tmpl.n = n;
    tmpl.w_c = cfg.w_c;
    tmpl.w_r = cfg.w_r;

    SolveOptions sopt;
    sopt.workers = opt.workers;
    if (opt.random_order)
      sopt.order = NonceOrder::random(derive_subseed(opt.seed, "mine", height));

    std::optional<PuzzleSolution> sol;
    for (int attempt = 0; attempt < 1000 && !sol; ++attempt) {
      sol = solve(tmpl, build_pcm(tmpl.prev_hash, n, cfg.w_c, cfg.w_r),
                  decoder_params(cfg), sopt);
      if (!sol) tmpl = refresh_template(tmpl, tmpl.timestamp + 1);
    }
    if (!sol) {
      err << "error: nonce space exhausted at height " << height << '\n';
      return 2;
    }

    Block block;
    block.header = tmpl;
    block.header.nonce = sol->nonce;
    block.height = height;
    block.solution_word = sol->word;
    append_block(block, opt.chain_path);
    out << "mined height=" << height << " n=" << n << " nonce=" << sol->nonce
        << " cycles=" << sol->cycles_spent << '\n';

    prev_hash = header_hash(block.header);
    timestamp = block.header.timestamp + sol->cycles_spent;
    ++height;
  }
  return 0;
}

inline int cmd_verify(const std::string& config_path,
                      const std::string& chain_path, std::ostream& out,
                      std::ostream&) {
  ChainConfig cfg = load_config(config_path);
  std::vector<Block> chain = load_chain(chain_path);
  bool all_ok = true;
  for (const Block& b : chain) {
    VerifyStatus status = verify_header(b.header, cfg);
    const char* text = status == VerifyStatus::kOk ? "ok"
                       : status == VerifyStatus::kParameterMismatch
                           ? "parameter mismatch"
                           : "not solved";
    out << "block " << b.height << ": " << text << '\n';
    if (status != VerifyStatus::kOk) all_ok = false;
  }
  out << (all_ok ? "all headers verified" : "verification failed") << '\n';
  return all_ok ? 0 : 1;
}

inline int cmd_pcm(const std::string& prev_hash_hex, std::uint32_t n,
                   std::uint16_t w_c, std::uint16_t w_r,
                   const std::string& format, std::ostream& out,
                   std::ostream&) {
  Digest prev = digest_from_hex(prev_hash_hex);
  ParityCheckMatrix h = build_pcm(prev, n, w_c, w_r);
  out << "# pcm m=" << h.m << " n=" << h.n << " wc=" << h.w_c
      << " wr=" << h.w_r << " seed=" << h.source_seed << '\n';
  if (format == "dense") {
    for (const auto& row : h.rows) {
      std::string line(h.n, '0');
      for (std::uint32_t c : row) line[c] = '1';
      out << line << '\n';
    }
  } else {
    for (const auto& row : h.rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        out << row[i] << (i + 1 < row.size() ? " " : "");
      out << '\n';
    }
  }
  return 0;
}

struct SimulateOptions {
  std::string config_path;
  std::uint64_t games = 0;
  std::vector<std::uint32_t> miners;
  std::int64_t seed = 0;
  std::string out_path;
};

inline int cmd_simulate(const SimulateOptions& opt, std::ostream& out,
                        std::ostream& err) {
  ChainConfig cfg = load_config(opt.config_path);
  std::vector<MiningGameReport> reports =
      run_experiment(cfg, opt.games, opt.miners, opt.seed);

  std::ofstream file;
  std::ostream* csv = &out;
  if (!opt.out_path.empty()) {
    file.open(opt.out_path);
    if (!file) throw FileFormatError("cannot write " + opt.out_path);
    csv = &file;
  }
  *csv << "game_id,M,fshc\n";
  for (const MiningGameReport& rep : reports)
    for (std::size_t g = 0; g < rep.samples.size(); ++g)
      *csv << g << ',' << rep.miners << ',' << rep.samples[g] << '\n';

  for (const MiningGameReport& rep : reports) {
    err << "M=" << rep.miners << " games=" << rep.samples.size()
        << " mean=" << rep.mean << " variance=" << rep.variance
        << " theory_mean=" << rep.theory.mean << " p_hat=" << rep.p_est.p_hat
        << " ci=[" << rep.p_est.ci_low << ',' << rep.p_est.ci_high << ']'
        << " gof_statistic=" << rep.gof.statistic
        << " gof_p=" << rep.gof.p_value << " gof_bins=" << rep.gof.bins
        << '\n';
  }
  return 0;
}

inline int cmd_analyze_bounds(const ChainConfig& cfg, std::ostream& csv) {
  auto delta1 = delta1_lookup(cfg.w_c, cfg.w_r);
  if (!delta1)
    throw ParameterError("no published delta1 for (w_c=" +
                         std::to_string(cfg.w_c) +
                         ", w_r=" + std::to_string(cfg.w_r) + ")");
  csv << "n,k,wc,wr,delta1,M,bound,mean,variance\n";
  for (std::uint32_t n : cfg.difficulty_levels) {
    std::uint32_t k = design_k(n, cfg.w_c, cfg.w_r);
    for (std::uint64_t m : {std::uint64_t{1}, std::uint64_t{5},
                            std::uint64_t{20}}) {
      BigRational mean = fshc_lower_bound_exact(n, k, *delta1, m);
      BigRational p_fa = 1 - 1 / mean;  // (1-g)^M
      BigRational variance = p_fa * mean * mean;
      csv << n << ',' << k << ',' << cfg.w_c << ',' << cfg.w_r << ','
          << delta1->convert_to<double>() << ',' << m << ','
          << sci(mean.convert_to<double>()) << ','
          << sci(mean.convert_to<double>()) << ','
          << sci(variance.convert_to<double>()) << '\n';
    }
  }
  return 0;
}

inline int cmd_analyze_table7(std::ostream& out) {
  const BigRational delta1(3238, 10000);
  struct Row {
    std::uint32_t n, k;
    double printed_m1, printed_m5, printed_m20;
  };
  const Row rows[] = {
      {80, 12, 1.58e4, 0.31e4, 0.08e4},
      {120, 24, 6.03e7, 1.20e7, 0.30e7},
      {160, 32, 2.46e9, 0.49e9, 0.12e9},
  };
  out << "table7 recomputation: lower bound 1/(1-(1-g)^M), delta1=0.3238, "
         "wc=4, wr=5\n";
  for (const Row& row : rows) {
    double m1 = fshc_lower_bound(row.n, row.k, delta1, 1);
    double m5 = fshc_lower_bound(row.n, row.k, delta1, 5);
    double m20 = fshc_lower_bound(row.n, row.k, delta1, 20);
    out << "n=" << row.n << " k=" << row.k << " recomputed M=1 " << sci(m1, 4)
        << ", M=5 " << sci(m5, 4) << ", M=20 " << sci(m20, 4) << '\n';
    out << "n=" << row.n << " k=" << row.k << " printed    M=1 "
        << sci(row.printed_m1, 4) << ", M=5 " << sci(row.printed_m5, 4)
        << ", M=20 " << sci(row.printed_m20, 4) << '\n';
    out << "n=" << row.n << " k=" << row.k << " ratio M1/M5=" << m1 / m5
        << " M1/M20=" << m1 / m20 << '\n';
  }
  out << "note: the printed (n=80, k=12) entries are 1.58e4-scale but the "
         "formula gives " << sci(fshc_lower_bound(80, 12, delta1, 1), 4)
      << " at k=12; the design dimension k = n(1-wc/wr) = 16 gives "
      << sci(fshc_lower_bound(80, 16, delta1, 1), 4)
      << ", which does not match the printed value either. the published "
         "M-scaling ratios (about 5x and 20x) and the growth in n hold for "
         "the recomputation; rows n=120 and n=160 match the printed values "
         "to their three significant digits.\n";
  return 0;
}

inline int cmd_analyze_entropy(std::ostream& out) {
  std::size_t pairs = 0, holds = 0;
  for (std::uint32_t n = 2; n <= 64; ++n)
    for (std::uint32_t k = 1; 2 * k <= n; ++k) {
      ++pairs;
      if (entropy_sum_bound_holds(n, k)) ++holds;
    }
  out << "entropy-sum inequality: " << holds << "/" << pairs
      << " (n,k) pairs hold for n<=64\n";
  return holds == pairs ? 0 : 1;
}

inline int cmd_chain_validate(const std::string& config_path,
                              const std::string& chain_path, std::ostream& out,
                              std::ostream& err) {
  ChainConfig cfg = load_config(config_path);
  std::vector<Block> chain = load_chain(chain_path);
  ChainValidationReport report = validate_chain(chain, cfg);
  for (const BlockCheck& check : report.blocks) {
    out << "block " << check.height << ": linkage="
        << (check.linkage_ok ? "ok" : "FAIL")
        << " invariants=" << (check.invariants_ok ? "ok" : "FAIL")
        << " puzzle=" << (check.puzzle_ok ? "ok" : "FAIL");
    if (!check.detail.empty()) out << "  (" << check.detail << ")";
    out << '\n';
  }
  for (const std::string& w : report.warnings) err << "warning: " << w << '\n';
  out << "chain: " << (report.valid ? "valid" : "invalid") << '\n';
  return report.valid ? 0 : 1;
}

}  // namespace detail

inline int run_cli(std::vector<std::string> args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"ECC proof-of-work: LDPC puzzle miner, verifier, and analyzer"};
  app.require_subcommand(1);

  detail::MineOptions mine_opt;
  CLI::App* mine = app.add_subcommand("mine", "mine blocks onto a chain file");
  mine->add_option("--config", mine_opt.config_path, "config file")->required();
  mine->add_option("--chain", mine_opt.chain_path, "chain file")->required();
  mine->add_option("--blocks", mine_opt.blocks, "blocks to mine");
  mine->add_option("--workers", mine_opt.workers, "solver worker threads");
  CLI::Option* mine_seed =
      mine->add_option("--seed", mine_opt.seed, "random nonce-order seed");

  std::string verify_config, verify_chain;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "re-verify every header's puzzle");
  verify_cmd->add_option("--config", verify_config, "config file")->required();
  verify_cmd->add_option("--chain", verify_chain, "chain file")->required();

  std::string pcm_prev, pcm_format = "indices";
  std::uint32_t pcm_n = 0;
  std::uint16_t pcm_wc = 0, pcm_wr = 0;
  CLI::App* pcm_cmd =
      app.add_subcommand("pcm", "print the parity-check matrix for a hash");
  pcm_cmd->add_option("--prev-hash", pcm_prev, "32-byte digest, hex")
      ->required();
  pcm_cmd->add_option("--n", pcm_n, "code length")->required();
  pcm_cmd->add_option("--wc", pcm_wc, "column degree")->required();
  pcm_cmd->add_option("--wr", pcm_wr, "row degree")->required();
  pcm_cmd->add_option("--format", pcm_format, "indices|dense")
      ->check(CLI::IsMember({"indices", "dense"}));

  detail::SimulateOptions sim_opt;
  CLI::App* sim_cmd =
      app.add_subcommand("simulate",
                         "run mining games and fit the geometric law");
  sim_cmd->add_option("--config", sim_opt.config_path, "config file")
      ->required();
  sim_cmd->add_option("--games", sim_opt.games, "games per miner count")
      ->required();
  sim_cmd->add_option("--miners", sim_opt.miners, "miner counts, e.g. 1,2,5")
      ->required()
      ->delimiter(',');
  sim_cmd->add_option("--seed", sim_opt.seed, "experiment seed")->required();
  sim_cmd->add_option("--out", sim_opt.out_path, "CSV output file");

  std::string analyze_config, analyze_mode, analyze_out;
  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "evaluate bounds and identities");
  analyze_cmd->add_option("--config", analyze_config, "config file")
      ->required();
  analyze_cmd->add_option("mode", analyze_mode, "bounds|table7|entropy")
      ->required()
      ->check(CLI::IsMember({"bounds", "table7", "entropy"}));
  analyze_cmd->add_option("--out", analyze_out, "output file");

  CLI::App* chain_cmd = app.add_subcommand("chain", "chain file operations");
  chain_cmd->require_subcommand(1);
  std::string chv_config, chv_chain;
  CLI::App* chain_validate =
      chain_cmd->add_subcommand("validate", "full chain validation report");
  chain_validate->add_option("--config", chv_config, "config file")
      ->required();
  chain_validate->add_option("--chain", chv_chain, "chain file")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (mine->parsed()) {
      mine_opt.random_order = mine_seed->count() > 0;
      return detail::cmd_mine(mine_opt, out, err);
    }
    if (verify_cmd->parsed())
      return detail::cmd_verify(verify_config, verify_chain, out, err);
    if (pcm_cmd->parsed())
      return detail::cmd_pcm(pcm_prev, pcm_n, pcm_wc, pcm_wr, pcm_format, out,
                             err);
    if (sim_cmd->parsed()) return detail::cmd_simulate(sim_opt, out, err);
    if (analyze_cmd->parsed()) {
      ChainConfig cfg = load_config(analyze_config);
      std::ofstream file;
      std::ostream* dest = &out;
      if (!analyze_out.empty()) {
        file.open(analyze_out);
        if (!file) throw FileFormatError("cannot write " + analyze_out);
        dest = &file;
      }
      if (analyze_mode == "bounds") return detail::cmd_analyze_bounds(cfg, *dest);
      if (analyze_mode == "table7") return detail::cmd_analyze_table7(*dest);
      return detail::cmd_analyze_entropy(*dest);
    }
    if (chain_validate->parsed())
      return detail::cmd_chain_validate(chv_config, chv_chain, out, err);
  } catch (const FileFormatError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidHeaderError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace eccpow

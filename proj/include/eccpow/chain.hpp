#pragma once

// Append-only chain store (one JSON object per line) and full-chain
// validation: linkage, header invariants, and puzzle re-verification.

#include <cstdint>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eccpow/block_header.hpp"
#include "eccpow/chain_config.hpp"
#include "eccpow/puzzle.hpp"
#include "eccpow/util.hpp"

namespace eccpow {

inline nlohmann::ordered_json block_to_json(const Block& b) {
  nlohmann::ordered_json j;
  j["height"] = b.height;
  j["version"] = b.header.version;
  j["prev_hash"] = to_hex(b.header.prev_hash);
  j["merkle_root"] = to_hex(b.header.merkle_root);
  j["timestamp"] = b.header.timestamp;
  j["n"] = b.header.n;
  j["wc"] = b.header.w_c;
  j["wr"] = b.header.w_r;
  j["nonce"] = b.header.nonce;
  j["solution_word"] = to_hex(pack_bits_msb(b.solution_word));
  return j;
}

inline Block block_from_json(const nlohmann::json& j) {
  Block b;
  try {
    b.height = j.at("height").get<std::uint64_t>();
    b.header.version = j.at("version").get<std::uint32_t>();
    b.header.prev_hash = digest_from_hex(j.at("prev_hash").get<std::string>());
    b.header.merkle_root =
        digest_from_hex(j.at("merkle_root").get<std::string>());
    b.header.timestamp = j.at("timestamp").get<std::uint64_t>();
    b.header.n = j.at("n").get<std::uint32_t>();
    b.header.w_c = j.at("wc").get<std::uint16_t>();
    b.header.w_r = j.at("wr").get<std::uint16_t>();
    b.header.nonce = j.at("nonce").get<std::uint32_t>();
    auto word_bytes = from_hex(j.at("solution_word").get<std::string>());
    if (word_bytes.size() != (b.header.n + 7) / 8)
      throw FileFormatError("chain: solution_word length does not match n");
    b.solution_word = unpack_bits_msb(word_bytes, b.header.n);
  } catch (const nlohmann::json::exception& e) {
    throw FileFormatError(std::string("chain: ") + e.what());
  } catch (const InputError& e) {
    throw FileFormatError(std::string("chain: ") + e.what());
  }
  return b;
}

inline std::vector<Block> load_chain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileFormatError("chain: cannot open " + path);
  std::vector<Block> blocks;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw FileFormatError("chain: " + path + ":" + std::to_string(lineno) +
                            ": " + e.what());
    }
    blocks.push_back(block_from_json(j));
  }
  return blocks;
}

inline void save_chain(std::span<const Block> blocks, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FileFormatError("chain: cannot write " + path);
  for (const Block& b : blocks) out << block_to_json(b).dump() << '\n';
}

inline void append_block(const Block& b, const std::string& path) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw FileFormatError("chain: cannot write " + path);
  out << block_to_json(b).dump() << '\n';
}

struct BlockCheck {
  std::uint64_t height = 0;
  bool linkage_ok = true;
  bool invariants_ok = true;
  bool puzzle_ok = true;
  std::string detail;  // empty when all three pass

  bool ok() const { return linkage_ok && invariants_ok && puzzle_ok; }
};

struct ChainValidationReport {
  bool valid = true;
  std::vector<BlockCheck> blocks;
  std::vector<std::string> warnings;
};

inline ChainValidationReport validate_chain(std::span<const Block> blocks,
                                            const ChainConfig& cfg) {
  ChainValidationReport report;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Block& b = blocks[i];
    BlockCheck check;
    check.height = b.height;
    std::ostringstream detail;

    if (b.height != i) {
      check.invariants_ok = false;
      detail << "height " << b.height << " out of sequence (expected " << i
             << "); ";
    }
    if (!header_valid(b.header)) {
      check.invariants_ok = false;
      detail << "header parameters violate invariants; ";
    }

    if (i > 0) {
      Digest expected = header_hash(blocks[i - 1].header);
      if (b.header.prev_hash != expected) {
        check.linkage_ok = false;
        detail << "prev_hash does not match header_hash of block " << i - 1
               << "; ";
      }
      if (b.header.timestamp < blocks[i - 1].header.timestamp)
        report.warnings.push_back("block " + std::to_string(i) +
                                  ": timestamp decreased");
    }

    switch (verify_header(b.header, cfg)) {
      case VerifyStatus::kOk:
        if (b.solution_word.size() == b.header.n) {
          BitVec word = eccpgf(b.header, b.header.nonce,
                               build_pcm(b.header.prev_hash, b.header.n,
                                         b.header.w_c, b.header.w_r),
                               decoder_params(cfg));
          if (word != b.solution_word)
            report.warnings.push_back(
                "block " + std::to_string(i) +
                ": stored solution_word differs from recomputed output");
        } else {
          report.warnings.push_back("block " + std::to_string(i) +
                                    ": stored solution_word has wrong length");
        }
        break;
      case VerifyStatus::kParameterMismatch:
        check.puzzle_ok = false;
        detail << "code parameters rejected by config; ";
        break;
      case VerifyStatus::kNotSolved:
        check.puzzle_ok = false;
        detail << "puzzle verification failed; ";
        break;
    }

    check.detail = detail.str();
    if (!check.ok()) report.valid = false;
    report.blocks.push_back(std::move(check));
  }
  return report;
}

}  // namespace eccpow

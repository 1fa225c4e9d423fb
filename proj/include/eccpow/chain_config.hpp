#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eccpow/block_header.hpp"
#include "eccpow/util.hpp"

namespace eccpow {

// Published protocol constants shared by all participants.
struct ChainConfig {
  std::uint16_t w_c = 3;
  std::uint16_t w_r = 6;
  std::vector<std::uint32_t> difficulty_levels = {24};
  std::uint32_t max_iter = 20;
  std::uint32_t epsilon_num = 1;
  std::uint32_t epsilon_den = 4;
  std::uint32_t llr_scale = 8;
  std::uint32_t retarget_window = 10;
  std::uint64_t target_block_seconds = 600;

  bool has_level(std::uint32_t n) const {
    return std::find(difficulty_levels.begin(), difficulty_levels.end(), n) !=
           difficulty_levels.end();
  }
};

inline void check_config(const ChainConfig& cfg) {
  if (cfg.difficulty_levels.empty())
    throw ParameterError("config: difficulty_levels must be non-empty");
  for (std::uint32_t n : cfg.difficulty_levels) {
    if (!header_params_valid(n, cfg.w_c, cfg.w_r))
      throw ParameterError("config: level n=" + std::to_string(n) +
                           " violates header invariants with w_c=" +
                           std::to_string(cfg.w_c) +
                           ", w_r=" + std::to_string(cfg.w_r));
  }
  if (cfg.epsilon_num == 0 || 2 * static_cast<std::uint64_t>(cfg.epsilon_num) >=
                                  cfg.epsilon_den)
    throw ParameterError("config: epsilon must satisfy 0 < epsilon < 1/2");
  if (cfg.max_iter == 0)
    throw ParameterError("config: max_iter must be positive");
  if (cfg.llr_scale == 0)
    throw ParameterError("config: llr_scale must be positive");
  if (cfg.retarget_window == 0)
    throw ParameterError("config: retarget_window must be positive");
  if (cfg.target_block_seconds == 0)
    throw ParameterError("config: target_block_seconds must be positive");
}

inline ChainConfig config_from_json(const nlohmann::json& j) {
  ChainConfig cfg;
  try {
    cfg.w_c = j.at("wc").get<std::uint16_t>();
    cfg.w_r = j.at("wr").get<std::uint16_t>();
    cfg.difficulty_levels =
        j.at("difficulty_levels").get<std::vector<std::uint32_t>>();
    cfg.max_iter = j.at("max_iter").get<std::uint32_t>();
    cfg.epsilon_num = j.at("epsilon_num").get<std::uint32_t>();
    cfg.epsilon_den = j.at("epsilon_den").get<std::uint32_t>();
    cfg.llr_scale = j.at("llr_scale").get<std::uint32_t>();
    cfg.retarget_window = j.at("retarget_window").get<std::uint32_t>();
    cfg.target_block_seconds = j.at("target_block_seconds").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FileFormatError(std::string("config: ") + e.what());
  }
  check_config(cfg);
  return cfg;
}

inline nlohmann::ordered_json config_to_json(const ChainConfig& cfg) {
  nlohmann::ordered_json j;
  j["wc"] = cfg.w_c;
  j["wr"] = cfg.w_r;
  j["difficulty_levels"] = cfg.difficulty_levels;
  j["max_iter"] = cfg.max_iter;
  j["epsilon_num"] = cfg.epsilon_num;
  j["epsilon_den"] = cfg.epsilon_den;
  j["llr_scale"] = cfg.llr_scale;
  j["retarget_window"] = cfg.retarget_window;
  j["target_block_seconds"] = cfg.target_block_seconds;
  return j;
}

inline ChainConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileFormatError("config: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FileFormatError("config: " + path + ": " + e.what());
  }
  return config_from_json(j);
}

inline void save_config(const ChainConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FileFormatError("config: cannot write " + path);
  out << config_to_json(cfg).dump(2) << '\n';
}

}  // namespace eccpow

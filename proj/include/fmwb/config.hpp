#pragma once

#include <cstdint>
#include <string>

#include "fmwb/io.hpp"

namespace fmwb {

/// Bounds for the desk configuration. Each *_max is a hard cap (requests
/// beyond it are refused with BoundExceeded); the others are defaults.
struct DeskConfig {
  int fraisse_bound = 5;
  int fraisse_bound_max = 6;
  int generic_n = 32;
  int generic_n_max = 64;
  int generic_e_bound = 3;

  std::uint64_t ordinal_alpha_max = 3;  // OrdinalSpace backends
  std::size_t s_max = 3;                // amorphous, dedekind
  std::size_t s_max_cap = 4;
  int tuple_n_max = 5;

  std::size_t gauge_s_max = 3;
  std::size_t gauge_b_max = 4;

  std::size_t rank_s_max = 2;
  int rank_depth = 2;
  int rank_depth_max = 2;

  int ef_size_max = 12;
  int ef_rounds_max = 4;
  int hintikka_size_max = 8;
  int hintikka_rank_max = 3;

  std::string source = "defaults";
};

/// Unknown keys and wrong types are InputErrors naming the key.
DeskConfig config_from_json(const Json& j);
Json config_to_json(const DeskConfig& c);

/// The config file named explicitly, else the one in FMWB_CONFIG, else the
/// built-in defaults.
DeskConfig load_config(const std::string& explicit_path = "");

}  // namespace fmwb

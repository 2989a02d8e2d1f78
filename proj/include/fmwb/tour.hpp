#pragma once

#include <string>
#include <vector>

#include "fmwb/config.hpp"

namespace fmwb {

struct TourOptions {
  bool include_rigid = true;
};

struct SuiteResult {
  std::string name;
  bool pass = true;
  std::size_t checks = 0;
  std::vector<std::string> failures;
  Json details = Json::object();
};

/// fraisse, generic, orbits, amorphous, gauge, rank, cb, dedekind, venn, ef.
const std::vector<std::string>& tour_suite_names();

/// One curated suite of worked examples with its expected values. Throws
/// InputError for an unknown name.
SuiteResult run_tour_suite(const std::string& name, const DeskConfig& config, const TourOptions& options = {});

Json suite_to_json(const SuiteResult& r);

/// Every suite, bundled. The bundle carries no timings, so two runs give
/// byte-identical JSON.
Json demo_tour(const DeskConfig& config, const TourOptions& options = {});

}  // namespace fmwb

#pragma once

// Reproducible acceptance suite. Each criterion returns a pass flag, a short
// detail string and a JSON payload; runtimes are reported next to the result
// but never enter the JSON so that reports are byte-identical across runs.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fourcurv/io.hpp"

namespace fourcurv {

struct SuiteConfig {
  std::uint64_t seed = 20240611;
  int jobs = 1;
  int tensor_samples = 1000;
  int positivity_samples = 500;
  int chart_points = 5;
  /// Directory for archived side reports; empty disables archiving.
  std::string archive_dir;
  /// Criteria to run (1-based); empty runs everything.
  std::vector<int> only;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  json data;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct SuiteReport {
  std::vector<CriterionResult> criteria;
  bool all_pass() const;
  /// Deterministic document: no runtimes, no timestamps.
  json to_json() const;
};

inline constexpr int kCriterionCount = 11;
const char* criterion_title(int id);

CriterionResult run_criterion(int id, const SuiteConfig& cfg);
/// Runs the selected criteria in order; `progress` is called after each one.
SuiteReport run_suite(const SuiteConfig& cfg, const std::function<void(const CriterionResult&)>& progress = {});

/// Fills `out[i] = fn(i)` for i < n using up to `jobs` threads.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

/// Manifest header attached to every report. The timestamp comes from the
/// caller (explicit flag or SOURCE_DATE_EPOCH) so identical inputs give
/// identical bytes.
json make_manifest(const std::string& command, const json& input, const json& config, const std::string& timestamp);
std::string manifest_timestamp(const std::string& explicit_value);

}  // namespace fourcurv

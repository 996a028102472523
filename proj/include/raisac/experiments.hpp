#pragma once

#include <functional>
#include <string>
#include <vector>

#include "raisac/config.hpp"
#include "raisac/oracle.hpp"
#include "raisac/static_region.hpp"

namespace raisac {

/// One curve of a figure. `extra_columns` names per-point values stored in
/// `extras[i]` alongside `points[i]`.
struct SchemeResult {
  std::string name;
  std::string label;  // legend text
  std::vector<RegionPoint> points;
  std::vector<std::string> extra_columns;
  std::vector<std::vector<double>> extras;
};

struct ExperimentOutput {
  std::vector<SchemeResult> schemes;
  std::vector<std::string> warnings;
};

/// Static deployment schemes over the configured threshold sweep: fixed
/// midpoint with phi = 0, best segment point with phi = 0, fixed midpoint with
/// optimal rotation, the joint optimum and its time-sharing envelope.
/// Thresholds a scheme cannot meet are left out of its curve.
ExperimentOutput run_static_comparison(const ScenarioConfig& config);

/// HFH curves for V = 0 and every configured speed, plus the time-sharing
/// envelope as the unlimited-speed reference.
ExperimentOutput run_mobility_sweep(const ScenarioConfig& config);

/// Runs the selected claim families and returns the worst instance of each
/// check. Failures are reported, never thrown.
std::vector<OracleReport> run_verification(const ScenarioConfig& config);

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
/// handled exactly once; exceptions are rethrown on the caller's thread.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

}  // namespace raisac

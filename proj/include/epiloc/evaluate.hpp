#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "epiloc/dataset.hpp"
#include "epiloc/geometry.hpp"

// Median position/rotation error evaluation. Failed queries enter the medians
// with infinite error and are additionally reported as a failure rate.

namespace epiloc {

struct SceneEval {
  std::string name;
  double median_position = 0.0;  // meters
  double median_rotation = 0.0;  // degrees
  double failure_rate = 0.0;
  int query_count = 0;
};

struct EvalSummary {
  std::vector<SceneEval> per_scene;
  double avg_median_position = 0.0;  // arithmetic mean of per-scene medians
  double avg_median_rotation = 0.0;
  double avg_failure_rate = 0.0;
};

// Even-count medians are the mean of the two central values.
double median(std::vector<double> values);

SceneEval evaluate_scene(const std::string& name, const std::vector<QueryResult>& results,
                         const std::unordered_map<std::string, Pose>& ground_truth);

EvalSummary summarize(const std::vector<SceneEval>& scenes);

// Published reference numbers printed alongside reports for comparison.
struct Baseline {
  const char* method;
  const char* dataset;
  double position_m;
  double rotation_deg;
};
inline constexpr Baseline kReportBaselines[] = {
    {"SIFT+5Pt", "Cambridge Landmarks", 0.47, 0.88},
    {"SIFT+5Pt", "7 Scenes", 0.08, 1.99},
};

}  // namespace epiloc

#include "epiloc/evaluate.hpp"

#include <algorithm>
#include <limits>

#include "epiloc/error.hpp"

namespace epiloc {

double median(std::vector<double> values) {
  if (values.empty()) throw ValidationError("median of empty set");
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

SceneEval evaluate_scene(const std::string& name, const std::vector<QueryResult>& results,
                         const std::unordered_map<std::string, Pose>& ground_truth) {
  if (results.empty()) throw ValidationError("no results for scene '" + name + "'");
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> position_errors, rotation_errors;
  int failures = 0;
  for (const QueryResult& r : results) {
    const auto it = ground_truth.find(r.id);
    if (it == ground_truth.end())
      throw LinkError("no ground truth pose for query '" + r.id + "'");
    if (!r.ok) {
      ++failures;
      position_errors.push_back(kInf);
      rotation_errors.push_back(kInf);
      continue;
    }
    const Pose& gt = it->second;
    position_errors.push_back((camera_center(r.pose) - camera_center(gt)).norm());
    rotation_errors.push_back(angular_distance_deg(r.pose.rotation, gt.rotation));
  }
  SceneEval eval;
  eval.name = name;
  eval.median_position = median(position_errors);
  eval.median_rotation = median(rotation_errors);
  eval.failure_rate = static_cast<double>(failures) / static_cast<double>(results.size());
  eval.query_count = static_cast<int>(results.size());
  return eval;
}

EvalSummary summarize(const std::vector<SceneEval>& per_scene) {
  if (per_scene.empty()) throw ValidationError("no scenes to summarize");
  EvalSummary summary;
  summary.per_scene = per_scene;
  for (const SceneEval& s : per_scene) {
    summary.avg_median_position += s.median_position;
    summary.avg_median_rotation += s.median_rotation;
    summary.avg_failure_rate += s.failure_rate;
  }
  const double n = static_cast<double>(per_scene.size());
  summary.avg_median_position /= n;
  summary.avg_median_rotation /= n;
  summary.avg_failure_rate /= n;
  return summary;
}

}  // namespace epiloc

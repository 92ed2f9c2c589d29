#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "epiloc/localizer.hpp"
#include "epiloc/solver.hpp"

// Pipeline configuration with three precedence layers: built-in defaults,
// then a domain preset (indoor/outdoor thresholds per estimation method),
// then explicit config-file values.

namespace epiloc {

enum class Preset { indoor, outdoor };

// Which source produced the pair estimates; picks the preset threshold row.
//   learned  - ingested essential matrices, no inner correspondence RANSAC
//   sift     - SIFT-style matches through the solver
//   matching - learned-matcher correspondences through the solver
enum class Method { learned, sift, matching };

struct PipelineConfig {
  Method method = Method::learned;
  double t1_px = 0.5;    // solver inlier threshold, pixels
  double t2_deg = 5.0;   // pair inlier angle threshold, degrees
  double min_pair_distance_m = 3.0;
  double max_pair_distance_m = 50.0;
  int top_k = 5;
  double min_triangulation_angle_deg = 1.0;
  int localizer_max_iterations = 10000;
  double localizer_confidence = 0.99;
  int lo_iterations = 4;
  int solver_max_iterations = 10000;
  double solver_confidence = 0.99;
  int solver_min_inliers = 8;
  std::uint64_t seed = 0;
};

Preset parse_preset(const std::string& name);      // "indoor" | "outdoor"
Method parse_method(const std::string& name);      // "learned" | "sift" | "matching"
std::string preset_name(Preset p);
std::string method_name(Method m);

// Overwrites the threshold and pair-selection fields with the published
// defaults for (preset, cfg.method). The learned method has no solver
// threshold; t1 is left untouched for it.
void apply_preset(PipelineConfig& cfg, Preset preset);

// Lines of `key value`; '#' comments. Unknown keys are parse errors.
void apply_config_file(PipelineConfig& cfg, const std::filesystem::path& file);

// Sorted key/value view of the effective config, echoed into result headers.
std::vector<std::pair<std::string, std::string>> config_echo(const PipelineConfig& cfg);

LocalizerConfig localizer_config(const PipelineConfig& cfg);

// t1 converts from pixels to normalized units via the geometric mean focal
// length of the pair's cameras.
SolverConfig solver_config(const PipelineConfig& cfg, const CameraIntrinsics& k_db,
                           const CameraIntrinsics& k_query);

}  // namespace epiloc

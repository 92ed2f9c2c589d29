#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "epiloc/geometry.hpp"
#include "epiloc/localizer.hpp"
#include "epiloc/solver.hpp"

// Synthetic ground-truth scenes: posed cameras around a point cloud, exact or
// corrupted correspondences, and exact or corrupted per-pair essential
// matrices. The oracle behind every derived test value.

namespace epiloc {

struct SyntheticScene {
  std::vector<Vec3> world_points;
  std::vector<Pose> db_poses;
  std::vector<std::string> db_ids;
  Pose query_pose;
  std::string query_id = "query";
  CameraIntrinsics intrinsics;
  double diameter = 10.0;  // meters, point cloud fits in this sphere
  int image_width = 640;
  int image_height = 480;
};

enum class ScenePreset {
  general,    // cameras on a sphere segment looking at the cloud, well-spread centers
  collinear,  // all camera centers (including the query) on one line
};

struct NoiseSpec {
  double pixel_sigma = 0.0;             // pixels, isotropic Gaussian, both views
  double outlier_match_fraction = 0.0;  // [0, 1]
  double outlier_pair_fraction = 0.0;   // [0, 1]
  double rotation_noise = 0.0;          // degrees
  double direction_noise = 0.0;         // degrees
  std::uint64_t seed = 0;
};

Vec3 random_unit_vector(std::mt19937_64& rng);
Quat random_quaternion(std::mt19937_64& rng);
Mat3 random_rotation(std::mt19937_64& rng);

// World-to-camera pose with the camera at `center` looking at `target`.
Pose look_at(const Vec3& center, const Vec3& target);

// Pixel projection; the point must have positive depth.
Vec2 project_point(const Pose& camera, const CameraIntrinsics& k, const Vec3& x_world);

SyntheticScene generate_scene(int n_points, int n_db, ScenePreset preset, std::mt19937_64& rng);

struct SynthMatches {
  std::vector<Correspondence> correspondences;
  std::vector<int> outlier_indices;  // ascending
};

// Projects every scene point into database image `pair_index` and the query
// image, applies pixel noise, then replaces floor(outlier_match_fraction * n)
// matches with uniform in-image points.
SynthMatches synth_correspondences(const SyntheticScene& scene, int pair_index,
                                   const NoiseSpec& noise, std::mt19937_64& rng);

struct SynthPairs {
  std::vector<ImagePair> pairs;      // one per database image, scene order
  std::vector<int> outlier_indices;  // ascending
};

// Ground-truth essential matrix per database image, with optional rotation and
// direction perturbations; floor(outlier_pair_fraction * n) pairs are replaced
// by essential matrices of random unrelated relative poses.
SynthPairs synth_pairs(const SyntheticScene& scene, const NoiseSpec& noise, std::mt19937_64& rng);

}  // namespace epiloc

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "epiloc/essential.hpp"
#include "epiloc/geometry.hpp"

// Absolute pose of a query camera from two or more query-database image
// pairs, each carrying only the pair's essential matrix and the database
// pose. Rotation comes from pairwise candidate disambiguation, position from
// triangulating the translation-direction rays; RANSAC over pair samples with
// an angular inlier test and local optimization handles outlier pairs.

namespace epiloc {

enum class PairSource { solver, ingested };

struct ImagePair {
  std::string db_id;
  Pose db_pose;
  Mat3 essential = Mat3::Zero();
  PairSource source = PairSource::ingested;
};

struct LocalizerConfig {
  double alpha_max_t2 = 5.0;           // inlier angle threshold, degrees
  double min_pair_distance_a = 3.0;    // meters
  double max_pair_distance_b = 50.0;   // meters
  int top_k = 5;
  double min_triangulation_angle = 1.0;  // degrees
  int max_iterations = 10000;
  double confidence = 0.99;
  int lo_iterations = 4;
  std::uint64_t seed = 0;
};

struct LocalizationResult {
  Pose pose;
  std::vector<int> inlier_pairs;  // indices into the input pair list, ascending
  int iterations_run = 0;
  double mean_inlier_angle = 0.0;  // degrees
};

struct SelectedPair {
  std::string db_id;
  Pose db_pose;
};

// Walks the retrieval ranking from the top, accepting an image iff its center
// is within [a, b] meters of every previously accepted center; stops after
// top_k acceptances.
std::vector<SelectedPair> select_pairs(const std::vector<std::string>& ranked_db_ids,
                                       const std::unordered_map<std::string, Pose>& db_poses,
                                       const LocalizerConfig& cfg);

struct RotationChoice {
  Mat3 rel_i, rel_j;  // chosen db-to-query relative rotations
  Mat3 absolute;      // chordal mean of the two absolute predictions
};

// Each pair's essential matrix yields two candidate rotations; the combination
// whose absolute predictions R_rel * R_db agree best across the two pairs is
// taken as true, and the absolute rotation is their chordal mean.
RotationChoice disambiguate_rotations(const PoseCandidates& cands_i, const Pose& pose_i,
                                      const PoseCandidates& cands_j, const Pose& pose_j);

// Midpoint of the common-perpendicular segment between the two lines spanned
// by the rays. Line semantics: the result is invariant to flipping either
// direction and to swapping the arguments (made bitwise by canonicalizing
// signs and order internally).
Vec3 triangulate_center(const Ray& ray_i, const Ray& ray_j, double min_angle_deg);

// Translation direction of the pair measured in the world frame, pointing
// from the database camera toward the query. The decomposition leaves the
// translation sign free; it is pinned by requiring [t]_x * rel_rotation to
// reproduce +E.
Vec3 measured_world_direction(const ImagePair& pair, const Mat3& rel_rotation);

// Angle in [0, 180] between the pair's measured translation direction and the
// direction predicted by the hypothesis pose, both in the world frame.
double pair_residual_angle(const Pose& hypothesis, const ImagePair& pair);

LocalizationResult localize_ransac(const std::vector<ImagePair>& pairs,
                                   const LocalizerConfig& cfg, std::mt19937_64& rng);

// Local optimization: rotation re-averaged over all inliers, center re-solved
// as the least-squares point over all inlier rays, alternating with inlier
// re-classification until stable. Never returns a pose with fewer inliers
// among `inlier_pairs` than `current` has.
Pose refit_local_opt(const std::vector<ImagePair>& inlier_pairs, const Pose& current,
                     const LocalizerConfig& cfg);

}  // namespace epiloc

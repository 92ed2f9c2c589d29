#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "epiloc/essential.hpp"
#include "epiloc/geometry.hpp"

// Essential-matrix estimation from calibrated correspondences: normalized
// eight-point solver wrapped in an adaptive RANSAC loop with Sampson scoring.

namespace epiloc {

struct CameraIntrinsics {
  double fx = 1.0, fy = 1.0;  // pixels
  double cx = 0.0, cy = 0.0;  // pixels
};

struct Correspondence {
  Vec2 pixel_db = Vec2::Zero();
  Vec2 pixel_query = Vec2::Zero();
  Vec2 normalized_db = Vec2::Zero();     // (pixel - principal point) / focal
  Vec2 normalized_query = Vec2::Zero();
};

Vec2 normalize_pixel(const Vec2& pixel, const CameraIntrinsics& k);

Correspondence make_correspondence(const Vec2& pixel_db, const Vec2& pixel_query,
                                   const CameraIntrinsics& k_db, const CameraIntrinsics& k_query);

inline Correspondence make_correspondence(const Vec2& pixel_db, const Vec2& pixel_query,
                                          const CameraIntrinsics& k) {
  return make_correspondence(pixel_db, pixel_query, k, k);
}

struct SolverConfig {
  double inlier_threshold_t1 = 1e-3;  // Sampson error, normalized units
  int max_iterations = 10000;
  double confidence = 0.99;
  int min_inliers = 8;
  std::uint64_t seed = 0;
};

struct RansacEstimate {
  Mat3 essential = Mat3::Zero();
  std::vector<int> inliers;  // indices into the input correspondence list
  int iterations_run = 0;
};

// Normalized (Hartley) eight-point solve over all given correspondences,
// projected onto the essential manifold.
Mat3 solve_eight_point(std::span<const Correspondence> corrs);

// First-order (Sampson) geometric error of the epipolar constraint, in
// normalized coordinates.
double sampson_error(const Mat3& e, const Correspondence& c);

// Minimizes the summed squared Sampson error over the five-parameter
// (rotation, translation direction) manifold, starting from e. The algebraic
// eight-point solution weights points by leverage rather than geometric
// error; this refinement removes that bias. Returns a valid essential matrix;
// never increases the Sampson cost.
Mat3 refine_essential_sampson(const Mat3& e, std::span<const Correspondence> corrs,
                              int max_iterations = 20);

RansacEstimate estimate_essential_ransac(std::span<const Correspondence> corrs,
                                         const SolverConfig& cfg, std::mt19937_64& rng);

// The epipolar constraint fixes an estimated E only up to global sign, but
// downstream direction measurements assume E = [t]_x R with t pointing from
// the db camera toward the query. Resolves the sign by cheirality: among the
// four decompositions, the one placing the most correspondences in front of
// both cameras wins. Pass inlier correspondences only.
Mat3 orient_essential(const Mat3& e, std::span<const Correspondence> corrs);

}  // namespace epiloc

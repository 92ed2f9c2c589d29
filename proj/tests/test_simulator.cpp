#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "epiloc/simulator.hpp"
#include "epiloc/solver.hpp"

using namespace epiloc;

TEST_CASE("random primitives are unit norm and canonical") {
  std::mt19937_64 rng(61);
  Vec3 sum = Vec3::Zero();
  for (int i = 0; i < 2000; ++i) {
    const Vec3 v = random_unit_vector(rng);
    CHECK(std::abs(v.norm() - 1.0) < 1e-12);
    sum += v;
    const Quat q = random_quaternion(rng);
    CHECK(std::abs(q.norm() - 1.0) < 1e-12);
    CHECK(q.w() >= 0.0);
  }
  CHECK(sum.norm() / 2000.0 < 0.1);  // no directional bias
  CHECK(is_rotation(random_rotation(rng), 1e-12));
}

TEST_CASE("look_at aims the optical axis at the target") {
  std::mt19937_64 rng(67);
  for (int i = 0; i < 100; ++i) {
    const Vec3 center = 20.0 * random_unit_vector(rng);
    const Pose pose = look_at(center, Vec3::Zero());
    CHECK(is_rotation(pose.rotation, 1e-9));
    CHECK((camera_center(pose) - center).norm() < 1e-9);
    // The target sits on the positive z-axis of the camera frame.
    const Vec3 target_cam = pose.apply(Vec3::Zero());
    CHECK(target_cam.x() == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(target_cam.y() == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(target_cam.z() == doctest::Approx(center.norm()).epsilon(1e-9));
  }
}

TEST_CASE("projection maps the optical axis to the principal point and guards depth") {
  const Pose cam = look_at(Vec3(0.0, 0.0, -20.0), Vec3::Zero());
  const CameraIntrinsics k{500.0, 500.0, 320.0, 240.0};
  CHECK((project_point(cam, k, Vec3::Zero()) - Vec2(320.0, 240.0)).norm() < 1e-9);
  CHECK_THROWS_AS(project_point(cam, k, Vec3(0.0, 0.0, -40.0)), GenerationError);
}

TEST_CASE("general scenes satisfy their stated geometry") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    const SyntheticScene scene = generate_scene(100, 6, ScenePreset::general, rng);
    CHECK(scene.world_points.size() == 100);
    CHECK(scene.db_poses.size() == 6);
    CHECK(scene.db_ids.size() == 6);
    CHECK(scene.db_ids[0] == "db000");
    CHECK(scene.db_ids[5] == "db005");
    CHECK(scene.query_id == "query");

    for (const Vec3& x : scene.world_points) CHECK(x.norm() <= scene.diameter / 2.0 + 1e-12);

    std::vector<Vec3> centers;
    for (const Pose& p : scene.db_poses) centers.push_back(camera_center(p));
    centers.push_back(camera_center(scene.query_pose));
    for (const Vec3& c : centers) {
      CHECK(c.norm() >= 1.3 * scene.diameter - 1e-9);
      CHECK(c.norm() <= 1.7 * scene.diameter + 1e-9);
    }
    for (size_t i = 0; i < centers.size(); ++i)
      for (size_t j = i + 1; j < centers.size(); ++j)
        CHECK((centers[i] - centers[j]).norm() >= 0.35 * scene.diameter - 1e-9);

    // Every point lands inside every image, query included.
    for (const Vec3& x : scene.world_points) {
      for (const Pose& p : scene.db_poses) {
        const Vec2 px = project_point(p, scene.intrinsics, x);
        CHECK(px.x() >= 0.0);
        CHECK(px.x() < scene.image_width);
        CHECK(px.y() >= 0.0);
        CHECK(px.y() < scene.image_height);
      }
      const Vec2 px = project_point(scene.query_pose, scene.intrinsics, x);
      CHECK(px.x() >= 0.0);
      CHECK(px.x() < scene.image_width);
    }
  }
}

TEST_CASE("collinear scenes put every center including the query on one line") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 10; ++trial) {
    const SyntheticScene scene = generate_scene(50, 5, ScenePreset::collinear, rng);
    std::vector<Vec3> centers;
    for (const Pose& p : scene.db_poses) centers.push_back(camera_center(p));
    centers.push_back(camera_center(scene.query_pose));
    const Vec3 axis = centers[0].normalized();
    for (const Vec3& c : centers) CHECK(c.cross(axis).norm() < 1e-9);
  }
}

TEST_CASE("scene generation is deterministic and validates its arguments") {
  std::mt19937_64 ra(79), rb(79);
  const SyntheticScene a = generate_scene(30, 4, ScenePreset::general, ra);
  const SyntheticScene b = generate_scene(30, 4, ScenePreset::general, rb);
  CHECK(a.query_pose.rotation == b.query_pose.rotation);
  CHECK(a.query_pose.translation == b.query_pose.translation);
  for (int i = 0; i < 4; ++i) CHECK(a.db_poses[i].translation == b.db_poses[i].translation);
  for (int i = 0; i < 30; ++i) CHECK(a.world_points[i] == b.world_points[i]);

  std::mt19937_64 rng(83);
  CHECK_THROWS_AS(generate_scene(7, 4, ScenePreset::general, rng), GenerationError);
  CHECK_THROWS_AS(generate_scene(30, 1, ScenePreset::general, rng), GenerationError);
  // 200 well-separated cameras cannot fit on the viewing cap.
  CHECK_THROWS_AS(generate_scene(30, 200, ScenePreset::general, rng), GenerationError);
}

TEST_CASE("exact correspondences satisfy the epipolar constraint") {
  std::mt19937_64 rng(89);
  const SyntheticScene scene = generate_scene(80, 3, ScenePreset::general, rng);
  for (int k = 0; k < 3; ++k) {
    const Mat3 e = essential_from_relative(relative_pose(scene.db_poses[k], scene.query_pose));
    const SynthMatches m = synth_correspondences(scene, k, NoiseSpec{}, rng);
    CHECK(m.correspondences.size() == 80);
    CHECK(m.outlier_indices.empty());
    for (const Correspondence& c : m.correspondences) {
      const Vec3 xq(c.normalized_query.x(), c.normalized_query.y(), 1.0);
      const Vec3 xd(c.normalized_db.x(), c.normalized_db.y(), 1.0);
      CHECK(std::abs(xq.dot(e * xd)) < 1e-12);
    }
  }
  CHECK_THROWS_AS(synth_correspondences(scene, 3, NoiseSpec{}, rng), ValidationError);
  CHECK_THROWS_AS(synth_correspondences(scene, -1, NoiseSpec{}, rng), ValidationError);
}

TEST_CASE("pixel noise perturbs both views with the requested strength") {
  std::mt19937_64 rng(97);
  const SyntheticScene scene = generate_scene(400, 2, ScenePreset::general, rng);
  NoiseSpec noise;
  noise.pixel_sigma = 2.0;

  const SynthMatches clean = synth_correspondences(scene, 0, NoiseSpec{}, rng);
  const SynthMatches noisy = synth_correspondences(scene, 0, noise, rng);

  double sum_db = 0.0, sum_q = 0.0;
  for (int i = 0; i < 400; ++i) {
    sum_db += (noisy.correspondences[i].pixel_db - clean.correspondences[i].pixel_db).norm();
    sum_q += (noisy.correspondences[i].pixel_query - clean.correspondences[i].pixel_query).norm();
  }
  // Mean norm of a 2d isotropic Gaussian is sigma * sqrt(pi / 2).
  const double expected = 2.0 * std::sqrt(EIGEN_PI / 2.0);
  CHECK(sum_db / 400.0 == doctest::Approx(expected).epsilon(0.15));
  CHECK(sum_q / 400.0 == doctest::Approx(expected).epsilon(0.15));

  // Mean Sampson residual against the true essential matrix follows the
  // half-normal law sigma_n * sqrt(2 / pi) in normalized units.
  const Mat3 e = essential_from_relative(relative_pose(scene.db_poses[0], scene.query_pose));
  double sum_sampson = 0.0;
  for (const Correspondence& c : noisy.correspondences) sum_sampson += sampson_error(e, c);
  const double sigma_n = noise.pixel_sigma / scene.intrinsics.fx;
  CHECK(sum_sampson / 400.0 ==
        doctest::Approx(sigma_n * std::sqrt(2.0 / EIGEN_PI)).epsilon(0.2));
}

TEST_CASE("outlier matches are replaced in-image and recorded sorted") {
  std::mt19937_64 rng(101);
  const SyntheticScene scene = generate_scene(200, 2, ScenePreset::general, rng);
  NoiseSpec noise;
  noise.outlier_match_fraction = 0.25;

  std::mt19937_64 ra(5), rb(5);
  const SynthMatches clean = synth_correspondences(scene, 0, NoiseSpec{}, ra);
  const SynthMatches noisy = synth_correspondences(scene, 0, noise, rb);

  CHECK(noisy.outlier_indices.size() == 50);
  CHECK(std::is_sorted(noisy.outlier_indices.begin(), noisy.outlier_indices.end()));
  CHECK(std::adjacent_find(noisy.outlier_indices.begin(), noisy.outlier_indices.end()) ==
        noisy.outlier_indices.end());

  for (int i : noisy.outlier_indices) {
    const Correspondence& c = noisy.correspondences[i];
    CHECK(c.pixel_db.x() >= 0.0);
    CHECK(c.pixel_db.x() < scene.image_width);
    CHECK(c.pixel_query.y() >= 0.0);
    CHECK(c.pixel_query.y() < scene.image_height);
  }
  // With zero pixel noise the non-outliers stay bit-exact.
  for (int i = 0; i < 200; ++i) {
    if (std::binary_search(noisy.outlier_indices.begin(), noisy.outlier_indices.end(), i))
      continue;
    CHECK(noisy.correspondences[i].pixel_db == clean.correspondences[i].pixel_db);
    CHECK(noisy.correspondences[i].pixel_query == clean.correspondences[i].pixel_query);
  }
}

TEST_CASE("too few points for correspondences is an input error") {
  std::mt19937_64 rng(103);
  SyntheticScene scene = generate_scene(20, 2, ScenePreset::general, rng);
  scene.world_points.resize(5);
  CHECK_THROWS_AS(synth_correspondences(scene, 0, NoiseSpec{}, rng), InsufficientDataError);
}

TEST_CASE("noise-free synthetic pairs carry the ground-truth essentials") {
  std::mt19937_64 rng(107);
  const SyntheticScene scene = generate_scene(20, 5, ScenePreset::general, rng);
  const SynthPairs sp = synth_pairs(scene, NoiseSpec{}, rng);
  REQUIRE(sp.pairs.size() == 5);
  CHECK(sp.outlier_indices.empty());
  for (int k = 0; k < 5; ++k) {
    CHECK(sp.pairs[k].db_id == scene.db_ids[k]);
    const Mat3 e = essential_from_relative(relative_pose(scene.db_poses[k], scene.query_pose));
    CHECK((sp.pairs[k].essential - e).norm() < 1e-15);
  }
}

TEST_CASE("pair noise perturbs rotation and direction by exactly the stated angle") {
  std::mt19937_64 rng(109);
  const SyntheticScene scene = generate_scene(20, 4, ScenePreset::general, rng);

  NoiseSpec rot_noise;
  rot_noise.rotation_noise = 1.5;
  const SynthPairs rot_pairs = synth_pairs(scene, rot_noise, rng);
  for (int k = 0; k < 4; ++k) {
    const RelativePose truth = relative_pose(scene.db_poses[k], scene.query_pose);
    double best_rot = 180.0, best_dir = 180.0;
    for (const RelativePose& c : decompose_essential(rot_pairs.pairs[k].essential).candidates) {
      best_rot = std::min(best_rot, angular_distance_deg(c.rotation, truth.rotation));
      best_dir = std::min(best_dir, rad_to_deg(clamped_acos(c.direction.dot(truth.direction))));
    }
    CHECK(best_rot == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(best_dir < 1e-5);
  }

  NoiseSpec dir_noise;
  dir_noise.direction_noise = 2.5;
  const SynthPairs dir_pairs = synth_pairs(scene, dir_noise, rng);
  for (int k = 0; k < 4; ++k) {
    const RelativePose truth = relative_pose(scene.db_poses[k], scene.query_pose);
    double best_rot = 180.0, best_dir = 180.0;
    for (const RelativePose& c : decompose_essential(dir_pairs.pairs[k].essential).candidates) {
      best_rot = std::min(best_rot, angular_distance_deg(c.rotation, truth.rotation));
      best_dir = std::min(best_dir, rad_to_deg(clamped_acos(c.direction.dot(truth.direction))));
    }
    CHECK(best_rot < 1e-5);
    CHECK(best_dir == doctest::Approx(2.5).epsilon(1e-6));
  }
}

TEST_CASE("outlier pairs are replaced and recorded; inlier pairs stay bit-exact") {
  std::mt19937_64 rng(113);
  const SyntheticScene scene = generate_scene(20, 10, ScenePreset::general, rng);
  NoiseSpec noise;
  noise.outlier_pair_fraction = 0.3;

  std::mt19937_64 ra(8), rb(8);
  const SynthPairs clean = synth_pairs(scene, NoiseSpec{}, ra);
  const SynthPairs noisy = synth_pairs(scene, noise, rb);

  CHECK(noisy.outlier_indices.size() == 3);
  CHECK(std::is_sorted(noisy.outlier_indices.begin(), noisy.outlier_indices.end()));
  for (int i = 0; i < 10; ++i) {
    const bool outlier =
        std::binary_search(noisy.outlier_indices.begin(), noisy.outlier_indices.end(), i);
    if (outlier) {
      CHECK(is_essential(noisy.pairs[i].essential));
      CHECK(essential_distance(noisy.pairs[i].essential, clean.pairs[i].essential) > 1e-3);
    } else {
      CHECK(noisy.pairs[i].essential == clean.pairs[i].essential);
    }
  }
}

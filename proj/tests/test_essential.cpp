#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Geometry>

#include <random>

#include "epiloc/essential.hpp"
#include "epiloc/simulator.hpp"

using namespace epiloc;

TEST_CASE("skew matrix implements the cross product") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const Vec3 a = Vec3::Random();
    const Vec3 b = Vec3::Random();
    CHECK((skew(a) * b - a.cross(b)).norm() < 1e-15);
  }
  CHECK((skew(Vec3::UnitX()) + skew(Vec3::UnitX()).transpose()).norm() == 0.0);
}

TEST_CASE("essential matrix of a pure x translation") {
  const RelativePose rel{Mat3::Identity(), Vec3::UnitX()};
  Mat3 expected;
  expected << 0.0, 0.0, 0.0,
              0.0, 0.0, -1.0,
              0.0, 1.0, 0.0;
  CHECK((essential_from_relative(rel) - expected).norm() == 0.0);
}

TEST_CASE("essential matrix of a pure z translation") {
  const RelativePose rel{Mat3::Identity(), Vec3::UnitZ()};
  Mat3 expected;
  expected << 0.0, -1.0, 0.0,
              1.0, 0.0, 0.0,
              0.0, 0.0, 0.0;
  CHECK((essential_from_relative(rel) - expected).norm() == 0.0);
}

TEST_CASE("distance between the x- and z-translation essentials is exactly 2") {
  const Mat3 ex = essential_from_relative(RelativePose{Mat3::Identity(), Vec3::UnitX()});
  const Mat3 ez = essential_from_relative(RelativePose{Mat3::Identity(), Vec3::UnitZ()});
  CHECK(essential_distance(ex, ez) == 2.0);
}

TEST_CASE("essential distance quotients the global sign") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const Mat3 e = essential_from_relative(RelativePose{random_rotation(rng), random_unit_vector(rng)});
    const Mat3 f = essential_from_relative(RelativePose{random_rotation(rng), random_unit_vector(rng)});
    CHECK(essential_distance(e, Mat3(-e)) == 0.0);
    CHECK(essential_distance(e, f) == essential_distance(f, e));
    CHECK(essential_distance(e, f) == essential_distance(e, Mat3(-f)));
  }
}

TEST_CASE("constructed essentials are valid with Frobenius norm sqrt(2)") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const Mat3 e = essential_from_relative(RelativePose{random_rotation(rng), random_unit_vector(rng)});
    CHECK(is_essential(e));
    CHECK(e.norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK_FALSE(is_essential(Mat3(2.0 * e)));
  }
  CHECK_FALSE(is_essential(Mat3::Identity()));  // singular values (1, 1, 1)
}

TEST_CASE("projection returns valid essentials and leaves valid inputs alone") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const Mat3 e = essential_from_relative(RelativePose{random_rotation(rng), random_unit_vector(rng)});
    CHECK((project_to_essential(e) - e).norm() < 1e-12);

    Mat3 m = Mat3::Random();
    const Mat3 p = project_to_essential(m);
    CHECK(is_essential(p, 1e-9));
    // Idempotent and scale invariant.
    CHECK((project_to_essential(p) - p).norm() < 1e-12);
    CHECK((project_to_essential(Mat3(3.0 * m)) - p).norm() < 1e-9);
  }
  CHECK_THROWS_AS(project_to_essential(Mat3::Zero()), DegenerateMatrixError);
  Mat3 rank1 = Vec3::UnitX() * Vec3::UnitY().transpose();
  CHECK_THROWS_AS(project_to_essential(rank1), DegenerateMatrixError);
}

TEST_CASE("decomposing the pure x-translation essential recovers both signs") {
  const Mat3 e = essential_from_relative(RelativePose{Mat3::Identity(), Vec3::UnitX()});
  const PoseCandidates cands = decompose_essential(e);
  int identity_hits = 0;
  for (const RelativePose& c : cands.candidates) {
    CHECK(is_rotation(c.rotation, 1e-9));
    CHECK(std::abs(c.direction.norm() - 1.0) < 1e-12);
    CHECK(std::abs(std::abs(c.direction.x()) - 1.0) < 1e-9);  // all axes are +-x
    if (angular_distance_deg(c.rotation, Mat3(Mat3::Identity())) < 1e-9 &&
        (c.direction - Vec3::UnitX()).norm() < 1e-9)
      ++identity_hits;
  }
  CHECK(identity_hits == 1);
}

TEST_CASE("decomposition rejects matrices off the essential manifold") {
  CHECK_THROWS_AS(decompose_essential(Mat3::Identity()), InvalidEssentialError);
  CHECK_THROWS_AS(decompose_essential(Mat3::Random()), InvalidEssentialError);
}

TEST_CASE("exactly one candidate matches the generating pose") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 1000; ++i) {
    const RelativePose truth{random_rotation(rng), random_unit_vector(rng)};
    const PoseCandidates cands = decompose_essential(essential_from_relative(truth));
    int hits = 0;
    for (const RelativePose& c : cands.candidates) {
      CHECK(is_rotation(c.rotation, 1e-9));
      const double rot_err = angular_distance_deg(c.rotation, truth.rotation);
      const double dir_err = clamped_acos(c.direction.dot(truth.direction));
      if (rot_err < 1e-7 && dir_err < 1e-7) ++hits;
    }
    CHECK(hits == 1);
  }
}

TEST_CASE("candidate structure: signs, ordering, and the half-turn relation") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 300; ++i) {
    const Mat3 e = essential_from_relative(RelativePose{random_rotation(rng), random_unit_vector(rng)});
    const PoseCandidates c = decompose_essential(e);

    // Ordered (R, t), (R, -t), (R', t), (R', -t).
    CHECK((c.candidates[0].rotation - c.candidates[1].rotation).norm() == 0.0);
    CHECK((c.candidates[2].rotation - c.candidates[3].rotation).norm() == 0.0);
    CHECK((c.candidates[0].direction + c.candidates[1].direction).norm() == 0.0);
    CHECK((c.candidates[0].direction - c.candidates[2].direction).norm() == 0.0);

    // [t]_x R1 and [t]_x R2 reproduce -E and +E.
    const Mat3& r1 = c.candidates[0].rotation;
    const Mat3& r2 = c.candidates[2].rotation;
    const Vec3& t = c.candidates[0].direction;
    CHECK((skew(t) * r1 + e).norm() < 1e-9);
    CHECK((skew(t) * r2 - e).norm() < 1e-9);

    // R2 = R1 * half turn about the axis R1^T t.
    const Mat3 half_turn =
        Eigen::AngleAxisd(EIGEN_PI, Vec3(r1.transpose() * t).normalized()).toRotationMatrix();
    CHECK(angular_distance_deg(Mat3(r1 * half_turn), r2) < 1e-7);

    // The two rotations are genuinely different candidates.
    CHECK(angular_distance_deg(r1, r2) > 1.0);
  }
}

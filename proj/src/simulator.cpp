#include "epiloc/simulator.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>

#include "epiloc/error.hpp"
#include "epiloc/essential.hpp"

namespace epiloc {

namespace {

constexpr double kDiameter = 10.0;
constexpr int kImageWidth = 640;
constexpr int kImageHeight = 480;
constexpr double kFocal = 500.0;

// Feasibility margins baked into the presets: a camera at distance r looking
// at the cloud center sees every point of the radius-5 cloud within
// asin(5/r) of its optical axis; the tighter (vertical) image half-angle is
// atan(240/500) = 25.6 deg, so r >= 13 keeps everything in frame. The range
// stays near that bound so the cloud fills the frame; estimation accuracy
// falls off sharply when the observed field of view shrinks.
constexpr double kGeneralMinRange = 1.3 * kDiameter;
constexpr double kGeneralMaxRange = 1.7 * kDiameter;
constexpr double kGeneralCapHalfAngleDeg = 35.0;
constexpr double kMinCenterSeparation = 0.35 * kDiameter;
constexpr double kMinQueryPairAngleDeg = 2.0;
constexpr double kCollinearMinRange = 1.6 * kDiameter;
constexpr double kCollinearMaxRange = 2.6 * kDiameter;

Vec3 sample_cap_direction(double half_angle_deg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double cos_min = std::cos(deg_to_rad(half_angle_deg));
  const double z = cos_min + (1.0 - cos_min) * uni(rng);
  const double phi = 2.0 * EIGEN_PI * uni(rng);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {s * std::cos(phi), s * std::sin(phi), z};
}

bool in_bounds(const Vec2& px, int w, int h) {
  return px.x() >= 0.0 && px.x() < w && px.y() >= 0.0 && px.y() < h;
}

bool scene_feasible(const SyntheticScene& scene) {
  std::vector<Vec3> centers;
  for (const Pose& p : scene.db_poses) centers.push_back(camera_center(p));
  const Vec3 qc = camera_center(scene.query_pose);

  for (size_t i = 0; i < centers.size(); ++i) {
    if ((centers[i] - qc).norm() < kMinCenterSeparation) return false;
    for (size_t j = i + 1; j < centers.size(); ++j)
      if ((centers[i] - centers[j]).norm() < kMinCenterSeparation) return false;
  }
  // Triangulation geometry: every database pair must subtend a workable angle
  // at the query center.
  for (size_t i = 0; i < centers.size(); ++i) {
    for (size_t j = i + 1; j < centers.size(); ++j) {
      const Vec3 a = (centers[i] - qc).normalized();
      const Vec3 b = (centers[j] - qc).normalized();
      if (rad_to_deg(clamped_acos(std::abs(a.dot(b)))) < kMinQueryPairAngleDeg) return false;
    }
  }
  // Spread: no three database centers close to a common line.
  for (size_t i = 0; i < centers.size(); ++i)
    for (size_t j = i + 1; j < centers.size(); ++j)
      for (size_t k = j + 1; k < centers.size(); ++k) {
        const double area = 0.5 * (centers[j] - centers[i]).cross(centers[k] - centers[i]).norm();
        if (area <= 1e-3 * scene.diameter * scene.diameter) return false;
      }

  for (const Vec3& x : scene.world_points) {
    for (const Pose& p : scene.db_poses)
      if (!in_bounds(project_point(p, scene.intrinsics, x), scene.image_width, scene.image_height))
        return false;
    if (!in_bounds(project_point(scene.query_pose, scene.intrinsics, x), scene.image_width,
                   scene.image_height))
      return false;
  }
  return true;
}

std::vector<int> sample_distinct_indices(int n, int count, std::mt19937_64& rng) {
  std::vector<int> index(n);
  for (int i = 0; i < n; ++i) index[i] = i;
  for (int k = 0; k < count; ++k) {
    std::uniform_int_distribution<int> pick(k, n - 1);
    std::swap(index[k], index[pick(rng)]);
  }
  index.resize(count);
  std::sort(index.begin(), index.end());
  return index;
}

Vec3 perpendicular_axis(const Vec3& d, std::mt19937_64& rng) {
  for (;;) {
    const Vec3 v = random_unit_vector(rng);
    const Vec3 a = v - v.dot(d) * d;
    if (a.norm() > 1e-6) return a.normalized();
  }
}

}  // namespace

Vec3 random_unit_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    const Vec3 v(gauss(rng), gauss(rng), gauss(rng));
    const double n = v.norm();
    if (n > 1e-6) return v / n;
  }
}

Quat random_quaternion(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    Quat q(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
    const double n = q.norm();
    if (n > 1e-6) {
      q.coeffs() /= n;
      return canonical_quaternion(q);
    }
  }
}

Mat3 random_rotation(std::mt19937_64& rng) { return random_quaternion(rng).toRotationMatrix(); }

Pose look_at(const Vec3& center, const Vec3& target) {
  const Vec3 z = (target - center).normalized();
  const Vec3 up = std::abs(z.z()) > 0.99 ? Vec3(0.0, 1.0, 0.0) : Vec3(0.0, 0.0, 1.0);
  const Vec3 x = up.cross(z).normalized();
  const Vec3 y = z.cross(x);
  Mat3 r;
  r.row(0) = x;
  r.row(1) = y;
  r.row(2) = z;
  return {r, -(r * center)};
}

Vec2 project_point(const Pose& camera, const CameraIntrinsics& k, const Vec3& x_world) {
  const Vec3 pc = camera.apply(x_world);
  if (pc.z() <= 0.0) throw GenerationError("point projects behind the camera");
  return {k.fx * pc.x() / pc.z() + k.cx, k.fy * pc.y() / pc.z() + k.cy};
}

SyntheticScene generate_scene(int n_points, int n_db, ScenePreset preset, std::mt19937_64& rng) {
  if (n_points < 8) throw GenerationError("need at least 8 points");
  if (n_db < 2) throw GenerationError("need at least 2 database cameras");

  SyntheticScene scene;
  scene.diameter = kDiameter;
  scene.intrinsics = {kFocal, kFocal, kImageWidth / 2.0, kImageHeight / 2.0};
  scene.image_width = kImageWidth;
  scene.image_height = kImageHeight;

  std::uniform_real_distribution<double> coord(-scene.diameter / 2.0, scene.diameter / 2.0);
  scene.world_points.reserve(n_points);
  while (static_cast<int>(scene.world_points.size()) < n_points) {
    const Vec3 x(coord(rng), coord(rng), coord(rng));
    if (x.norm() <= scene.diameter / 2.0) scene.world_points.push_back(x);
  }

  scene.db_ids.clear();
  for (int i = 0; i < n_db; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "db%03d", i);
    scene.db_ids.emplace_back(buf);
  }

  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int attempt = 0; attempt < 256; ++attempt) {
    scene.db_poses.clear();
    if (preset == ScenePreset::general) {
      std::uniform_real_distribution<double> range(kGeneralMinRange, kGeneralMaxRange);
      for (int i = 0; i < n_db; ++i)
        scene.db_poses.push_back(look_at(range(rng) * sample_cap_direction(kGeneralCapHalfAngleDeg, rng),
                                         Vec3::Zero()));
      scene.query_pose = look_at(range(rng) * sample_cap_direction(kGeneralCapHalfAngleDeg, rng),
                                 Vec3::Zero());
      if (scene_feasible(scene)) return scene;
    } else {
      // Every center, query included, on one line through the origin; the
      // whole scene is a designed triangulation degeneracy.
      const Vec3 axis = random_unit_vector(rng);
      const int slots = n_db + 1;
      const double step = (kCollinearMaxRange - kCollinearMinRange) / (slots - 1);
      std::vector<double> ranges;
      for (int i = 0; i < slots; ++i)
        ranges.push_back(kCollinearMinRange + step * (i + 0.4 * (uni(rng) - 0.5)));
      const int query_slot = slots / 2;
      for (int i = 0; i < slots; ++i) {
        const Pose pose = look_at(ranges[i] * axis, Vec3::Zero());
        if (i == query_slot)
          scene.query_pose = pose;
        else
          scene.db_poses.push_back(pose);
      }
      bool in_frame = true;
      for (const Vec3& x : scene.world_points) {
        for (const Pose& p : scene.db_poses)
          in_frame = in_frame && in_bounds(project_point(p, scene.intrinsics, x),
                                           scene.image_width, scene.image_height);
        in_frame = in_frame && in_bounds(project_point(scene.query_pose, scene.intrinsics, x),
                                         scene.image_width, scene.image_height);
      }
      if (in_frame) return scene;
    }
  }
  throw GenerationError("scene constraints unsatisfiable for the requested preset");
}

SynthMatches synth_correspondences(const SyntheticScene& scene, int pair_index,
                                   const NoiseSpec& noise, std::mt19937_64& rng) {
  if (pair_index < 0 || pair_index >= static_cast<int>(scene.db_poses.size()))
    throw ValidationError("pair index out of range");
  const int n = static_cast<int>(scene.world_points.size());
  if (n < 8) throw InsufficientDataError("fewer than 8 co-visible points");

  const Pose& db = scene.db_poses[pair_index];
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> ux(0.0, static_cast<double>(scene.image_width));
  std::uniform_real_distribution<double> uy(0.0, static_cast<double>(scene.image_height));

  SynthMatches out;
  out.correspondences.reserve(n);
  for (const Vec3& x : scene.world_points) {
    Vec2 px_db = project_point(db, scene.intrinsics, x);
    Vec2 px_q = project_point(scene.query_pose, scene.intrinsics, x);
    if (noise.pixel_sigma > 0.0) {
      px_db += noise.pixel_sigma * Vec2(gauss(rng), gauss(rng));
      px_q += noise.pixel_sigma * Vec2(gauss(rng), gauss(rng));
    }
    out.correspondences.push_back(make_correspondence(px_db, px_q, scene.intrinsics));
  }

  const int n_out = static_cast<int>(noise.outlier_match_fraction * n);
  if (n_out > 0) {
    out.outlier_indices = sample_distinct_indices(n, n_out, rng);
    for (int i : out.outlier_indices)
      out.correspondences[i] =
          make_correspondence({ux(rng), uy(rng)}, {ux(rng), uy(rng)}, scene.intrinsics);
  }
  return out;
}

SynthPairs synth_pairs(const SyntheticScene& scene, const NoiseSpec& noise, std::mt19937_64& rng) {
  const int n = static_cast<int>(scene.db_poses.size());
  SynthPairs out;
  out.pairs.reserve(n);

  for (int k = 0; k < n; ++k) {
    RelativePose rel = relative_pose(scene.db_poses[k], scene.query_pose);
    if (noise.rotation_noise > 0.0)
      rel.rotation = Eigen::AngleAxisd(deg_to_rad(noise.rotation_noise), random_unit_vector(rng))
                         .toRotationMatrix() *
                     rel.rotation;
    if (noise.direction_noise > 0.0)
      rel.direction = Eigen::AngleAxisd(deg_to_rad(noise.direction_noise),
                                        perpendicular_axis(rel.direction, rng))
                          .toRotationMatrix() *
                      rel.direction;
    out.pairs.push_back(
        {scene.db_ids[k], scene.db_poses[k], essential_from_relative(rel), PairSource::ingested});
  }

  const int n_out = static_cast<int>(noise.outlier_pair_fraction * n);
  if (n_out > 0) {
    out.outlier_indices = sample_distinct_indices(n, n_out, rng);
    for (int i : out.outlier_indices) {
      const RelativePose junk{random_rotation(rng), random_unit_vector(rng)};
      out.pairs[i].essential = essential_from_relative(junk);
    }
  }
  return out;
}

}  // namespace epiloc

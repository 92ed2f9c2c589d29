#include "epiloc/localizer.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <utility>

#include "epiloc/error.hpp"

namespace epiloc {

namespace {

void validate_config(const LocalizerConfig& cfg) {
  if (!(cfg.alpha_max_t2 > 0.0 && cfg.alpha_max_t2 < 90.0))
    throw ValidationError("alpha_max_t2 must be in (0, 90) degrees");
  if (!(cfg.min_pair_distance_a >= 0.0 && cfg.min_pair_distance_a < cfg.max_pair_distance_b))
    throw ValidationError("pair distance window must satisfy 0 <= a < b");
  if (cfg.top_k < 2) throw ValidationError("top_k must be >= 2");
}

// Per-pair quantities reused across every hypothesis: the two candidate
// rotations, the translation axis (sign-free), and the database camera frame.
struct PairContext {
  int original_index = 0;
  Mat3 essential;
  Mat3 r1, r2;      // candidate relative rotations
  Vec3 t_axis;      // unit translation axis, sign pinned per chosen rotation
  Mat3 db_rotation;
  Vec3 db_center;
};

PairContext make_context(const ImagePair& pair, int original_index) {
  const PoseCandidates cands = decompose_essential(pair.essential);
  PairContext ctx;
  ctx.original_index = original_index;
  ctx.essential = pair.essential;
  ctx.r1 = cands.candidates[0].rotation;
  ctx.r2 = cands.candidates[2].rotation;
  ctx.t_axis = cands.candidates[0].direction;
  ctx.db_rotation = pair.db_pose.rotation;
  ctx.db_center = camera_center(pair.db_pose);
  return ctx;
}

// World-frame direction from the database camera toward the query, for the
// given choice of relative rotation. The decomposition's t sign is arbitrary;
// take the one whose [t]_x * R matches +E, then map -R^T t (the query center
// seen from the db camera) into the world frame.
Vec3 world_direction(const PairContext& ctx, const Mat3& rel_rotation) {
  const double align = (skew(ctx.t_axis) * rel_rotation).cwiseProduct(ctx.essential).sum();
  const Vec3 t = align >= 0.0 ? ctx.t_axis : Vec3(-ctx.t_axis);
  return ctx.db_rotation.transpose() * (rel_rotation.transpose() * (-t));
}

const Mat3& pick_rotation(const PairContext& ctx, const Mat3& absolute_rotation) {
  const double d1 = angular_distance_deg(ctx.r1 * ctx.db_rotation, absolute_rotation);
  const double d2 = angular_distance_deg(ctx.r2 * ctx.db_rotation, absolute_rotation);
  return d1 <= d2 ? ctx.r1 : ctx.r2;
}

// Inlier angle of one pair under a hypothesis; empty when the hypothesis
// center coincides with the database camera (direction undefined).
std::optional<double> residual_angle(const Pose& hypothesis, const PairContext& ctx) {
  const Vec3 delta = camera_center(hypothesis) - ctx.db_center;
  const double dist = delta.norm();
  if (dist < 1e-12) return std::nullopt;
  const Mat3& rel = pick_rotation(ctx, hypothesis.rotation);
  const Vec3 measured = world_direction(ctx, rel);
  return rad_to_deg(clamped_acos(measured.dot(delta / dist)));
}

struct Score {
  std::vector<int> inliers;  // context indices
  double mean_angle = std::numeric_limits<double>::infinity();
};

Score score_pose(const Pose& pose, const std::vector<PairContext>& ctxs, double t2) {
  Score s;
  double sum = 0.0;
  for (int i = 0; i < static_cast<int>(ctxs.size()); ++i) {
    const std::optional<double> angle = residual_angle(pose, ctxs[i]);
    if (angle && *angle < t2) {
      s.inliers.push_back(i);
      sum += *angle;
    }
  }
  if (!s.inliers.empty()) s.mean_angle = sum / static_cast<double>(s.inliers.size());
  return s;
}

bool score_better(const Score& a, const Score& b) {
  if (a.inliers.size() != b.inliers.size()) return a.inliers.size() > b.inliers.size();
  return a.mean_angle < b.mean_angle;
}

Mat3 disambiguate_contexts(const PairContext& ci, const PairContext& cj,
                           const Mat3** rel_i, const Mat3** rel_j) {
  const Mat3* ri[2] = {&ci.r1, &ci.r2};
  const Mat3* rj[2] = {&cj.r1, &cj.r2};
  double best = std::numeric_limits<double>::infinity();
  for (const Mat3* a : ri) {
    for (const Mat3* b : rj) {
      const double d = angular_distance_deg(*a * ci.db_rotation, *b * cj.db_rotation);
      if (d < best) {
        best = d;
        *rel_i = a;
        *rel_j = b;
      }
    }
  }
  const Quat qa = quaternion_from_rotation(**rel_i * ci.db_rotation);
  const Quat qb = quaternion_from_rotation(**rel_j * cj.db_rotation);
  return chordal_mean(std::vector<Quat>{qa, qb}).toRotationMatrix();
}

// Alternating refit / re-classification over `ctxs`, starting from the
// inliers in `active`. Returns `current` unchanged if the first refit is
// degenerate or would lose inliers.
Pose refit_rounds(const std::vector<PairContext>& ctxs, std::vector<int> active,
                  const Pose& current, const LocalizerConfig& cfg) {
  Pose best = current;
  for (int round = 0; round < cfg.lo_iterations; ++round) {
    std::vector<Quat> quats;
    quats.reserve(active.size());
    for (int i : active)
      quats.push_back(quaternion_from_rotation(pick_rotation(ctxs[i], best.rotation) * ctxs[i].db_rotation));
    const Mat3 rotation = chordal_mean(quats).toRotationMatrix();

    // Least-squares point over the inlier rays: sum (I - d d^T)(c - origin) = 0.
    Mat3 acc = Mat3::Zero();
    Vec3 rhs = Vec3::Zero();
    for (int i : active) {
      const Vec3 d = world_direction(ctxs[i], pick_rotation(ctxs[i], rotation));
      const Mat3 p = Mat3::Identity() - d * d.transpose();
      acc += p;
      rhs += p * ctxs[i].db_center;
    }
    Eigen::SelfAdjointEigenSolver<Mat3> eig(acc);
    if (eig.eigenvalues()[0] < 1e-9 * std::max(1.0, eig.eigenvalues()[2]))
      return best;  // rays nearly parallel, center unconstrained
    const Vec3 center = eig.eigenvectors() *
                        (eig.eigenvalues().cwiseInverse().asDiagonal() *
                         (eig.eigenvectors().transpose() * rhs));

    const Pose cand{rotation, -(rotation * center)};
    std::vector<int> next;
    for (int i = 0; i < static_cast<int>(ctxs.size()); ++i) {
      const std::optional<double> angle = residual_angle(cand, ctxs[i]);
      if (angle && *angle < cfg.alpha_max_t2) next.push_back(i);
    }
    if (next.size() < active.size()) return best;
    const bool stable = next == active;
    best = cand;
    active = std::move(next);
    if (stable) break;
  }
  return best;
}

}  // namespace

std::vector<SelectedPair> select_pairs(const std::vector<std::string>& ranked_db_ids,
                                       const std::unordered_map<std::string, Pose>& db_poses,
                                       const LocalizerConfig& cfg) {
  validate_config(cfg);
  std::vector<SelectedPair> out;
  std::vector<Vec3> centers;
  for (const std::string& id : ranked_db_ids) {
    const auto it = db_poses.find(id);
    if (it == db_poses.end()) throw LinkError("no database pose for ranked id '" + id + "'");
    const Vec3 c = camera_center(it->second);
    bool ok = true;
    for (const Vec3& prev : centers) {
      const double d = (c - prev).norm();
      if (d < cfg.min_pair_distance_a || d > cfg.max_pair_distance_b) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    out.push_back({id, it->second});
    centers.push_back(c);
    if (static_cast<int>(out.size()) == cfg.top_k) break;
  }
  if (out.size() < 2)
    throw InsufficientPairsError("pair selection kept " + std::to_string(out.size()) +
                                 " of " + std::to_string(ranked_db_ids.size()) + " candidates");
  return out;
}

RotationChoice disambiguate_rotations(const PoseCandidates& cands_i, const Pose& pose_i,
                                      const PoseCandidates& cands_j, const Pose& pose_j) {
  const Mat3* ri[2] = {&cands_i.candidates[0].rotation, &cands_i.candidates[2].rotation};
  const Mat3* rj[2] = {&cands_j.candidates[0].rotation, &cands_j.candidates[2].rotation};
  RotationChoice choice;
  double best = std::numeric_limits<double>::infinity();
  for (const Mat3* a : ri) {
    for (const Mat3* b : rj) {
      const double d = angular_distance_deg(*a * pose_i.rotation, *b * pose_j.rotation);
      if (d < best) {
        best = d;
        choice.rel_i = *a;
        choice.rel_j = *b;
      }
    }
  }
  const Quat qa = quaternion_from_rotation(choice.rel_i * pose_i.rotation);
  const Quat qb = quaternion_from_rotation(choice.rel_j * pose_j.rotation);
  choice.absolute = chordal_mean(std::vector<Quat>{qa, qb}).toRotationMatrix();
  return choice;
}

Vec3 triangulate_center(const Ray& ray_i, const Ray& ray_j, double min_angle_deg) {
  const auto canonical = [](Ray r) {
    if (std::abs(r.direction.norm() - 1.0) > 1e-9)
      throw ValidationError("ray direction must be unit norm");
    for (int i = 0; i < 3; ++i) {
      if (r.direction[i] != 0.0) {
        if (r.direction[i] < 0.0) r.direction = -r.direction;
        break;
      }
    }
    return r;
  };
  // Canonical direction signs and argument order make the sign-flip and swap
  // invariances bitwise, not just approximate.
  Ray a = canonical(ray_i);
  Ray b = canonical(ray_j);
  const auto key = [](const Ray& r) {
    return std::array<double, 6>{r.origin.x(), r.origin.y(), r.origin.z(),
                                 r.direction.x(), r.direction.y(), r.direction.z()};
  };
  if (key(b) < key(a)) std::swap(a, b);

  const double dot = a.direction.dot(b.direction);
  if (rad_to_deg(clamped_acos(std::abs(dot))) < min_angle_deg)
    throw NearCollinearError("rays subtend less than the minimum triangulation angle");

  // Closest points p = o_a + s d_a, q = o_b + u d_b of the two lines.
  const Vec3 w = a.origin - b.origin;
  const double denom = 1.0 - dot * dot;
  const double s = (dot * b.direction.dot(w) - a.direction.dot(w)) / denom;
  const double u = (b.direction.dot(w) - dot * a.direction.dot(w)) / denom;
  return 0.5 * ((a.origin + s * a.direction) + (b.origin + u * b.direction));
}

Vec3 measured_world_direction(const ImagePair& pair, const Mat3& rel_rotation) {
  return world_direction(make_context(pair, 0), rel_rotation);
}

double pair_residual_angle(const Pose& hypothesis, const ImagePair& pair) {
  const std::optional<double> angle = residual_angle(hypothesis, make_context(pair, 0));
  if (!angle)
    throw DegeneratePairError("hypothesis center coincides with the database camera");
  return *angle;
}

LocalizationResult localize_ransac(const std::vector<ImagePair>& pairs,
                                   const LocalizerConfig& cfg, std::mt19937_64& rng) {
  validate_config(cfg);
  const int n = static_cast<int>(pairs.size());
  if (n < 2) throw InsufficientPairsError("localization needs >= 2 pairs");

  // Process in id order so the outcome is a function of the pair set and the
  // seed, not of the list order.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return pairs[a].db_id < pairs[b].db_id; });
  std::vector<PairContext> ctxs;
  ctxs.reserve(n);
  for (int i : order) ctxs.push_back(make_context(pairs[i], i));

  Pose best_pose;
  Score best;
  bool have_best = false;
  int bound = cfg.max_iterations;
  int it = 0;

  std::uniform_int_distribution<int> pick_first(0, n - 1);
  std::uniform_int_distribution<int> pick_second(0, n - 2);

  while (it < bound) {
    ++it;
    const int i = pick_first(rng);
    int j = pick_second(rng);
    if (j >= i) ++j;

    const Mat3* rel_i = nullptr;
    const Mat3* rel_j = nullptr;
    const Mat3 rotation = disambiguate_contexts(ctxs[i], ctxs[j], &rel_i, &rel_j);

    Vec3 center;
    try {
      center = triangulate_center({ctxs[i].db_center, world_direction(ctxs[i], *rel_i)},
                                  {ctxs[j].db_center, world_direction(ctxs[j], *rel_j)},
                                  cfg.min_triangulation_angle);
    } catch (const NearCollinearError&) {
      continue;
    }

    Pose hyp{rotation, -(rotation * center)};
    Score sc = score_pose(hyp, ctxs, cfg.alpha_max_t2);
    if (have_best && !score_better(sc, best)) continue;

    if (sc.inliers.size() >= 2) {
      const Pose refined = refit_rounds(ctxs, sc.inliers, hyp, cfg);
      Score refined_score = score_pose(refined, ctxs, cfg.alpha_max_t2);
      if (!score_better(sc, refined_score)) {
        hyp = refined;
        sc = std::move(refined_score);
      }
    }
    if (have_best && !score_better(sc, best)) continue;

    best_pose = hyp;
    best = std::move(sc);
    have_best = true;
    bound = std::min(bound, static_cast<int>([&] {
              const double ratio = static_cast<double>(best.inliers.size()) / n;
              const double p_good = ratio * ratio;
              if (p_good >= 1.0) return 1;
              const double k = std::log(1.0 - cfg.confidence) / std::log(1.0 - p_good);
              if (!std::isfinite(k) || k >= static_cast<double>(cfg.max_iterations))
                return cfg.max_iterations;
              return std::max(1, static_cast<int>(std::ceil(k)));
            }()));
  }

  if (!have_best || best.inliers.size() < 2)
    throw LocalizationFailedError("no hypothesis reached two inliers in " +
                                  std::to_string(it) + " iterations");

  LocalizationResult result;
  result.pose = best_pose;
  result.iterations_run = it;
  result.mean_inlier_angle = best.mean_angle;
  result.inlier_pairs.reserve(best.inliers.size());
  for (int i : best.inliers) result.inlier_pairs.push_back(ctxs[i].original_index);
  std::sort(result.inlier_pairs.begin(), result.inlier_pairs.end());
  return result;
}

Pose refit_local_opt(const std::vector<ImagePair>& inlier_pairs, const Pose& current,
                     const LocalizerConfig& cfg) {
  validate_config(cfg);
  if (inlier_pairs.size() < 2) throw InsufficientPairsError("local refit needs >= 2 inliers");
  std::vector<PairContext> ctxs;
  ctxs.reserve(inlier_pairs.size());
  for (int i = 0; i < static_cast<int>(inlier_pairs.size()); ++i)
    ctxs.push_back(make_context(inlier_pairs[i], i));
  std::vector<int> active(ctxs.size());
  std::iota(active.begin(), active.end(), 0);
  return refit_rounds(ctxs, std::move(active), current, cfg);
}

}  // namespace epiloc

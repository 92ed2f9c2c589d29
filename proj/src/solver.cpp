#include "epiloc/solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "epiloc/error.hpp"

namespace epiloc {

namespace {

// Hartley conditioning: translate to zero mean, scale to mean distance
// sqrt(2). Returns the 3x3 similarity applied to homogeneous points.
Mat3 conditioning_transform(std::span<const Correspondence> corrs, bool query_side) {
  Vec2 mean = Vec2::Zero();
  for (const Correspondence& c : corrs) mean += query_side ? c.normalized_query : c.normalized_db;
  mean /= static_cast<double>(corrs.size());

  double dist = 0.0;
  for (const Correspondence& c : corrs)
    dist += ((query_side ? c.normalized_query : c.normalized_db) - mean).norm();
  dist /= static_cast<double>(corrs.size());
  if (dist < 1e-15)
    throw DegenerateConfigurationError("correspondences collapse to a single point");

  const double s = std::sqrt(2.0) / dist;
  Mat3 t;
  t << s, 0.0, -s * mean.x(),
       0.0, s, -s * mean.y(),
       0.0, 0.0, 1.0;
  return t;
}

int adaptive_iteration_bound(double confidence, double inlier_ratio, int sample_size, int cap) {
  if (inlier_ratio <= 0.0) return cap;
  const double p_good = std::pow(std::min(inlier_ratio, 1.0), sample_size);
  if (p_good >= 1.0) return 1;
  const double k = std::log(1.0 - confidence) / std::log(1.0 - p_good);
  if (!std::isfinite(k) || k >= static_cast<double>(cap)) return cap;
  return std::max(1, static_cast<int>(std::ceil(k)));
}

}  // namespace

Vec2 normalize_pixel(const Vec2& pixel, const CameraIntrinsics& k) {
  return {(pixel.x() - k.cx) / k.fx, (pixel.y() - k.cy) / k.fy};
}

Correspondence make_correspondence(const Vec2& pixel_db, const Vec2& pixel_query,
                                   const CameraIntrinsics& k_db, const CameraIntrinsics& k_query) {
  Correspondence c;
  c.pixel_db = pixel_db;
  c.pixel_query = pixel_query;
  c.normalized_db = normalize_pixel(pixel_db, k_db);
  c.normalized_query = normalize_pixel(pixel_query, k_query);
  return c;
}

Mat3 solve_eight_point(std::span<const Correspondence> corrs) {
  const int n = static_cast<int>(corrs.size());
  if (n < 8) throw InsufficientDataError("eight-point solve needs >= 8 correspondences");

  const Mat3 t_db = conditioning_transform(corrs, false);
  const Mat3 t_query = conditioning_transform(corrs, true);

  Eigen::MatrixXd a(n, 9);
  for (int i = 0; i < n; ++i) {
    const Vec3 d = t_db * Vec3(corrs[i].normalized_db.x(), corrs[i].normalized_db.y(), 1.0);
    const Vec3 q = t_query * Vec3(corrs[i].normalized_query.x(), corrs[i].normalized_query.y(), 1.0);
    a.row(i) << q.x() * d.x(), q.x() * d.y(), q.x(),
                q.y() * d.x(), q.y() * d.y(), q.y(),
                d.x(), d.y(), 1.0;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  // A unique (up to scale) solution needs rank 8: sv has min(n, 9) entries,
  // the 8th must stay well above the noise floor of the largest.
  if (sv[7] < 1e-8 * sv[0])
    throw DegenerateConfigurationError("epipolar design matrix is rank deficient");

  const Eigen::VectorXd e = svd.matrixV().col(8);
  Mat3 em;
  em << e[0], e[1], e[2],
        e[3], e[4], e[5],
        e[6], e[7], e[8];
  return project_to_essential(t_query.transpose() * em * t_db);
}

double sampson_error(const Mat3& e, const Correspondence& c) {
  const Vec3 x_db(c.normalized_db.x(), c.normalized_db.y(), 1.0);
  const Vec3 x_q(c.normalized_query.x(), c.normalized_query.y(), 1.0);
  const Vec3 l_q = e * x_db;
  const Vec3 l_db = e.transpose() * x_q;
  const double r = x_q.dot(l_q);
  const double g2 = l_q.x() * l_q.x() + l_q.y() * l_q.y() + l_db.x() * l_db.x() + l_db.y() * l_db.y();
  if (g2 <= 0.0)  // both points sit on the epipoles
    return r == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(r) / std::sqrt(g2);
}

Mat3 refine_essential_sampson(const Mat3& e, std::span<const Correspondence> corrs,
                              int max_iterations) {
  const Mat3 e0 = project_to_essential(e);
  if (corrs.size() < 5) return e0;

  // Any of the four decompositions spans the same cost surface (the Sampson
  // error ignores the sign and candidate choice), so take the first.
  RelativePose p = decompose_essential(e0).candidates[0];
  Mat3 r = p.rotation;
  Vec3 t = p.direction;

  const int n = static_cast<int>(corrs.size());
  const auto total_cost = [&](const Mat3& rr, const Vec3& tt) {
    const Mat3 em = skew(tt) * rr;
    double c = 0.0;
    for (const Correspondence& cc : corrs) {
      const double s = sampson_error(em, cc);
      c += s * s;
    }
    return c;
  };

  double cost = total_cost(r, t);
  double lambda = 1e-6;
  Eigen::VectorXd res(n);
  Eigen::MatrixXd jac(n, 5);

  for (int iter = 0; iter < max_iterations && cost > 0.0; ++iter) {
    Eigen::Matrix<double, 3, 2> tangent;  // basis of the direction's tangent plane
    const Vec3 seed = std::abs(t.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    tangent.col(0) = (seed - seed.dot(t) * t).normalized();
    tangent.col(1) = t.cross(tangent.col(0));

    const Mat3 em = skew(t) * r;
    for (int i = 0; i < n; ++i) res[i] = sampson_error(em, corrs[i]);
    const double h = 1e-7;  // forward differences; the cost is smooth in h
    for (int pidx = 0; pidx < 5; ++pidx) {
      Mat3 rp = r;
      Vec3 tp = t;
      if (pidx < 3) rp = Eigen::AngleAxisd(h, Vec3::Unit(pidx)).toRotationMatrix() * r;
      else tp = (t + h * tangent.col(pidx - 3)).normalized();
      const Mat3 ep = skew(tp) * rp;
      for (int i = 0; i < n; ++i) jac(i, pidx) = (sampson_error(ep, corrs[i]) - res[i]) / h;
    }

    const Eigen::Matrix<double, 5, 5> jtj = jac.transpose() * jac;
    const Eigen::Matrix<double, 5, 1> jtr = jac.transpose() * res;
    bool stepped = false;
    for (int attempt = 0; attempt < 10 && !stepped; ++attempt) {
      Eigen::Matrix<double, 5, 5> damped = jtj;
      damped.diagonal().array() += lambda * std::max(jtj.diagonal().maxCoeff(), 1e-300);
      const Eigen::Matrix<double, 5, 1> step = damped.ldlt().solve(-jtr);
      const double angle = step.head<3>().norm();
      const Mat3 rn = angle > 0.0
                          ? Mat3(Eigen::AngleAxisd(angle, Vec3(step.head<3>() / angle)) * r)
                          : r;
      const Vec3 tn = (t + tangent * step.tail<2>()).normalized();
      const double cn = total_cost(rn, tn);
      if (cn < cost) {
        const double gain = cost - cn;
        r = rn;
        t = tn;
        cost = cn;
        lambda = std::max(lambda / 3.0, 1e-12);
        stepped = gain > 1e-14 * (1.0 + cost);
        break;
      }
      lambda *= 10.0;
    }
    if (!stepped) break;
  }

  const Mat3 refined = skew(t) * r;
  return refined * (std::sqrt(2.0) / refined.norm());
}

RansacEstimate estimate_essential_ransac(std::span<const Correspondence> corrs,
                                         const SolverConfig& cfg, std::mt19937_64& rng) {
  const int n = static_cast<int>(corrs.size());
  if (n < 8) throw InsufficientDataError("essential RANSAC needs >= 8 correspondences");

  const auto classify = [&](const Mat3& e, std::vector<int>& inliers) {
    inliers.clear();
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double err = sampson_error(e, corrs[i]);
      if (err < cfg.inlier_threshold_t1) {
        inliers.push_back(i);
        sum += err;
      }
    }
    return inliers.empty() ? std::numeric_limits<double>::infinity()
                           : sum / static_cast<double>(inliers.size());
  };

  std::vector<int> index(n);
  for (int i = 0; i < n; ++i) index[i] = i;
  std::vector<Correspondence> sample(8);
  std::vector<int> inliers;

  RansacEstimate best;
  double best_mean = std::numeric_limits<double>::infinity();
  int bound = cfg.max_iterations;
  int it = 0;

  while (it < bound) {
    ++it;
    for (int k = 0; k < 8; ++k) {
      std::uniform_int_distribution<int> pick(k, n - 1);
      std::swap(index[k], index[pick(rng)]);
      sample[k] = corrs[index[k]];
    }

    Mat3 e;
    try {
      e = solve_eight_point(sample);
    } catch (const Error&) {
      continue;  // degenerate sample
    }
    double mean = classify(e, inliers);

    const bool better = static_cast<int>(inliers.size()) > static_cast<int>(best.inliers.size()) ||
                        (inliers.size() == best.inliers.size() && mean < best_mean);
    if (!better) continue;

    // Local optimization before accepting: refit on the consensus set
    // (algebraic solve polished by the Sampson minimizer), reclassify, and
    // repeat while the inlier set keeps changing. Kept only when it scores at
    // least as well under the same inlier test.
    for (int round = 0; round < 4 && inliers.size() > 8; ++round) {
      std::vector<Correspondence> support;
      support.reserve(inliers.size());
      for (int i : inliers) support.push_back(corrs[i]);
      Mat3 refit;
      try {
        refit = refine_essential_sampson(solve_eight_point(support), support);
      } catch (const Error&) {
        break;
      }
      std::vector<int> refit_inliers;
      const double refit_mean = classify(refit, refit_inliers);
      if (refit_inliers.size() < inliers.size() ||
          (refit_inliers.size() == inliers.size() && refit_mean > mean))
        break;
      const bool stable = refit_inliers == inliers;
      e = refit;
      inliers = std::move(refit_inliers);
      mean = refit_mean;
      if (stable) break;
    }

    best.essential = e;
    best.inliers = inliers;
    best_mean = mean;
    bound = std::min(bound, adaptive_iteration_bound(
                                cfg.confidence,
                                static_cast<double>(best.inliers.size()) / static_cast<double>(n),
                                8, cfg.max_iterations));
  }

  best.iterations_run = it;
  if (static_cast<int>(best.inliers.size()) < cfg.min_inliers)
    throw EstimationFailedError("essential RANSAC found only " +
                                std::to_string(best.inliers.size()) + " inliers");
  return best;
}

Mat3 orient_essential(const Mat3& e, std::span<const Correspondence> corrs) {
  if (corrs.empty()) throw InsufficientDataError("cheirality vote needs correspondences");
  const PoseCandidates cands = decompose_essential(e);

  int best_votes = -1;
  const RelativePose* best = nullptr;
  for (const RelativePose& cand : cands.candidates) {
    int votes = 0;
    for (const Correspondence& c : corrs) {
      const Vec3 d_db(c.normalized_db.x(), c.normalized_db.y(), 1.0);
      const Vec3 d_q(c.normalized_query.x(), c.normalized_query.y(), 1.0);
      // Depths along both bearings: lambda R d_db + t = mu d_q, baseline scale 1.
      Eigen::Matrix<double, 3, 2> a;
      a.col(0) = cand.rotation * d_db;
      a.col(1) = -d_q;
      const Eigen::Vector2d depths = a.colPivHouseholderQr().solve(-cand.direction);
      if (depths[0] > 0.0 && depths[1] > 0.0) ++votes;
    }
    if (votes > best_votes) {
      best_votes = votes;
      best = &cand;
    }
  }
  const double align = (skew(best->direction) * best->rotation).cwiseProduct(e).sum();
  return align >= 0.0 ? e : Mat3(-e);
}

}  // namespace epiloc

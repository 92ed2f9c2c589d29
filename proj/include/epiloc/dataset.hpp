#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "epiloc/geometry.hpp"
#include "epiloc/localizer.hpp"
#include "epiloc/retrieval.hpp"
#include "epiloc/solver.hpp"

// Plain whitespace-delimited text formats for every pipeline artifact.
// Lines starting with '#' are comments. One record per line:
//   poses:       id qw qx qy qz tx ty tz        (world->camera, canonical quaternion)
//   intrinsics:  id fx fy cx cy                 (id '*' = shared by all images)
//   descriptors: id v1 ... vD
//   rankings:    query_id db_id rank            (rank ascending from 1)
//   matches:     query_id db_id x_q y_q x_db y_db   (pixels)
//   essentials:  query_id db_id e11 ... e33     (row-major)
//   results:     id ok qw qx qy qz tx ty tz inliers iterations mean_angle
//                id failed <reason>

namespace epiloc {

struct DatasetLayout {
  std::string poses = "poses.txt";
  std::string intrinsics = "intrinsics.txt";
  std::string descriptors = "descriptors.txt";
  std::string rankings = "rankings.txt";
  std::string matches = "matches.txt";
  std::string essentials = "essentials.txt";
  std::string query_poses = "query_poses.txt";
};

using PairKey = std::pair<std::string, std::string>;  // (query_id, db_id)
using MatchRow = std::array<double, 4>;               // x_q y_q x_db y_db

struct SceneDataset {
  std::string name;
  std::vector<std::string> image_ids;  // database images, file order
  std::unordered_map<std::string, Pose> poses;
  std::optional<CameraIntrinsics> shared_intrinsics;
  std::unordered_map<std::string, CameraIntrinsics> intrinsics;
  std::vector<GlobalDescriptor> descriptors;
  std::map<std::string, std::vector<std::string>> rankings;  // query -> ranked db ids
  std::map<PairKey, std::vector<MatchRow>> matches;
  std::map<PairKey, Mat3> essentials;  // valid essential matrices after load
  std::unordered_map<std::string, Pose> query_truth;

  bool has_pair_data(const std::string& query_id, const std::string& db_id) const {
    const PairKey key{query_id, db_id};
    return essentials.count(key) > 0 || matches.count(key) > 0;
  }
  const CameraIntrinsics* intrinsics_for(const std::string& id) const {
    auto it = intrinsics.find(id);
    if (it != intrinsics.end()) return &it->second;
    return shared_intrinsics ? &*shared_intrinsics : nullptr;
  }
};

struct QueryResult {
  std::string id;
  bool ok = false;
  Pose pose;
  int inliers = 0;
  int iterations = 0;
  double mean_inlier_angle = 0.0;  // degrees
  std::string message;             // failure reason slug when !ok
};

// Only files present under root are loaded; the poses file is required.
SceneDataset parse_dataset(const std::filesystem::path& root, const DatasetLayout& layout = {});

std::vector<std::pair<std::string, Pose>> parse_poses_file(const std::filesystem::path& file);
void write_poses_file(const std::filesystem::path& file,
                      const std::vector<std::pair<std::string, Pose>>& poses);

struct IntrinsicsTable {
  std::optional<CameraIntrinsics> shared;
  std::unordered_map<std::string, CameraIntrinsics> per_image;
};
IntrinsicsTable parse_intrinsics_file(const std::filesystem::path& file);
void write_intrinsics_file(const std::filesystem::path& file, const IntrinsicsTable& table);

std::vector<GlobalDescriptor> parse_descriptors_file(const std::filesystem::path& file);
void write_descriptors_file(const std::filesystem::path& file,
                            const std::vector<GlobalDescriptor>& descriptors);

std::map<std::string, std::vector<std::string>> parse_rankings_file(const std::filesystem::path& file);
void write_rankings_file(const std::filesystem::path& file,
                         const std::map<std::string, std::vector<std::string>>& rankings);

std::map<PairKey, std::vector<MatchRow>> parse_matches_file(const std::filesystem::path& file);
void write_matches_file(const std::filesystem::path& file,
                        const std::map<PairKey, std::vector<MatchRow>>& matches);

std::map<PairKey, Mat3> parse_essentials_file(const std::filesystem::path& file);
void write_essentials_file(const std::filesystem::path& file, const std::map<PairKey, Mat3>& essentials,
                           const std::vector<std::string>& header_comments = {});

std::vector<QueryResult> parse_results_file(const std::filesystem::path& file);
void write_results_file(const std::filesystem::path& file, const std::vector<QueryResult>& results,
                        const std::vector<std::string>& header_comments = {});

// Shortest-roundtrip decimal formatting shared by all writers.
std::string format_double(double v);

}  // namespace epiloc

#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

// Database ranking from precomputed global image descriptors.

namespace epiloc {

struct GlobalDescriptor {
  std::string id;
  Eigen::VectorXd vector;  // L2-normalized
};

// Ids of the k most similar database descriptors by descending inner product
// (equivalently ascending Euclidean distance for unit vectors); ties broken
// by ascending id.
std::vector<std::string> rank_database(const GlobalDescriptor& query,
                                       const std::vector<GlobalDescriptor>& db, int k);

}  // namespace epiloc

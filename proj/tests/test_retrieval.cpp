#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <vector>

#include "epiloc/retrieval.hpp"
#include "epiloc/error.hpp"

using namespace epiloc;

namespace {

GlobalDescriptor desc(const std::string& id, std::initializer_list<double> values) {
  GlobalDescriptor d;
  d.id = id;
  d.vector.resize(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) d.vector[i++] = v;
  return d;
}

GlobalDescriptor random_desc(const std::string& id, int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  GlobalDescriptor d;
  d.id = id;
  d.vector.resize(dim);
  for (int i = 0; i < dim; ++i) d.vector[i] = gauss(rng);
  d.vector.normalize();
  return d;
}

}  // namespace

TEST_CASE("ranking orders by descending inner product") {
  const std::vector<GlobalDescriptor> db{
      desc("far", {0.0, 1.0}),
      desc("close", {1.0, 0.0}),
      desc("mid", {0.6, 0.8}),
  };
  const std::vector<std::string> ranked = rank_database(desc("q", {1.0, 0.0}), db, 3);
  CHECK(ranked == std::vector<std::string>{"close", "mid", "far"});
}

TEST_CASE("k clips to the database size and truncates otherwise") {
  const std::vector<GlobalDescriptor> db{desc("a", {1.0, 0.0}), desc("b", {0.0, 1.0})};
  CHECK(rank_database(desc("q", {1.0, 0.0}), db, 10).size() == 2);
  CHECK(rank_database(desc("q", {1.0, 0.0}), db, 1) == std::vector<std::string>{"a"});
}

TEST_CASE("exact score ties break by ascending id") {
  const std::vector<GlobalDescriptor> db{
      desc("zeta", {1.0, 0.0}),
      desc("alpha", {1.0, 0.0}),
      desc("mid", {0.0, 1.0}),
  };
  const std::vector<std::string> ranked = rank_database(desc("q", {1.0, 0.0}), db, 3);
  CHECK(ranked == std::vector<std::string>{"alpha", "zeta", "mid"});
}

TEST_CASE("ranking agrees with a brute-force oracle") {
  std::mt19937_64 rng(31);
  std::vector<GlobalDescriptor> db;
  for (int i = 0; i < 60; ++i) db.push_back(random_desc("img" + std::to_string(i), 16, rng));
  const GlobalDescriptor q = random_desc("q", 16, rng);

  std::vector<std::pair<double, std::string>> scored;
  for (const GlobalDescriptor& d : db) scored.emplace_back(-q.vector.dot(d.vector), d.id);
  std::sort(scored.begin(), scored.end());
  std::vector<std::string> expected;
  for (int i = 0; i < 10; ++i) expected.push_back(scored[i].second);

  CHECK(rank_database(q, db, 10) == expected);

  // For unit vectors, descending inner product is ascending Euclidean distance.
  const std::vector<std::string> full = rank_database(q, db, 60);
  for (size_t i = 1; i < full.size(); ++i) {
    const auto find = [&](const std::string& id) {
      return std::find_if(db.begin(), db.end(),
                          [&](const GlobalDescriptor& d) { return d.id == id; });
    };
    const double prev = (q.vector - find(full[i - 1])->vector).norm();
    const double curr = (q.vector - find(full[i])->vector).norm();
    CHECK(prev <= curr + 1e-12);
  }
}

TEST_CASE("dimension mismatches and empty databases are format errors") {
  const std::vector<GlobalDescriptor> db{desc("a", {1.0, 0.0})};
  CHECK_THROWS_AS(rank_database(desc("q", {1.0, 0.0, 0.0}), db, 1), FormatError);
  CHECK_THROWS_AS(rank_database(desc("q", {1.0}), db, 1), FormatError);
  CHECK_THROWS_AS(rank_database(desc("q", {1.0, 0.0}), {}, 1), FormatError);
}

#include "epiloc/retrieval.hpp"

#include <algorithm>
#include <utility>

#include "epiloc/error.hpp"

namespace epiloc {

std::vector<std::string> rank_database(const GlobalDescriptor& query,
                                       const std::vector<GlobalDescriptor>& db, int k) {
  if (db.empty()) throw FormatError("descriptor database is empty");
  std::vector<std::pair<double, const std::string*>> scored;
  scored.reserve(db.size());
  for (const GlobalDescriptor& d : db) {
    if (d.vector.size() != query.vector.size())
      throw FormatError("descriptor dimension mismatch: " + std::to_string(d.vector.size()) +
                        " vs " + std::to_string(query.vector.size()) + " for '" + d.id + "'");
    scored.emplace_back(query.vector.dot(d.vector), &d.id);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return *a.second < *b.second;
  });
  const int count = std::min<int>(k, static_cast<int>(scored.size()));
  std::vector<std::string> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(*scored[i].second);
  return out;
}

}  // namespace epiloc

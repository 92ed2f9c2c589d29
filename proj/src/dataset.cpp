#include "epiloc/dataset.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_set>

#include "epiloc/error.hpp"
#include "epiloc/essential.hpp"

namespace epiloc {

namespace {

std::string location(const std::filesystem::path& file, int line) {
  return file.filename().string() + ":" + std::to_string(line);
}

// Iterates whitespace-tokenized lines, skipping blanks and '#' comments.
class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& file) : file_(file), in_(file) {
    if (!in_) throw ParseError("cannot open '" + file.string() + "'");
  }

  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      if (line.empty() || line[0] == '#') continue;
      tokens.clear();
      std::istringstream ss(line);
      std::string tok;
      while (ss >> tok) tokens.push_back(tok);
      if (!tokens.empty()) return true;
    }
    return false;
  }

  int line() const { return line_; }
  const std::filesystem::path& file() const { return file_; }

  void expect(const std::vector<std::string>& tokens, size_t count) const {
    if (tokens.size() != count)
      throw ParseError(location(file_, line_) + ": expected " + std::to_string(count) +
                       " fields, got " + std::to_string(tokens.size()));
  }

  double number(const std::string& tok) const {
    try {
      size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw ParseError(location(file_, line_) + ": not a number: '" + tok + "'");
    }
  }

  long integer(const std::string& tok) const {
    try {
      size_t used = 0;
      const long v = std::stol(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw ParseError(location(file_, line_) + ": not an integer: '" + tok + "'");
    }
  }

 private:
  std::filesystem::path file_;
  std::ifstream in_;
  int line_ = 0;
};

std::ofstream open_for_write(const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw ParseError("cannot write '" + file.string() + "'");
  return out;
}

Pose pose_from_tokens(const LineReader& reader, const std::vector<std::string>& tokens,
                      size_t offset) {
  Quat q(reader.number(tokens[offset]), reader.number(tokens[offset + 1]),
         reader.number(tokens[offset + 2]), reader.number(tokens[offset + 3]));
  const double norm = q.norm();
  if (std::abs(norm - 1.0) > 1e-3)
    throw ValidationError(location(reader.file(), reader.line()) +
                          ": quaternion norm off by more than 1e-3");
  // Leave bit-exact inputs untouched so written files roundtrip byte-equal.
  if (std::abs(norm - 1.0) > 1e-12) q.coeffs() /= norm;
  q = canonical_quaternion(q);
  Pose p;
  p.rotation = q.toRotationMatrix();
  p.translation = Vec3(reader.number(tokens[offset + 4]), reader.number(tokens[offset + 5]),
                       reader.number(tokens[offset + 6]));
  return p;
}

void write_pose_fields(std::ofstream& out, const Pose& pose) {
  const Quat q = quaternion_from_rotation(pose.rotation);
  out << ' ' << format_double(q.w()) << ' ' << format_double(q.x()) << ' '
      << format_double(q.y()) << ' ' << format_double(q.z());
  for (int i = 0; i < 3; ++i) out << ' ' << format_double(pose.translation[i]);
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<std::pair<std::string, Pose>> parse_poses_file(const std::filesystem::path& file) {
  LineReader reader(file);
  std::vector<std::pair<std::string, Pose>> out;
  std::unordered_set<std::string> seen;
  std::vector<std::string> tokens;
  while (reader.next(tokens)) {
    reader.expect(tokens, 8);
    if (!seen.insert(tokens[0]).second)
      throw ValidationError(location(file, reader.line()) + ": duplicate id '" + tokens[0] + "'");
    out.emplace_back(tokens[0], pose_from_tokens(reader, tokens, 1));
  }
  return out;
}

void write_poses_file(const std::filesystem::path& file,
                      const std::vector<std::pair<std::string, Pose>>& poses) {
  std::ofstream out = open_for_write(file);
  out << "# id qw qx qy qz tx ty tz (world->camera)\n";
  for (const auto& [id, pose] : poses) {
    out << id;
    write_pose_fields(out, pose);
    out << '\n';
  }
}

IntrinsicsTable parse_intrinsics_file(const std::filesystem::path& file) {
  LineReader reader(file);
  IntrinsicsTable table;
  std::vector<std::string> tokens;
  while (reader.next(tokens)) {
    reader.expect(tokens, 5);
    CameraIntrinsics k{reader.number(tokens[1]), reader.number(tokens[2]),
                       reader.number(tokens[3]), reader.number(tokens[4])};
    if (!(k.fx > 0.0 && k.fy > 0.0))
      throw ValidationError(location(file, reader.line()) + ": focal lengths must be positive");
    if (tokens[0] == "*") {
      if (table.shared)
        throw ValidationError(location(file, reader.line()) + ": duplicate shared intrinsics");
      table.shared = k;
    } else {
      if (!table.per_image.emplace(tokens[0], k).second)
        throw ValidationError(location(file, reader.line()) + ": duplicate id '" + tokens[0] + "'");
    }
  }
  return table;
}

void write_intrinsics_file(const std::filesystem::path& file, const IntrinsicsTable& table) {
  std::ofstream out = open_for_write(file);
  out << "# id fx fy cx cy ('*' = shared)\n";
  const auto row = [&](const std::string& id, const CameraIntrinsics& k) {
    out << id << ' ' << format_double(k.fx) << ' ' << format_double(k.fy) << ' '
        << format_double(k.cx) << ' ' << format_double(k.cy) << '\n';
  };
  if (table.shared) row("*", *table.shared);
  std::vector<std::string> ids;
  for (const auto& [id, k] : table.per_image) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  for (const std::string& id : ids) row(id, table.per_image.at(id));
}

std::vector<GlobalDescriptor> parse_descriptors_file(const std::filesystem::path& file) {
  LineReader reader(file);
  std::vector<GlobalDescriptor> out;
  std::unordered_set<std::string> seen;
  std::vector<std::string> tokens;
  Eigen::Index dim = -1;
  while (reader.next(tokens)) {
    if (tokens.size() < 2)
      throw ParseError(location(file, reader.line()) + ": descriptor has no values");
    if (!seen.insert(tokens[0]).second)
      throw ValidationError(location(file, reader.line()) + ": duplicate id '" + tokens[0] + "'");
    GlobalDescriptor d;
    d.id = tokens[0];
    d.vector.resize(static_cast<Eigen::Index>(tokens.size()) - 1);
    for (size_t i = 1; i < tokens.size(); ++i)
      d.vector[static_cast<Eigen::Index>(i) - 1] = reader.number(tokens[i]);
    if (dim < 0) dim = d.vector.size();
    if (d.vector.size() != dim)
      throw FormatError(location(file, reader.line()) + ": descriptor dimension " +
                        std::to_string(d.vector.size()) + " != " + std::to_string(dim));
    const double norm = d.vector.norm();
    if (norm < 1e-12)
      throw ValidationError(location(file, reader.line()) + ": zero descriptor");
    if (std::abs(norm - 1.0) > 1e-6) {
      std::cerr << "warning: " << location(file, reader.line())
                << ": descriptor not unit norm, normalizing\n";
      d.vector /= norm;
    }
    out.push_back(std::move(d));
  }
  return out;
}

void write_descriptors_file(const std::filesystem::path& file,
                            const std::vector<GlobalDescriptor>& descriptors) {
  std::ofstream out = open_for_write(file);
  out << "# id v1 ... vD\n";
  for (const GlobalDescriptor& d : descriptors) {
    out << d.id;
    for (Eigen::Index i = 0; i < d.vector.size(); ++i) out << ' ' << format_double(d.vector[i]);
    out << '\n';
  }
}

std::map<std::string, std::vector<std::string>> parse_rankings_file(
    const std::filesystem::path& file) {
  LineReader reader(file);
  std::map<std::string, std::vector<std::pair<long, std::string>>> ranked;
  std::vector<std::string> tokens;
  while (reader.next(tokens)) {
    reader.expect(tokens, 3);
    ranked[tokens[0]].emplace_back(reader.integer(tokens[2]), tokens[1]);
  }
  std::map<std::string, std::vector<std::string>> out;
  for (auto& [query, rows] : ranked) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    auto& ids = out[query];
    ids.reserve(rows.size());
    for (const auto& [rank, id] : rows) ids.push_back(id);
  }
  return out;
}

void write_rankings_file(const std::filesystem::path& file,
                         const std::map<std::string, std::vector<std::string>>& rankings) {
  std::ofstream out = open_for_write(file);
  out << "# query_id db_id rank\n";
  for (const auto& [query, ids] : rankings)
    for (size_t i = 0; i < ids.size(); ++i)
      out << query << ' ' << ids[i] << ' ' << (i + 1) << '\n';
}

std::map<PairKey, std::vector<MatchRow>> parse_matches_file(const std::filesystem::path& file) {
  LineReader reader(file);
  std::map<PairKey, std::vector<MatchRow>> out;
  std::vector<std::string> tokens;
  while (reader.next(tokens)) {
    reader.expect(tokens, 6);
    out[{tokens[0], tokens[1]}].push_back(MatchRow{reader.number(tokens[2]), reader.number(tokens[3]),
                                                   reader.number(tokens[4]), reader.number(tokens[5])});
  }
  return out;
}

void write_matches_file(const std::filesystem::path& file,
                        const std::map<PairKey, std::vector<MatchRow>>& matches) {
  std::ofstream out = open_for_write(file);
  out << "# query_id db_id x_query y_query x_db y_db\n";
  for (const auto& [key, rows] : matches)
    for (const MatchRow& r : rows)
      out << key.first << ' ' << key.second << ' ' << format_double(r[0]) << ' '
          << format_double(r[1]) << ' ' << format_double(r[2]) << ' ' << format_double(r[3])
          << '\n';
}

std::map<PairKey, Mat3> parse_essentials_file(const std::filesystem::path& file) {
  LineReader reader(file);
  std::map<PairKey, Mat3> out;
  std::vector<std::string> tokens;
  while (reader.next(tokens)) {
    reader.expect(tokens, 11);
    Mat3 m;
    for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = reader.number(tokens[2 + i]);
    // Valid rows are kept bit-exact; anything else is projected onto the
    // essential manifold, loudly when the correction is large.
    if (!is_essential(m, 1e-9)) {
      const double norm = m.norm();
      if (norm < 1e-12)
        throw ValidationError(location(file, reader.line()) + ": zero essential matrix");
      const Mat3 scaled = m * (std::sqrt(2.0) / norm);
      const Mat3 projected = project_to_essential(m);
      if (essential_distance(projected, scaled) > 1e-3)
        std::cerr << "warning: " << location(file, reader.line())
                  << ": essential matrix adjusted by "
                  << essential_distance(projected, scaled) << " in projection\n";
      m = projected;
    }
    if (!out.emplace(PairKey{tokens[0], tokens[1]}, m).second)
      throw ValidationError(location(file, reader.line()) + ": duplicate pair " + tokens[0] +
                            " / " + tokens[1]);
  }
  return out;
}

void write_essentials_file(const std::filesystem::path& file, const std::map<PairKey, Mat3>& essentials,
                           const std::vector<std::string>& header_comments) {
  std::ofstream out = open_for_write(file);
  for (const std::string& line : header_comments) out << "# " << line << '\n';
  out << "# query_id db_id e11 e12 e13 e21 e22 e23 e31 e32 e33\n";
  for (const auto& [key, m] : essentials) {
    out << key.first << ' ' << key.second;
    for (int i = 0; i < 9; ++i) out << ' ' << format_double(m(i / 3, i % 3));
    out << '\n';
  }
}

std::vector<QueryResult> parse_results_file(const std::filesystem::path& file) {
  LineReader reader(file);
  std::vector<QueryResult> out;
  std::vector<std::string> tokens;
  while (reader.next(tokens)) {
    if (tokens.size() < 2)
      throw ParseError(location(file, reader.line()) + ": truncated result line");
    QueryResult r;
    r.id = tokens[0];
    if (tokens[1] == "ok") {
      reader.expect(tokens, 12);
      r.ok = true;
      r.pose = pose_from_tokens(reader, tokens, 2);
      r.inliers = static_cast<int>(reader.integer(tokens[9]));
      r.iterations = static_cast<int>(reader.integer(tokens[10]));
      r.mean_inlier_angle = reader.number(tokens[11]);
    } else if (tokens[1] == "failed") {
      reader.expect(tokens, 3);
      r.ok = false;
      r.message = tokens[2];
    } else {
      throw ParseError(location(file, reader.line()) + ": unknown status '" + tokens[1] + "'");
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_results_file(const std::filesystem::path& file, const std::vector<QueryResult>& results,
                        const std::vector<std::string>& header_comments) {
  std::ofstream out = open_for_write(file);
  for (const std::string& line : header_comments) out << "# " << line << '\n';
  out << "# id ok qw qx qy qz tx ty tz inliers iterations mean_inlier_angle_deg\n";
  out << "# id failed reason\n";
  for (const QueryResult& r : results) {
    out << r.id;
    if (r.ok) {
      out << " ok";
      write_pose_fields(out, r.pose);
      out << ' ' << r.inliers << ' ' << r.iterations << ' ' << format_double(r.mean_inlier_angle);
    } else {
      out << " failed " << (r.message.empty() ? "unknown" : r.message);
    }
    out << '\n';
  }
}

SceneDataset parse_dataset(const std::filesystem::path& root, const DatasetLayout& layout) {
  if (!std::filesystem::is_directory(root))
    throw ParseError("dataset root '" + root.string() + "' is not a directory");
  const auto path = [&](const std::string& name) { return root / name; };
  const auto present = [&](const std::string& name) {
    return std::filesystem::exists(path(name));
  };

  SceneDataset ds;
  ds.name = root.filename().string();

  if (!present(layout.poses))
    throw ParseError("dataset '" + root.string() + "' has no " + layout.poses);
  for (auto& [id, pose] : parse_poses_file(path(layout.poses))) {
    ds.image_ids.push_back(id);
    ds.poses.emplace(id, pose);
  }

  if (present(layout.intrinsics)) {
    IntrinsicsTable table = parse_intrinsics_file(path(layout.intrinsics));
    ds.shared_intrinsics = table.shared;
    ds.intrinsics = std::move(table.per_image);
    for (const auto& [id, k] : ds.intrinsics)
      if (!ds.poses.count(id))
        throw LinkError(layout.intrinsics + ": unknown image id '" + id + "'");
  }
  if (present(layout.descriptors)) ds.descriptors = parse_descriptors_file(path(layout.descriptors));
  if (present(layout.rankings)) {
    ds.rankings = parse_rankings_file(path(layout.rankings));
    for (const auto& [query, ids] : ds.rankings)
      for (const std::string& id : ids)
        if (!ds.poses.count(id))
          throw LinkError(layout.rankings + ": unknown database id '" + id + "'");
  }
  if (present(layout.matches)) {
    ds.matches = parse_matches_file(path(layout.matches));
    for (const auto& [key, rows] : ds.matches)
      if (!ds.poses.count(key.second))
        throw LinkError(layout.matches + ": unknown database id '" + key.second + "'");
  }
  if (present(layout.essentials)) {
    ds.essentials = parse_essentials_file(path(layout.essentials));
    for (const auto& [key, m] : ds.essentials)
      if (!ds.poses.count(key.second))
        throw LinkError(layout.essentials + ": unknown database id '" + key.second + "'");
  }
  if (present(layout.query_poses))
    for (auto& [id, pose] : parse_poses_file(path(layout.query_poses)))
      ds.query_truth.emplace(id, pose);
  return ds;
}

}  // namespace epiloc

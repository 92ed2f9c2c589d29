#include "epiloc/adapters.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "epiloc/error.hpp"

namespace epiloc {

std::vector<std::pair<std::string, Pose>> import_sevenscenes_poses(
    const std::filesystem::path& scene_dir) {
  if (!std::filesystem::is_directory(scene_dir))
    throw ParseError("'" + scene_dir.string() + "' is not a directory");
  const std::string suffix = ".pose.txt";
  std::vector<std::pair<std::string, Pose>> out;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(scene_dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.size() <= suffix.size() || name.substr(name.size() - suffix.size()) != suffix)
      continue;
    std::ifstream in(entry.path());
    if (!in) throw ParseError("cannot open '" + entry.path().string() + "'");
    // Files hold a 4x4 camera-to-world homogeneous matrix.
    Eigen::Matrix4d m;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        if (!(in >> m(r, c)))
          throw ParseError("'" + entry.path().string() + "': expected 16 matrix entries");
    const Mat3 r_wc = m.topLeftCorner<3, 3>();
    if (!is_rotation(r_wc, 1e-3))
      throw ValidationError("'" + entry.path().string() + "': rotation block is not orthonormal");
    const Vec3 center = m.topRightCorner<3, 1>();
    Pose pose;
    pose.rotation = Quat(r_wc).normalized().toRotationMatrix().transpose();
    pose.translation = -(pose.rotation * center);
    std::string id = std::filesystem::relative(entry.path(), scene_dir).generic_string();
    id.erase(id.size() - suffix.size());
    out.emplace_back(std::move(id), pose);
  }
  if (out.empty())
    throw ParseError("no *" + suffix + " files under '" + scene_dir.string() + "'");
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::vector<std::pair<std::string, Pose>> import_cambridge_poses(
    const std::filesystem::path& dataset_file) {
  std::ifstream in(dataset_file);
  if (!in) throw ParseError("cannot open '" + dataset_file.string() + "'");
  std::string line;
  // Three header lines: collection name, URL, column legend.
  for (int i = 0; i < 3; ++i)
    if (!std::getline(in, line))
      throw ParseError("'" + dataset_file.string() + "': truncated header");
  std::vector<std::pair<std::string, Pose>> out;
  int lineno = 3;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string id;
    if (!(ss >> id)) continue;
    double x, y, z, qw, qx, qy, qz;
    if (!(ss >> x >> y >> z >> qw >> qx >> qy >> qz))
      throw ParseError(dataset_file.filename().string() + ":" + std::to_string(lineno) +
                       ": expected 'id x y z qw qx qy qz'");
    Quat q(qw, qx, qy, qz);
    const double norm = q.norm();
    if (norm < 1e-6)
      throw ValidationError(dataset_file.filename().string() + ":" + std::to_string(lineno) +
                            ": zero quaternion");
    q.coeffs() /= norm;
    // Rows give the camera center and the world-to-camera rotation.
    Pose pose;
    pose.rotation = q.toRotationMatrix();
    pose.translation = -(pose.rotation * Vec3(x, y, z));
    out.emplace_back(std::move(id), pose);
  }
  if (out.empty()) throw ParseError("'" + dataset_file.string() + "': no pose rows");
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

}  // namespace epiloc

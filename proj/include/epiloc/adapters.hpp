#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "epiloc/geometry.hpp"

// Thin converters from published dataset layouts into the canonical poses
// file. Kept apart from the core parsers: these encode third-party
// conventions, not ours.

namespace epiloc {

// Directory of seq-*/frame-*.pose.txt files, each a 4x4 camera-to-world
// matrix; inverted here into world->camera. Ids are the relative paths
// without the ".pose.txt" suffix.
std::vector<std::pair<std::string, Pose>> import_sevenscenes_poses(
    const std::filesystem::path& scene_dir);

// dataset_train.txt / dataset_test.txt: three header lines, then
// `id x y z qw qx qy qz` with (x,y,z) the camera center in world coordinates
// and q the world->camera rotation; t = -R c is computed here.
std::vector<std::pair<std::string, Pose>> import_cambridge_poses(
    const std::filesystem::path& dataset_file);

}  // namespace epiloc

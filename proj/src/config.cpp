#include "epiloc/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "epiloc/dataset.hpp"
#include "epiloc/error.hpp"

namespace epiloc {

Preset parse_preset(const std::string& name) {
  if (name == "indoor") return Preset::indoor;
  if (name == "outdoor") return Preset::outdoor;
  throw ParseError("unknown preset '" + name + "' (expected indoor or outdoor)");
}

Method parse_method(const std::string& name) {
  if (name == "learned") return Method::learned;
  if (name == "sift") return Method::sift;
  if (name == "matching") return Method::matching;
  throw ParseError("unknown method '" + name + "' (expected learned, sift or matching)");
}

std::string preset_name(Preset preset) {
  return preset == Preset::indoor ? "indoor" : "outdoor";
}

std::string method_name(Method method) {
  switch (method) {
    case Method::learned: return "learned";
    case Method::sift: return "sift";
    default: return "matching";
  }
}

void apply_preset(PipelineConfig& cfg, Preset preset) {
  const bool indoor = preset == Preset::indoor;
  cfg.min_pair_distance_m = indoor ? 0.05 : 3.0;
  cfg.max_pair_distance_m = indoor ? 10.0 : 50.0;
  cfg.top_k = 5;
  switch (cfg.method) {
    case Method::learned:
      cfg.t2_deg = 5.0;
      break;
    case Method::sift:
      cfg.t2_deg = indoor ? 15.0 : 5.0;
      cfg.t1_px = 0.5;
      break;
    case Method::matching:
      cfg.t2_deg = indoor ? 20.0 : 15.0;
      cfg.t1_px = indoor ? 5.5 : 4.0;
      break;
  }
}

void apply_config_file(PipelineConfig& cfg, const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open config '" + file.string() + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    for (char& c : line)
      if (c == '=') c = ' ';
    std::istringstream ss(line);
    std::string key, value, extra;
    if (!(ss >> key) || key[0] == '#') continue;
    if (!(ss >> value) || (ss >> extra))
      throw ParseError(file.filename().string() + ":" + std::to_string(lineno) +
                       ": expected 'key value'");
    const auto where = file.filename().string() + ":" + std::to_string(lineno);
    const auto as_double = [&] {
      try {
        return std::stod(value);
      } catch (const std::exception&) {
        throw ParseError(where + ": not a number: '" + value + "'");
      }
    };
    const auto as_int = [&] {
      try {
        return std::stoi(value);
      } catch (const std::exception&) {
        throw ParseError(where + ": not an integer: '" + value + "'");
      }
    };
    if (key == "method") cfg.method = parse_method(value);
    else if (key == "t1_px") cfg.t1_px = as_double();
    else if (key == "t2_deg") cfg.t2_deg = as_double();
    else if (key == "min_pair_distance_m") cfg.min_pair_distance_m = as_double();
    else if (key == "max_pair_distance_m") cfg.max_pair_distance_m = as_double();
    else if (key == "top_k") cfg.top_k = as_int();
    else if (key == "min_triangulation_angle_deg") cfg.min_triangulation_angle_deg = as_double();
    else if (key == "localizer_max_iterations") cfg.localizer_max_iterations = as_int();
    else if (key == "localizer_confidence") cfg.localizer_confidence = as_double();
    else if (key == "lo_iterations") cfg.lo_iterations = as_int();
    else if (key == "solver_max_iterations") cfg.solver_max_iterations = as_int();
    else if (key == "solver_confidence") cfg.solver_confidence = as_double();
    else if (key == "solver_min_inliers") cfg.solver_min_inliers = as_int();
    else if (key == "seed") cfg.seed = static_cast<uint64_t>(std::stoull(value));
    else throw ParseError(where + ": unknown key '" + key + "'");
  }
}

std::vector<std::pair<std::string, std::string>> config_echo(const PipelineConfig& cfg) {
  std::map<std::string, std::string> kv;
  kv["method"] = method_name(cfg.method);
  kv["t1_px"] = format_double(cfg.t1_px);
  kv["t2_deg"] = format_double(cfg.t2_deg);
  kv["min_pair_distance_m"] = format_double(cfg.min_pair_distance_m);
  kv["max_pair_distance_m"] = format_double(cfg.max_pair_distance_m);
  kv["top_k"] = std::to_string(cfg.top_k);
  kv["min_triangulation_angle_deg"] = format_double(cfg.min_triangulation_angle_deg);
  kv["localizer_max_iterations"] = std::to_string(cfg.localizer_max_iterations);
  kv["localizer_confidence"] = format_double(cfg.localizer_confidence);
  kv["lo_iterations"] = std::to_string(cfg.lo_iterations);
  kv["solver_max_iterations"] = std::to_string(cfg.solver_max_iterations);
  kv["solver_confidence"] = format_double(cfg.solver_confidence);
  kv["solver_min_inliers"] = std::to_string(cfg.solver_min_inliers);
  kv["seed"] = std::to_string(cfg.seed);
  return {kv.begin(), kv.end()};
}

LocalizerConfig localizer_config(const PipelineConfig& cfg) {
  LocalizerConfig lc;
  lc.alpha_max_t2 = cfg.t2_deg;
  lc.min_pair_distance_a = cfg.min_pair_distance_m;
  lc.max_pair_distance_b = cfg.max_pair_distance_m;
  lc.top_k = cfg.top_k;
  lc.min_triangulation_angle = cfg.min_triangulation_angle_deg;
  lc.max_iterations = cfg.localizer_max_iterations;
  lc.confidence = cfg.localizer_confidence;
  lc.lo_iterations = cfg.lo_iterations;
  lc.seed = cfg.seed;
  return lc;
}

SolverConfig solver_config(const PipelineConfig& cfg, const CameraIntrinsics& k_db,
                           const CameraIntrinsics& k_query) {
  SolverConfig sc;
  // Pixel threshold over geometric mean focal length of both cameras.
  const double f = std::pow(k_db.fx * k_db.fy * k_query.fx * k_query.fy, 0.25);
  sc.inlier_threshold_t1 = cfg.t1_px / f;
  sc.max_iterations = cfg.solver_max_iterations;
  sc.confidence = cfg.solver_confidence;
  sc.min_inliers = cfg.solver_min_inliers;
  sc.seed = cfg.seed;
  return sc;
}

}  // namespace epiloc

#include "epiloc/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "epiloc/adapters.hpp"
#include "epiloc/config.hpp"
#include "epiloc/dataset.hpp"
#include "epiloc/error.hpp"
#include "epiloc/evaluate.hpp"
#include "epiloc/localizer.hpp"
#include "epiloc/retrieval.hpp"
#include "epiloc/simulator.hpp"
#include "epiloc/solver.hpp"

namespace epiloc::cli {
namespace {

namespace fs = std::filesystem;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Stream-local seeds so adding a query or pair never shifts another's draws.
std::uint64_t mix_seed(std::uint64_t base, std::string_view tag) { return base ^ fnv1a(tag); }

std::string pair_tag(const std::string& query_id, const std::string& db_id) {
  std::string tag = query_id;
  tag.push_back('\0');
  tag += db_id;
  return tag;
}

std::string config_comment(const PipelineConfig& cfg) {
  std::string out = "config:";
  for (const auto& [key, value] : config_echo(cfg)) out += ' ' + key + '=' + value;
  return out;
}

// Global option state; precedence is defaults, preset, config file, then
// explicit flags (--method re-asserted, --seed last).
struct ConfigCli {
  std::string config_path, preset, method;
  std::uint64_t seed = 0;
  CLI::Option* config_opt = nullptr;
  CLI::Option* preset_opt = nullptr;
  CLI::Option* method_opt = nullptr;
  CLI::Option* seed_opt = nullptr;

  void attach(CLI::App& app) {
    config_opt = app.add_option("--config", config_path,
                                "Config file of 'key value' lines ($EPILOC_CONFIG by default)");
    preset_opt = app.add_option("--preset", preset, "Threshold preset: indoor|outdoor");
    method_opt = app.add_option("--method", method, "Pair source: learned|sift|matching");
    seed_opt = app.add_option("--seed", seed, "Base RNG seed");
  }

  PipelineConfig resolve(std::optional<Method> inferred) const {
    PipelineConfig cfg;
    if (method_opt->count() > 0) cfg.method = parse_method(method);
    else if (inferred) cfg.method = *inferred;
    if (preset_opt->count() > 0) apply_preset(cfg, parse_preset(preset));
    std::string path = config_path;
    if (config_opt->count() == 0)
      if (const char* env = std::getenv("EPILOC_CONFIG")) path = env;
    if (!path.empty()) apply_config_file(cfg, path);
    if (method_opt->count() > 0) cfg.method = parse_method(method);
    if (seed_opt->count() > 0) cfg.seed = seed;
    return cfg;
  }
};

struct SimulateOpts {
  std::string out_dir;
  std::string layout = "general";
  int n_db = 8;
  int n_points = 200;
  NoiseSpec noise;
};

int run_simulate(const SimulateOpts& o, const ConfigCli& cc) {
  const PipelineConfig cfg = cc.resolve(std::nullopt);
  const fs::path dir = o.out_dir;
  fs::create_directories(dir);

  std::mt19937_64 scene_rng(mix_seed(cfg.seed, "scene"));
  const ScenePreset preset =
      o.layout == "collinear" ? ScenePreset::collinear : ScenePreset::general;
  const SyntheticScene scene = generate_scene(o.n_points, o.n_db, preset, scene_rng);

  std::vector<std::pair<std::string, Pose>> db_poses;
  for (size_t i = 0; i < scene.db_poses.size(); ++i)
    db_poses.emplace_back(scene.db_ids[i], scene.db_poses[i]);
  write_poses_file(dir / "poses.txt", db_poses);
  write_poses_file(dir / "query_poses.txt", {{scene.query_id, scene.query_pose}});

  IntrinsicsTable table;
  table.shared = scene.intrinsics;
  write_intrinsics_file(dir / "intrinsics.txt", table);

  const Vec3 query_center = camera_center(scene.query_pose);
  std::vector<std::pair<double, std::string>> by_distance;
  for (const auto& [id, pose] : db_poses)
    by_distance.emplace_back((camera_center(pose) - query_center).norm(), id);
  std::sort(by_distance.begin(), by_distance.end());
  std::map<std::string, std::vector<std::string>> rankings;
  for (const auto& [dist, id] : by_distance) rankings[scene.query_id].push_back(id);
  write_rankings_file(dir / "rankings.txt", rankings);

  NoiseSpec noise = o.noise;
  noise.seed = cfg.seed;
  std::mt19937_64 pair_rng(mix_seed(cfg.seed, "pairs"));
  const SynthPairs sp = synth_pairs(scene, noise, pair_rng);
  std::map<PairKey, Mat3> essentials;
  for (const ImagePair& pair : sp.pairs)
    essentials.emplace(PairKey{scene.query_id, pair.db_id}, pair.essential);
  write_essentials_file(dir / "essentials.txt", essentials, {config_comment(cfg)});

  std::map<PairKey, std::vector<MatchRow>> matches;
  for (size_t i = 0; i < scene.db_ids.size(); ++i) {
    std::mt19937_64 match_rng(mix_seed(cfg.seed, "matches:" + scene.db_ids[i]));
    const SynthMatches sm = synth_correspondences(scene, static_cast<int>(i), noise, match_rng);
    auto& rows = matches[{scene.query_id, scene.db_ids[i]}];
    for (const Correspondence& c : sm.correspondences)
      rows.push_back(MatchRow{c.pixel_query.x(), c.pixel_query.y(), c.pixel_db.x(), c.pixel_db.y()});
  }
  write_matches_file(dir / "matches.txt", matches);

  std::cout << "wrote " << o.layout << " scene: " << scene.db_ids.size() << " db images, "
            << scene.world_points.size() << " points -> " << dir.string() << '\n';
  return 0;
}

struct EstimateOpts {
  std::string data_dir;
  std::string out_file;
};

const CameraIntrinsics& intrinsics_or_throw(const SceneDataset& ds, const std::string& id) {
  const CameraIntrinsics* k = ds.intrinsics_for(id);
  if (!k) throw FormatError("no intrinsics for image '" + id + "'");
  return *k;
}

Mat3 oriented_estimate(const std::vector<Correspondence>& corrs, const SolverConfig& sc,
                       std::mt19937_64& rng) {
  const RansacEstimate est = estimate_essential_ransac(corrs, sc, rng);
  std::vector<Correspondence> support;
  support.reserve(est.inliers.size());
  for (int i : est.inliers) support.push_back(corrs[i]);
  return orient_essential(est.essential, support);
}

std::vector<Correspondence> correspondences_for(const SceneDataset& ds, const PairKey& key,
                                                const std::vector<MatchRow>& rows) {
  const CameraIntrinsics& k_query = intrinsics_or_throw(ds, key.first);
  const CameraIntrinsics& k_db = intrinsics_or_throw(ds, key.second);
  std::vector<Correspondence> corrs;
  corrs.reserve(rows.size());
  for (const MatchRow& r : rows)
    corrs.push_back(
        make_correspondence(Vec2(r[2], r[3]), Vec2(r[0], r[1]), k_db, k_query));
  return corrs;
}

int run_estimate(const EstimateOpts& o, const ConfigCli& cc) {
  const SceneDataset ds = parse_dataset(o.data_dir);
  if (ds.matches.empty()) throw ParseError("dataset '" + o.data_dir + "' has no matches file");
  const PipelineConfig cfg = cc.resolve(Method::sift);

  std::map<PairKey, Mat3> essentials;
  int skipped = 0;
  for (const auto& [key, rows] : ds.matches) {
    const std::vector<Correspondence> corrs = correspondences_for(ds, key, rows);
    SolverConfig sc =
        solver_config(cfg, intrinsics_or_throw(ds, key.second), intrinsics_or_throw(ds, key.first));
    sc.seed = mix_seed(cfg.seed, pair_tag(key.first, key.second));
    std::mt19937_64 rng(sc.seed);
    try {
      essentials.emplace(key, oriented_estimate(corrs, sc, rng));
    } catch (const Error& e) {
      ++skipped;
      std::cerr << "warning: skipping pair " << key.first << " / " << key.second << ": "
                << e.what() << '\n';
    }
  }

  const fs::path out =
      o.out_file.empty() ? fs::path(o.data_dir) / "essentials.txt" : fs::path(o.out_file);
  write_essentials_file(out, essentials, {config_comment(cfg)});
  std::cout << "estimated " << essentials.size() << " pairs";
  if (skipped > 0) std::cout << " (" << skipped << " skipped)";
  std::cout << " -> " << out.string() << '\n';
  return 0;
}

struct LocalizeOpts {
  std::string data_dir;
  std::string out_file;
};

// Query list and per-query candidate rankings, from the first available of:
// rankings file, descriptor retrieval, pair-file ids.
std::vector<std::pair<std::string, std::vector<std::string>>> query_rankings(
    const SceneDataset& ds) {
  std::vector<std::pair<std::string, std::vector<std::string>>> out;
  if (!ds.rankings.empty()) {
    for (const auto& [query, ids] : ds.rankings) out.emplace_back(query, ids);
    return out;
  }
  if (!ds.descriptors.empty()) {
    std::vector<GlobalDescriptor> db;
    for (const GlobalDescriptor& d : ds.descriptors)
      if (ds.poses.count(d.id) > 0) db.push_back(d);
    for (const GlobalDescriptor& d : ds.descriptors)
      if (ds.poses.count(d.id) == 0)
        out.emplace_back(d.id, rank_database(d, db, static_cast<int>(db.size())));
    return out;
  }
  std::map<std::string, std::vector<std::string>> from_pairs;
  for (const auto& [key, m] : ds.essentials) from_pairs[key.first].push_back(key.second);
  for (const auto& [key, rows] : ds.matches) {
    auto& ids = from_pairs[key.first];
    if (std::find(ids.begin(), ids.end(), key.second) == ids.end()) ids.push_back(key.second);
  }
  for (auto& [query, ids] : from_pairs) {
    std::sort(ids.begin(), ids.end());
    out.emplace_back(query, ids);
  }
  return out;
}

int run_localize(const LocalizeOpts& o, const ConfigCli& cc) {
  const SceneDataset ds = parse_dataset(o.data_dir);
  const Method inferred = !ds.essentials.empty() ? Method::learned : Method::sift;
  const PipelineConfig cfg = cc.resolve(inferred);
  const bool learned = cfg.method == Method::learned;
  if (learned && ds.essentials.empty())
    throw ParseError("dataset '" + o.data_dir + "' has no essentials file");
  if (!learned && ds.matches.empty())
    throw ParseError("dataset '" + o.data_dir + "' has no matches file");
  const LocalizerConfig lc = localizer_config(cfg);

  std::vector<QueryResult> results;
  for (auto& [query, ranked] : query_rankings(ds)) {
    QueryResult row;
    row.id = query;
    // Only database images with pair data for this query are candidates.
    std::vector<std::string> usable;
    for (const std::string& id : ranked) {
      const PairKey key{query, id};
      if (learned ? ds.essentials.count(key) > 0 : ds.matches.count(key) > 0)
        usable.push_back(id);
    }
    try {
      std::vector<ImagePair> pairs;
      for (const SelectedPair& sel : select_pairs(usable, ds.poses, lc)) {
        const PairKey key{query, sel.db_id};
        ImagePair pair;
        pair.db_id = sel.db_id;
        pair.db_pose = sel.db_pose;
        if (learned) {
          pair.essential = ds.essentials.at(key);
          pair.source = PairSource::ingested;
        } else {
          const std::vector<Correspondence> corrs =
              correspondences_for(ds, key, ds.matches.at(key));
          SolverConfig sc = solver_config(cfg, intrinsics_or_throw(ds, sel.db_id),
                                          intrinsics_or_throw(ds, query));
          sc.seed = mix_seed(cfg.seed, pair_tag(query, sel.db_id));
          std::mt19937_64 pair_rng(sc.seed);
          try {
            pair.essential = oriented_estimate(corrs, sc, pair_rng);
          } catch (const Error& e) {
            std::cerr << "warning: " << query << " / " << sel.db_id
                      << ": essential estimation failed: " << e.what() << '\n';
            continue;
          }
          pair.source = PairSource::solver;
        }
        pairs.push_back(std::move(pair));
      }
      if (pairs.size() < 2) throw InsufficientPairsError("fewer than two usable pairs");
      std::mt19937_64 rng(mix_seed(cfg.seed, query));
      const LocalizationResult loc = localize_ransac(pairs, lc, rng);
      row.ok = true;
      row.pose = loc.pose;
      row.inliers = static_cast<int>(loc.inlier_pairs.size());
      row.iterations = loc.iterations_run;
      row.mean_inlier_angle = loc.mean_inlier_angle;
    } catch (const InsufficientPairsError&) {
      row.message = "insufficient_pairs";
    } catch (const LocalizationFailedError&) {
      row.message = "localization_failed";
    } catch (const Error& e) {
      row.message = "error";
      std::cerr << "warning: query " << query << ": " << e.what() << '\n';
    }
    results.push_back(std::move(row));
  }

  const fs::path out =
      o.out_file.empty() ? fs::path(o.data_dir) / "results.txt" : fs::path(o.out_file);
  write_results_file(out, results, {"scene " + ds.name, config_comment(cfg)});
  int ok = 0;
  for (const QueryResult& r : results) ok += r.ok ? 1 : 0;
  std::cout << "localized " << ok << "/" << results.size() << " queries -> " << out.string()
            << '\n';
  return 0;
}

struct EvaluateOpts {
  std::vector<std::string> data_dirs;
  std::vector<std::string> results_files;
  std::string csv_file;
};

int run_evaluate(const EvaluateOpts& o) {
  if (!o.results_files.empty() && o.results_files.size() != o.data_dirs.size())
    throw ParseError("--results count must match --data count");

  std::vector<SceneEval> evals;
  for (size_t i = 0; i < o.data_dirs.size(); ++i) {
    const fs::path dir = o.data_dirs[i];
    const fs::path results_file =
        o.results_files.empty() ? dir / "results.txt" : fs::path(o.results_files[i]);
    std::unordered_map<std::string, Pose> truth;
    for (auto& [id, pose] : parse_poses_file(dir / "query_poses.txt")) truth.emplace(id, pose);
    evals.push_back(evaluate_scene(dir.filename().string(), parse_results_file(results_file), truth));
  }
  const EvalSummary summary = summarize(evals);

  const auto row = [](const std::string& name, int queries, double pos, double rot, double fail) {
    std::cout << "  " << std::left << std::setw(20) << name << std::right << std::setw(8)
              << (queries >= 0 ? std::to_string(queries) : std::string("-")) << std::setw(14)
              << std::fixed << std::setprecision(4) << pos << std::setw(16) << rot << std::setw(11)
              << std::setprecision(1) << fail * 100.0 << "%" << std::defaultfloat
              << std::setprecision(6) << '\n';
  };
  std::cout << "  " << std::left << std::setw(20) << "scene" << std::right << std::setw(8)
            << "queries" << std::setw(14) << "median_pos_m" << std::setw(16) << "median_rot_deg"
            << std::setw(12) << "failures\n";
  for (const SceneEval& s : summary.per_scene)
    row(s.name, s.query_count, s.median_position, s.median_rotation, s.failure_rate);
  if (summary.per_scene.size() > 1)
    row("average", -1, summary.avg_median_position, summary.avg_median_rotation,
        summary.avg_failure_rate);
  for (const Baseline& b : kReportBaselines)
    std::cout << "  reference: " << b.method << " on " << b.dataset << ": "
              << format_double(b.position_m) << " m / " << format_double(b.rotation_deg)
              << " deg\n";

  if (!o.csv_file.empty()) {
    std::ofstream csv(o.csv_file);
    if (!csv) throw ParseError("cannot write '" + o.csv_file + "'");
    csv << "scene,queries,median_position_m,median_rotation_deg,failure_rate\n";
    for (const SceneEval& s : summary.per_scene)
      csv << s.name << ',' << s.query_count << ',' << format_double(s.median_position) << ','
          << format_double(s.median_rotation) << ',' << format_double(s.failure_rate) << '\n';
    csv << "average,," << format_double(summary.avg_median_position) << ','
        << format_double(summary.avg_median_rotation) << ','
        << format_double(summary.avg_failure_rate) << '\n';
    std::cout << "wrote " << o.csv_file << '\n';
  }
  return 0;
}

struct BenchOpts {
  std::string out_file = "bench.csv";
  std::string layout = "general";
  int trials = 20;
  int n_db = 8;
  int n_points = 200;
  std::vector<double> direction_noise = {0.0, 1.0, 2.0, 5.0};
  std::vector<double> rotation_noise = {0.0, 0.5, 1.0};
  std::vector<double> outlier_pairs = {0.0, 0.2, 0.4};
};

int run_bench(const BenchOpts& o, const ConfigCli& cc) {
  const PipelineConfig cfg = cc.resolve(Method::learned);
  const LocalizerConfig lc = localizer_config(cfg);
  const ScenePreset preset =
      o.layout == "collinear" ? ScenePreset::collinear : ScenePreset::general;

  std::ofstream csv(o.out_file);
  if (!csv) throw ParseError("cannot write '" + o.out_file + "'");
  csv << "direction_noise_deg,rotation_noise_deg,outlier_pair_fraction,trial,localized,"
         "position_error_m,rotation_error_deg,inliers,iterations\n";

  for (double dn : o.direction_noise)
    for (double rn : o.rotation_noise)
      for (double of : o.outlier_pairs) {
        std::vector<double> pos_errors;
        int failures = 0;
        for (int trial = 0; trial < o.trials; ++trial) {
          const std::string tag = "bench:" + format_double(dn) + ":" + format_double(rn) + ":" +
                                  format_double(of) + ":" + std::to_string(trial);
          std::mt19937_64 rng(mix_seed(cfg.seed, tag));
          const SyntheticScene scene = generate_scene(o.n_points, o.n_db, preset, rng);
          NoiseSpec noise;
          noise.direction_noise = dn;
          noise.rotation_noise = rn;
          noise.outlier_pair_fraction = of;
          const SynthPairs sp = synth_pairs(scene, noise, rng);
          csv << format_double(dn) << ',' << format_double(rn) << ',' << format_double(of) << ','
              << trial << ',';
          try {
            const LocalizationResult loc = localize_ransac(sp.pairs, lc, rng);
            const double pos = (camera_center(loc.pose) - camera_center(scene.query_pose)).norm();
            const double rot = angular_distance_deg(loc.pose.rotation, scene.query_pose.rotation);
            pos_errors.push_back(pos);
            csv << "1," << format_double(pos) << ',' << format_double(rot) << ','
                << loc.inlier_pairs.size() << ',' << loc.iterations_run << '\n';
          } catch (const Error&) {
            ++failures;
            csv << "0,inf,inf,0,0\n";
          }
        }
        std::cout << "  dir=" << dn << " rot=" << rn << " outliers=" << of << ": ";
        if (pos_errors.empty())
          std::cout << "all " << o.trials << " trials failed\n";
        else
          std::cout << "median_pos=" << std::setprecision(6) << median(pos_errors) << " m, "
                    << failures << "/" << o.trials << " failed\n";
      }
  std::cout << "wrote " << o.out_file << '\n';
  return 0;
}

struct ImportOpts {
  std::string format;
  std::string in_path;
  std::string out_file;
  std::string intrinsics_out;
};

int run_import(const ImportOpts& o) {
  std::vector<std::pair<std::string, Pose>> poses;
  if (o.format == "7scenes") {
    poses = import_sevenscenes_poses(o.in_path);
    if (!o.intrinsics_out.empty()) {
      // Published Kinect calibration shared by all 7-Scenes frames.
      IntrinsicsTable table;
      table.shared = CameraIntrinsics{585.0, 585.0, 320.0, 240.0};
      write_intrinsics_file(o.intrinsics_out, table);
    }
  } else {
    poses = import_cambridge_poses(o.in_path);
    if (!o.intrinsics_out.empty())
      throw ParseError("no shared calibration is published for cambridge; write intrinsics.txt "
                       "from your own calibration");
  }
  write_poses_file(o.out_file, poses);
  std::cout << "imported " << poses.size() << " poses -> " << o.out_file << '\n';
  return 0;
}

int run_impl(const std::function<void(CLI::App&)>& do_parse) {
  CLI::App app{"Visual localization from pairwise epipolar geometry against a posed image database"};
  app.name("epiloc");
  app.require_subcommand(1);

  ConfigCli cc;
  cc.attach(app);

  SimulateOpts so;
  CLI::App* sim = app.add_subcommand("simulate", "Write a synthetic scene dataset");
  sim->fallthrough();
  sim->add_option("--out", so.out_dir, "Output dataset directory")->required();
  sim->add_option("--layout", so.layout, "Camera layout: general|collinear")
      ->check(CLI::IsMember({"general", "collinear"}));
  sim->add_option("--db", so.n_db, "Database image count");
  sim->add_option("--points", so.n_points, "World point count");
  sim->add_option("--pixel-sigma", so.noise.pixel_sigma, "Pixel noise sigma");
  sim->add_option("--outlier-matches", so.noise.outlier_match_fraction,
                  "Fraction of matches replaced by random ones");
  sim->add_option("--outlier-pairs", so.noise.outlier_pair_fraction,
                  "Fraction of pair essentials replaced by random ones");
  sim->add_option("--rotation-noise", so.noise.rotation_noise, "Pair rotation noise, degrees");
  sim->add_option("--direction-noise", so.noise.direction_noise,
                  "Pair translation direction noise, degrees");

  EstimateOpts eo;
  CLI::App* est = app.add_subcommand("estimate", "Estimate essential matrices from matches");
  est->fallthrough();
  est->add_option("--data", eo.data_dir, "Dataset directory")->required();
  est->add_option("--out", eo.out_file, "Output essentials file (default <data>/essentials.txt)");

  LocalizeOpts lo;
  CLI::App* loc = app.add_subcommand("localize", "Localize every query against the database");
  loc->fallthrough();
  loc->add_option("--data", lo.data_dir, "Dataset directory")->required();
  loc->add_option("--out", lo.out_file, "Output results file (default <data>/results.txt)");

  EvaluateOpts vo;
  CLI::App* ev = app.add_subcommand("evaluate", "Median errors of result files against ground truth");
  ev->fallthrough();
  ev->add_option("--data", vo.data_dirs, "Dataset directories (repeatable)")->required();
  ev->add_option("--results", vo.results_files,
                 "Result files, one per --data (default <data>/results.txt)");
  ev->add_option("--csv", vo.csv_file, "Also write the table as CSV");

  BenchOpts bo;
  CLI::App* bench = app.add_subcommand("bench", "Noise robustness sweep on synthetic scenes");
  bench->fallthrough();
  bench->add_option("--out", bo.out_file, "Output CSV file");
  bench->add_option("--layout", bo.layout, "Camera layout: general|collinear")
      ->check(CLI::IsMember({"general", "collinear"}));
  bench->add_option("--trials", bo.trials, "Trials per noise combination");
  bench->add_option("--db", bo.n_db, "Database image count");
  bench->add_option("--points", bo.n_points, "World point count");
  bench->add_option("--direction-noise", bo.direction_noise, "Direction noise grid, degrees");
  bench->add_option("--rotation-noise", bo.rotation_noise, "Rotation noise grid, degrees");
  bench->add_option("--outlier-pairs", bo.outlier_pairs, "Outlier pair fraction grid");

  ImportOpts io;
  CLI::App* imp = app.add_subcommand("import", "Convert a published dataset's poses");
  imp->fallthrough();
  imp->add_option("--format", io.format, "7scenes|cambridge")
      ->required()
      ->check(CLI::IsMember({"7scenes", "cambridge"}));
  imp->add_option("--in", io.in_path, "Scene directory (7scenes) or dataset file (cambridge)")
      ->required();
  imp->add_option("--out", io.out_file, "Output poses file")->required();
  imp->add_option("--intrinsics-out", io.intrinsics_out, "Also write shared intrinsics");

  try {
    do_parse(app);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (app.got_subcommand(sim)) return run_simulate(so, cc);
    if (app.got_subcommand(est)) return run_estimate(eo, cc);
    if (app.got_subcommand(loc)) return run_localize(lo, cc);
    if (app.got_subcommand(ev)) return run_evaluate(vo);
    if (app.got_subcommand(bench)) return run_bench(bo, cc);
    if (app.got_subcommand(imp)) return run_import(io);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  return run_impl([&](CLI::App& app) { app.parse(argc, argv); });
}

int run(const std::vector<std::string>& args) {
  return run_impl([&](CLI::App& app) {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  });
}

}  // namespace epiloc::cli

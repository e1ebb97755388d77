#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "hograph/train.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hograph;

namespace {

json load_config_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  return json::parse(in);
}

// Applies config-file values as defaults; command line flags parsed
// afterwards override them. Unknown keys are rejected by name.
template <typename T>
void take(json& j, const char* key, T& into) {
  if (j.contains(key)) {
    into = j.at(key).get<T>();
    j.erase(key);
  }
}

void reject_unknown(const json& j, const std::string& what) {
  if (!j.empty())
    throw std::runtime_error("unknown " + what + " config key '" +
                             j.begin().key() + "'");
}

std::string find_config_arg(int argc, char** argv) {
  for (int i = 1; i < argc - 1; ++i)
    if (std::string(argv[i]) == "--config") return argv[i + 1];
  return {};
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::runtime_error(message);
}

struct EvalArtifacts {
  std::vector<SceneMetrics> initial, refined;
};

EvalArtifacts evaluate_scenes(const std::vector<GraspScene>& scenes,
                              const ModelParams& params,
                              const GraphOptions& options, int threads,
                              const std::string& out_dir, bool export_meshes,
                              bool dump_graphs) {
  EvalArtifacts art;
  art.initial.resize(scenes.size());
  art.refined.resize(scenes.size());
  std::vector<RefineResult> results(scenes.size());

  std::atomic<size_t> next{0};
  auto work = [&] {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= scenes.size()) break;
      const GraspScene& scene = scenes[i];
      FinalGraphs graphs = build_final_graphs(
          scene.hand_init, scene.obj_init, scene.contact_indices,
          params.encoder_hand, params.encoder_obj, params.attention, options);
      results[i] = refine(scene.hand_init, scene.obj_init, graphs, params);
      art.initial[i] = evaluate_scene(scene.hand_init, scene.obj_init, scene);
      art.refined[i] = evaluate_scene(results[i].refined_hand,
                                      results[i].refined_obj, scene);
      if (dump_graphs) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "scene_%04zu", i);
        fs::create_directories(fs::path(out_dir) / buf);
        std::ofstream g(fs::path(out_dir) / buf / "graphs.json");
        g << graphs_to_json(graphs);
      }
    }
  };
  int workers = std::max(1, std::min<int>(threads, int(scenes.size())));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  if (export_meshes) {
    for (size_t i = 0; i < scenes.size(); ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "scene_%04zu", i);
      fs::path dir = fs::path(out_dir) / buf;
      fs::create_directories(dir);
      save_mesh(results[i].refined_hand, (dir / "refined_hand.obj").string());
      save_mesh(results[i].refined_obj, (dir / "refined_obj.obj").string());
    }
  }
  return art;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int cmd_synth(int argc, char** argv) {
  CLI::App app{"generate synthetic grasp scenes"};
  app.allow_extras(false);
  std::string out, config;
  int count = 10;
  uint64_t seed = 1;
  PerturbNoise noise;
  int resolution = 162;

  json cfg;
  std::string cfg_path = find_config_arg(argc, argv);
  if (!cfg_path.empty()) {
    cfg = load_config_json(cfg_path);
    take(cfg, "count", count);
    take(cfg, "seed", seed);
    take(cfg, "vertex_sigma", noise.vertex_sigma);
    take(cfg, "translation", noise.translation);
    take(cfg, "rotation_deg", noise.rotation_deg);
    take(cfg, "obj_resolution", resolution);
    reject_unknown(cfg, "synth");
  }

  app.add_option("--out", out, "output directory")->required();
  app.add_option("--count", count, "number of scenes");
  app.add_option("--seed", seed, "base seed");
  app.add_option("--vertex-sigma", noise.vertex_sigma, "vertex noise, mm");
  app.add_option("--translation", noise.translation, "translation offset, mm");
  app.add_option("--rotation", noise.rotation_deg, "rotation angle, degrees");
  app.add_option("--obj-resolution", resolution, "object vertex budget");
  app.add_option("--config", config, "JSON config file");
  CLI11_PARSE(app, argc, argv);

  require(count >= 1, "count must be ≥ 1");
  require(noise.vertex_sigma >= 0.0, "vertex-sigma must be ≥ 0");
  require(noise.translation >= 0.0, "translation must be ≥ 0");
  require(noise.rotation_deg >= 0.0, "rotation must be ≥ 0");
  require(resolution >= 12, "obj-resolution must be ≥ 12");

  auto scenes = synth_scenes(count, noise, resolution, seed);
  save_scene_set(scenes, noise, seed, out);
  std::printf("synth: wrote %d scenes to %s (seed %llu)\n", count, out.c_str(),
              (unsigned long long)seed);
  return 0;
}

int cmd_train(int argc, char** argv) {
  CLI::App app{"train the refinement model"};
  std::string scenes_dir, out, config;
  TrainConfig tc;
  bool no_ec = false, no_ea = false;

  json cfg;
  std::string cfg_path = find_config_arg(argc, argv);
  if (!cfg_path.empty()) {
    cfg = load_config_json(cfg_path);
    take(cfg, "seed", tc.seed);
    take(cfg, "epochs", tc.epochs);
    take(cfg, "lr", tc.lr);
    take(cfg, "lr_drop_epoch", tc.lr_drop_epoch);
    take(cfg, "gamma", tc.gamma);
    take(cfg, "feat_dim", tc.descriptor_dim);
    take(cfg, "hidden", tc.hidden);
    take(cfg, "att_dim", tc.attention_dim);
    take(cfg, "threads", tc.threads);
    take(cfg, "chamfer_samples", tc.chamfer_samples);
    take(cfg, "no_ec", no_ec);
    take(cfg, "no_ea", no_ea);
    reject_unknown(cfg, "train");
  }

  app.add_option("--scenes", scenes_dir, "scene set directory")->required();
  app.add_option("--out", out, "output directory")->required();
  app.add_option("--seed", tc.seed, "init seed");
  app.add_option("--epochs", tc.epochs, "training epochs");
  app.add_option("--lr", tc.lr, "learning rate");
  app.add_option("--lr-drop-epoch", tc.lr_drop_epoch,
                 "epoch from which lr is multiplied by 0.1 (0 = never)");
  app.add_option("--gamma", tc.gamma, "attention edge threshold");
  app.add_option("--feat-dim", tc.descriptor_dim, "descriptor width");
  app.add_option("--hidden", tc.hidden, "block hidden width");
  app.add_option("--att-dim", tc.attention_dim, "attention projection width");
  app.add_option("--threads", tc.threads, "worker threads");
  app.add_option("--chamfer-samples", tc.chamfer_samples,
                 "object surface samples for the chamfer term");
  app.add_flag("--no-ec", no_ec, "drop common relation edges");
  app.add_flag("--no-ea", no_ea, "drop attention edges");
  app.add_option("--config", config, "JSON config file");
  CLI11_PARSE(app, argc, argv);

  require(tc.epochs >= 1, "epochs must be ≥ 1");
  require(tc.lr > 0.0, "lr must be > 0");
  require(tc.lr_drop_epoch >= 0, "lr-drop-epoch must be ≥ 0");
  require(tc.gamma > 0.0 && tc.gamma < 1.0, "gamma must be in (0, 1)");
  require(tc.descriptor_dim >= 1, "feat-dim must be ≥ 1");
  require(tc.hidden >= 1, "hidden must be ≥ 1");
  require(tc.attention_dim >= 1, "att-dim must be ≥ 1");
  require(tc.threads >= 1, "threads must be ≥ 1");
  require(tc.chamfer_samples >= 1, "chamfer-samples must be ≥ 1");

  tc.use_common = !no_ec;
  tc.use_attention = !no_ea;

  auto scenes = load_scene_set(scenes_dir);
  std::printf("train: %zu scenes, %d epochs, lr %g, seed %llu\n",
              scenes.size(), tc.epochs, tc.lr, (unsigned long long)tc.seed);

  TrainResult result = train(scenes, tc);

  fs::create_directories(out);
  save_checkpoint(result.params, (fs::path(out) / "checkpoint.json").string());
  write_loss_csv(result.curve, (fs::path(out) / "loss.csv").string());

  GraphOptions options{tc.gamma, tc.use_common, tc.use_attention};
  EvalArtifacts art = evaluate_scenes(scenes, result.params, options,
                                      tc.threads, out, false, false);
  write_text((fs::path(out) / "metrics.json").string(),
             metrics_report_json(art.initial, art.refined));

  std::printf("train: final loss %.6f (hand %.6f, obj %.6f)\n",
              result.curve.back().total, result.curve.back().hand,
              result.curve.back().obj);
  return 0;
}

int cmd_eval(int argc, char** argv) {
  CLI::App app{"evaluate a checkpoint on a scene set"};
  std::string scenes_dir, checkpoint, out, config;
  double gamma = 0.01;
  bool no_ec = false, no_ea = false, export_meshes = false,
       dump_graphs = false;
  int threads = 1;

  json cfg;
  std::string cfg_path = find_config_arg(argc, argv);
  if (!cfg_path.empty()) {
    cfg = load_config_json(cfg_path);
    take(cfg, "gamma", gamma);
    take(cfg, "threads", threads);
    take(cfg, "no_ec", no_ec);
    take(cfg, "no_ea", no_ea);
    reject_unknown(cfg, "eval");
  }

  app.add_option("--scenes", scenes_dir, "scene set directory")->required();
  app.add_option("--checkpoint", checkpoint, "checkpoint file")->required();
  app.add_option("--out", out, "output directory")->required();
  app.add_option("--gamma", gamma, "attention edge threshold");
  app.add_option("--threads", threads, "worker threads");
  app.add_flag("--no-ec", no_ec, "drop common relation edges");
  app.add_flag("--no-ea", no_ea, "drop attention edges");
  app.add_flag("--export-meshes", export_meshes, "write refined meshes");
  app.add_flag("--dump-graphs", dump_graphs, "write per-scene graph JSON");
  app.add_option("--config", config, "JSON config file");
  CLI11_PARSE(app, argc, argv);

  require(gamma > 0.0 && gamma < 1.0, "gamma must be in (0, 1)");
  require(threads >= 1, "threads must be ≥ 1");

  auto scenes = load_scene_set(scenes_dir);
  ModelParams params = load_checkpoint(checkpoint);
  GraphOptions options{gamma, !no_ec, !no_ea};

  fs::create_directories(out);
  EvalArtifacts art = evaluate_scenes(scenes, params, options, threads, out,
                                      export_meshes, dump_graphs);
  write_text((fs::path(out) / "metrics.json").string(),
             metrics_report_json(art.initial, art.refined));

  SceneMetrics mean = mean_metrics(art.refined);
  std::printf("eval: %zu scenes, mean hand mesh error %.2f mm, "
              "object error %.2f mm, max pen %.2f mm\n",
              scenes.size(), mean.hand_mesh_error_mm, mean.object_error_mm,
              mean.max_pen_mm);
  return 0;
}

int cmd_gradcheck(int argc, char** argv) {
  CLI::App app{"verify analytic gradients against finite differences"};
  uint64_t seed = 1;
  int feat = 8, hidden = 8, att = 4, directions = 20;
  bool corrupt = false;
  app.add_option("--seed", seed, "seed");
  app.add_option("--feat-dim", feat, "descriptor width");
  app.add_option("--hidden", hidden, "block hidden width");
  app.add_option("--att-dim", att, "attention projection width");
  app.add_option("--directions", directions, "random directions to test");
  app.add_flag("--corrupt", corrupt,
               "corrupt the backward pass (harness self-test)");
  CLI11_PARSE(app, argc, argv);

  require(feat >= 1, "feat-dim must be ≥ 1");
  require(hidden >= 1, "hidden must be ≥ 1");
  require(att >= 1, "att-dim must be ≥ 1");
  require(directions >= 1, "directions must be ≥ 1");

  GradCheckResult r = gradcheck(seed, feat, hidden, att, directions, corrupt);
  std::printf("gradcheck: max_rel_error %.3g over %d directions: %s\n",
              r.max_rel_error, r.directions, r.pass ? "PASS" : "FAIL");
  return r.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr,
                 "usage: hograph <synth|train|eval|gradcheck> [options]\n");
    return 2;
  }
  std::string cmd = argv[1];
  try {
    if (cmd == "synth") return cmd_synth(argc - 1, argv + 1);
    if (cmd == "train") return cmd_train(argc - 1, argv + 1);
    if (cmd == "eval") return cmd_eval(argc - 1, argv + 1);
    if (cmd == "gradcheck") return cmd_gradcheck(argc - 1, argv + 1);
    std::fprintf(stderr, "unknown command '%s'\n", cmd.c_str());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

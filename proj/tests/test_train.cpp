#include <doctest.h>

#include <fstream>
#include <json.hpp>
#include <vector>

#include "hograph/train.hpp"
#include "helpers.hpp"

using namespace hograph;
using namespace hograph::test;

namespace {

std::vector<GraspScene> small_scenes(int count, uint64_t seed = 31) {
  PerturbNoise noise{2.0, 6.0, 0.0};
  return synth_scenes(count, noise, 42, seed);
}

TrainConfig small_config() {
  TrainConfig cfg;
  cfg.descriptor_dim = 8;
  cfg.hidden = 8;
  cfg.attention_dim = 4;
  cfg.epochs = 3;
  cfg.chamfer_samples = 120;
  return cfg;
}

}  // namespace

TEST_CASE("parameter vector flattens and unflattens losslessly") {
  ModelParams params = init_params(8, 8, 4, 11);
  Vec theta = flatten_params(params);
  CHECK(theta.size() > 1000);

  ModelParams other = init_params(8, 8, 4, 12);
  unflatten_params(theta, other);
  CHECK((flatten_params(other) - theta).cwiseAbs().maxCoeff() == 0.0);
  auto a = param_entries(params);
  auto b = param_entries(other);
  REQUIRE(a.size() == b.size());
  for (size_t t = 0; t < a.size(); ++t) {
    CHECK(a[t].first == b[t].first);
    CHECK((*a[t].second - *b[t].second).cwiseAbs().maxCoeff() == 0.0);
  }

  CHECK_THROWS_AS(unflatten_params(theta.head(10), other),
                  std::invalid_argument);
  Vec longer(theta.size() + 1);
  longer << theta, 0.0;
  CHECK_THROWS_AS(unflatten_params(longer, other), std::invalid_argument);
}

TEST_CASE("checkpoints round trip byte for byte") {
  TempDir tmp("ckpt");
  ModelParams params = init_params(8, 8, 4, 13);
  std::string first = tmp.str("model.json");
  std::string second = tmp.str("model2.json");
  save_checkpoint(params, first);

  ModelParams loaded = load_checkpoint(first);
  CHECK(loaded.descriptor_dim == 8);
  CHECK(loaded.hidden == 8);
  CHECK(loaded.attention_dim == 4);
  CHECK((flatten_params(loaded) - flatten_params(params))
            .cwiseAbs()
            .maxCoeff() == 0.0);

  save_checkpoint(loaded, second);
  CHECK(slurp(first) == slurp(second));
}

TEST_CASE("checkpoint loading rejects malformed files by name") {
  TempDir tmp("ckpt_bad");
  CHECK_THROWS_AS(load_checkpoint(tmp.str("absent.json")),
                  std::runtime_error);

  std::string not_ckpt = tmp.str("other.json");
  std::ofstream(not_ckpt) << "{\"format\": \"something-else\"}";
  CHECK_THROWS_WITH_AS(load_checkpoint(not_ckpt),
                       doctest::Contains("not a checkpoint"),
                       std::runtime_error);

  ModelParams params = init_params(8, 8, 4, 14);
  std::string path = tmp.str("model.json");
  save_checkpoint(params, path);
  auto j = nlohmann::json::parse(slurp(path));

  auto mutated = j;
  mutated["tensors"].erase("head.hand");
  std::string missing = tmp.str("missing.json");
  std::ofstream(missing) << mutated.dump();
  CHECK_THROWS_WITH_AS(load_checkpoint(missing),
                       doctest::Contains("head.hand"), std::runtime_error);

  auto wrong = j;
  wrong["tensors"]["block1.hand.bias"]["cols"] = 9;
  std::string bad_shape = tmp.str("bad_shape.json");
  std::ofstream(bad_shape) << wrong.dump();
  CHECK_THROWS_WITH_AS(load_checkpoint(bad_shape),
                       doctest::Contains("block1.hand.bias"),
                       std::runtime_error);
}

TEST_CASE("batch gradients are identical for any thread count") {
  auto scenes = small_scenes(3);
  ModelParams params = init_params(8, 8, 4, 15);
  GraphOptions options;

  std::vector<Mat> g1, g2, g4;
  EpochLoss l1 = batch_gradient(scenes, params, options, 120, 1, g1);
  EpochLoss l2 = batch_gradient(scenes, params, options, 120, 2, g2);
  EpochLoss l4 = batch_gradient(scenes, params, options, 120, 4, g4);

  CHECK(l1.total == l2.total);
  CHECK(l1.total == l4.total);
  CHECK(l1.hand == l4.hand);
  CHECK(l1.obj == l4.obj);
  REQUIRE(g1.size() == g2.size());
  REQUIRE(g1.size() == g4.size());
  for (size_t p = 0; p < g1.size(); ++p) {
    CHECK((g1[p] - g2[p]).cwiseAbs().maxCoeff() == 0.0);
    CHECK((g1[p] - g4[p]).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK(l1.total == doctest::Approx(l1.hand + l1.obj).epsilon(1e-12));
}

TEST_CASE("batch loss means the per-scene objectives") {
  auto scenes = small_scenes(2, 32);
  ModelParams params = init_params(8, 8, 4, 16);
  GraphOptions options;
  std::vector<Mat> grads;
  EpochLoss batch = batch_gradient(scenes, params, options, 120, 1, grads);

  double acc = 0.0;
  for (const GraspScene& scene : scenes) {
    FinalGraphs graphs = build_final_graphs(
        scene.hand_init, scene.obj_init, scene.contact_indices,
        params.encoder_hand, params.encoder_obj, params.attention, options);
    RefineResult out = refine(scene.hand_init, scene.obj_init, graphs, params);
    acc += refine_loss(out.refined_hand.vertices, out.refined_obj.vertices,
                       scene, object_sample_pattern(scene, 120))
               .total;
  }
  CHECK(batch.total == doctest::Approx(acc / 2.0).epsilon(1e-12));
}

TEST_CASE("training runs are deterministic and update every tensor") {
  auto scenes = small_scenes(2, 33);
  TrainConfig cfg = small_config();

  TrainResult a = train(scenes, cfg);
  TrainResult b = train(scenes, cfg);
  REQUIRE(a.curve.size() == 3);
  CHECK((flatten_params(a.params) - flatten_params(b.params))
            .cwiseAbs()
            .maxCoeff() == 0.0);
  for (size_t e = 0; e < a.curve.size(); ++e) {
    CHECK(a.curve[e].total == b.curve[e].total);
    CHECK(std::isfinite(a.curve[e].total));
  }

  ModelParams fresh =
      init_params(cfg.descriptor_dim, cfg.hidden, cfg.attention_dim, cfg.seed);
  auto before = param_entries(fresh);
  auto after = param_entries(a.params);
  for (size_t t = 0; t < before.size(); ++t)
    CHECK((*before[t].second - *after[t].second).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("the learning-rate drop scales updates exactly tenfold") {
  auto scenes = small_scenes(2, 34);
  TrainConfig dropped = small_config();
  dropped.lr = 1e-3;
  dropped.lr_drop_epoch = 1;  // active from the first epoch

  TrainConfig tenth = small_config();
  tenth.lr = 1e-4;

  TrainResult a = train(scenes, dropped);
  TrainResult b = train(scenes, tenth);
  CHECK((flatten_params(a.params) - flatten_params(b.params))
            .cwiseAbs()
            .maxCoeff() == 0.0);

  // a late drop epoch changes nothing before it fires
  TrainConfig late = small_config();
  late.lr_drop_epoch = 99;
  TrainResult c = train(scenes, late);
  TrainResult d = train(scenes, small_config());
  CHECK((flatten_params(c.params) - flatten_params(d.params))
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("training aborts on a non-finite loss") {
  auto scenes = small_scenes(1, 35);
  TrainConfig cfg = small_config();
  cfg.lr = 1e30;  // first step catapults the parameters out of range
  CHECK_THROWS_WITH_AS(train(scenes, cfg), doctest::Contains("diverged"),
                       std::runtime_error);
}

TEST_CASE("loss curves serialize with full precision") {
  TempDir tmp("csv");
  std::vector<EpochLoss> curve = {{1.5, 1.0, 0.5},
                                  {0.1234567890123456789, 0.1, 0.02}};
  std::string path = tmp.str("loss.csv");
  write_loss_csv(curve, path);
  std::string text = slurp(path);
  CHECK(text.find("epoch,loss_total,loss_hand,loss_obj\n") == 0);
  CHECK(text.find("\n1,1.5,1,0.5\n") != std::string::npos);
  CHECK(text.find("0.12345678901234568") != std::string::npos);
}

TEST_CASE("analytic gradients match finite differences end to end") {
  GradCheckResult r = gradcheck(7, 8, 8, 4, 12, false);
  CHECK(r.directions == 12);
  CHECK(r.pass);
  CHECK(r.max_rel_error < 1e-4);

  GradCheckResult broken = gradcheck(7, 8, 8, 4, 12, true);
  CHECK(!broken.pass);
  CHECK(broken.max_rel_error > 1e-3);
}

TEST_CASE("a single scene can be overfit") {
  auto scenes = small_scenes(1, 36);
  TrainConfig cfg = small_config();
  cfg.epochs = 200;
  cfg.lr = 1e-3;
  TrainResult r = train(scenes, cfg);
  double first = r.curve.front().total;
  double last = r.curve.back().total;
  CHECK(last < 0.5 * first);
  // the tail of the curve is no longer bouncing above the start
  for (size_t e = r.curve.size() - 10; e < r.curve.size(); ++e)
    CHECK(r.curve[e].total < first);
}

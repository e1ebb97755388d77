#include "hograph/train.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "hograph/rng.hpp"

namespace hograph {

void adam_init(AdamState& state, const ModelParams& params) {
  state.step = 0;
  state.m.clear();
  state.v.clear();
  for (const auto& [name, mat] : param_entries(params)) {
    state.m.push_back(Mat::Zero(mat->rows(), mat->cols()));
    state.v.push_back(Mat::Zero(mat->rows(), mat->cols()));
  }
}

void adam_step(ModelParams& params, const std::vector<Mat>& grads,
               AdamState& state) {
  auto entries = param_entries(params);
  if (grads.size() != entries.size() || state.m.size() != entries.size())
    throw std::invalid_argument("adam_step: gradient list misaligned");
  ++state.step;
  double bc1 = 1.0 - std::pow(state.beta1, double(state.step));
  double bc2 = 1.0 - std::pow(state.beta2, double(state.step));
  for (size_t i = 0; i < entries.size(); ++i) {
    Mat& p = *entries[i].second;
    const Mat& g = grads[i];
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
    state.v[i] =
        state.beta2 * state.v[i] + (1.0 - state.beta2) * g.cwiseProduct(g);
    Mat mhat = state.m[i] / bc1;
    Mat vhat = state.v[i] / bc2;
    p -= state.lr * (mhat.array() / (vhat.array().sqrt() + state.eps)).matrix();
  }
}

namespace {

struct SceneGrad {
  EpochLoss loss;
  std::vector<Mat> grads;
};

SceneGrad scene_gradient(const GraspScene& scene, const ModelParams& params,
                         const GraphOptions& options,
                         const SurfacePattern& samples,
                         double backward_seed) {
  ad::Tape tape;
  ParamVars pv = params_on_tape(tape, params);
  TapeGraphs tg = graphs_on_tape(tape, pv, params, scene.hand_init,
                                 scene.obj_init, scene.contact_indices,
                                 options);
  RefineNodes rn = refine_on_tape(tape, tg, pv, scene.hand_init,
                                  scene.obj_init);
  LossNodes ln =
      loss_on_tape(tape, rn.refined_hand, rn.refined_obj, scene, samples);
  tape.backward(ln.total, backward_seed);

  SceneGrad out;
  out.loss = {tape.value(ln.total)(0, 0), tape.value(ln.hand)(0, 0),
              tape.value(ln.obj)(0, 0)};
  out.grads.reserve(pv.ordered.size());
  for (ad::Var v : pv.ordered) out.grads.push_back(tape.grad(v));
  return out;
}

}  // namespace

EpochLoss batch_gradient(const std::vector<GraspScene>& scenes,
                         const ModelParams& params, const GraphOptions& options,
                         int chamfer_samples, int threads,
                         std::vector<Mat>& grad_out, double backward_seed) {
  const size_t n = scenes.size();
  if (n == 0) throw std::invalid_argument("batch_gradient: no scenes");
  std::vector<SceneGrad> per_scene(n);

  int workers = std::max(1, std::min<int>(threads, int(n)));
  std::atomic<size_t> next{0};
  auto work = [&] {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= n) break;
      per_scene[i] =
          scene_gradient(scenes[i], params, options,
                         object_sample_pattern(scenes[i], chamfer_samples),
                         backward_seed);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  // Reduce in scene order so the result is identical for any thread count.
  EpochLoss loss{0, 0, 0};
  grad_out = per_scene[0].grads;
  loss = per_scene[0].loss;
  for (size_t i = 1; i < n; ++i) {
    for (size_t p = 0; p < grad_out.size(); ++p)
      grad_out[p] += per_scene[i].grads[p];
    loss.total += per_scene[i].loss.total;
    loss.hand += per_scene[i].loss.hand;
    loss.obj += per_scene[i].loss.obj;
  }
  double inv = 1.0 / double(n);
  for (Mat& g : grad_out) g *= inv;
  loss.total *= inv;
  loss.hand *= inv;
  loss.obj *= inv;
  return loss;
}

TrainResult train(const std::vector<GraspScene>& scenes,
                  const TrainConfig& config) {
  TrainResult result;
  result.params = init_params(config.descriptor_dim, config.hidden,
                              config.attention_dim, config.seed);
  GraphOptions options{config.gamma, config.use_common, config.use_attention};

  AdamState adam;
  adam_init(adam, result.params);

  std::vector<Mat> grads;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    adam.lr = (config.lr_drop_epoch > 0 && epoch >= config.lr_drop_epoch)
                  ? config.lr * 0.1
                  : config.lr;
    EpochLoss loss =
        batch_gradient(scenes, result.params, options, config.chamfer_samples,
                       config.threads, grads);
    if (!std::isfinite(loss.total))
      throw std::runtime_error("training diverged: non-finite loss at epoch " +
                               std::to_string(epoch));
    adam_step(result.params, grads, adam);
    result.curve.push_back(loss);
  }
  return result;
}

void write_loss_csv(const std::vector<EpochLoss>& curve,
                    const std::string& path) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw std::runtime_error("cannot write " + path);
  std::fprintf(out, "epoch,loss_total,loss_hand,loss_obj\n");
  for (size_t i = 0; i < curve.size(); ++i)
    std::fprintf(out, "%zu,%.17g,%.17g,%.17g\n", i + 1, curve[i].total,
                 curve[i].hand, curve[i].obj);
  std::fclose(out);
}

namespace {

// Miniature but complete scene exercising every code path: an octahedron
// "hand" with 6 vertices and a box "object" with 8, three contacts and a
// random nonnegative row-stochastic joint regressor.
GraspScene tiny_scene(uint64_t seed) {
  Rng rng(seed);
  GraspScene scene;
  scene.seed = seed;
  scene.kind = ObjectKind::box;

  Mesh octa;
  octa.vertices.resize(6, 3);
  double r = 20.0;
  octa.vertices << r, 0, 0, -r, 0, 0, 0, r, 0, 0, -r, 0, 0, 0, r, 0, 0, -r;
  octa.faces.resize(8, 3);
  octa.faces << 0, 2, 4, 2, 1, 4, 1, 3, 4, 3, 0, 4, 2, 0, 5, 1, 2, 5, 3, 1, 5,
      0, 3, 5;
  scene.hand_gt = translated(octa, Vec3(-30, 4, 2));
  scene.hand_init = translated(scene.hand_gt, Vec3(6, -3, 2));

  scene.obj_gt = make_box(Vec3(34, 30, 28), 8);
  scene.obj_gt = translated(scene.obj_gt, Vec3(18, -2, -1));
  scene.obj_init = translated(scene.obj_gt, Vec3(-5, 4, 3));

  scene.contact_indices = {0, 2, 4};
  std::vector<Eigen::Triplet<double>> trip;
  for (int row = 0; row < 21; ++row) {
    double w[6], total = 0;
    for (int c = 0; c < 6; ++c) {
      w[c] = rng.uniform();
      total += w[c];
    }
    for (int c = 0; c < 6; ++c) trip.emplace_back(row, c, w[c] / total);
  }
  scene.joint_regressor.resize(21, 6);
  scene.joint_regressor.setFromTriplets(trip.begin(), trip.end());
  return scene;
}

}  // namespace

GradCheckResult gradcheck(uint64_t seed, int descriptor_dim, int hidden,
                          int attention_dim, int directions, bool corrupt) {
  std::vector<GraspScene> scenes = {tiny_scene(Rng::mix(seed, 9000))};
  ModelParams params =
      init_params(descriptor_dim, hidden, attention_dim, seed);
  GraphOptions options;
  const int samples = 40;

  std::vector<Mat> grads;
  batch_gradient(scenes, params, options, samples, 1, grads,
                 corrupt ? 1.0 + 1e-2 : 1.0);
  Vec analytic;
  {
    ModelParams tmp = params;
    auto entries = param_entries(tmp);
    long total = 0;
    for (const auto& [name, m] : entries) total += m->size();
    analytic.resize(total);
    long at = 0;
    for (size_t i = 0; i < entries.size(); ++i) {
      analytic.segment(at, grads[i].size()) =
          Eigen::Map<const Vec>(grads[i].data(), grads[i].size());
      at += grads[i].size();
    }
  }

  Vec theta = flatten_params(params);
  auto loss_at = [&](const Vec& th) {
    ModelParams p = params;
    unflatten_params(th, p);
    std::vector<Mat> unused;
    EpochLoss l = batch_gradient(scenes, p, options, samples, 1, unused);
    return l.total;
  };

  Rng rng(Rng::mix(seed, 31337));
  double eps = 1e-5 * (1.0 + theta.cwiseAbs().maxCoeff());
  GradCheckResult result;
  result.directions = directions;
  for (int t = 0; t < directions; ++t) {
    Vec dir(theta.size());
    for (long i = 0; i < dir.size(); ++i) dir(i) = rng.normal();
    dir.normalize();
    double a = analytic.dot(dir);
    double fd = (loss_at(theta + eps * dir) - loss_at(theta - eps * dir)) /
                (2.0 * eps);
    double denom = std::max({std::abs(a), std::abs(fd), 1e-8});
    result.max_rel_error =
        std::max(result.max_rel_error, std::abs(a - fd) / denom);
  }
  result.pass = result.max_rel_error < 1e-4;
  return result;
}

}  // namespace hograph

#pragma once

#include <array>
#include <string>
#include <vector>

#include "hograph/losses.hpp"
#include "hograph/metrics.hpp"
#include "hograph/refine.hpp"

namespace hograph {

struct AdamState {
  double lr = 1e-4;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  long step = 0;
  std::vector<Mat> m, v;  // aligned with param_entries order
};

void adam_init(AdamState& state, const ModelParams& params);
void adam_step(ModelParams& params, const std::vector<Mat>& grads,
               AdamState& state);

struct TrainConfig {
  uint64_t seed = 1;
  int epochs = 200;
  double lr = 1e-4;
  int lr_drop_epoch = 0;  // 1-based epoch from which lr is multiplied by 0.1;
                          // 0 disables the drop
  double gamma = 0.01;
  int descriptor_dim = 64, hidden = 64, attention_dim = 32;
  bool use_common = true, use_attention = true;
  int threads = 1;
  int chamfer_samples = 600;
};

struct EpochLoss {
  double total, hand, obj;
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochLoss> curve;  // one entry per epoch
};

// Full-batch gradient descent with Adam over the mean scene loss. Gradients
// are reduced in scene order whatever the thread count, so results are
// bit-identical for any --threads value. Throws on non-finite loss.
TrainResult train(const std::vector<GraspScene>& scenes,
                  const TrainConfig& config);

// Mean scene loss and per-scene gradients of the full parameter vector at
// fixed parameters; the building block of both train() and gradcheck().
EpochLoss batch_gradient(const std::vector<GraspScene>& scenes,
                         const ModelParams& params, const GraphOptions& options,
                         int chamfer_samples, int threads,
                         std::vector<Mat>& grad_out, double backward_seed = 1.0);

void write_loss_csv(const std::vector<EpochLoss>& curve,
                    const std::string& path);

struct GradCheckResult {
  double max_rel_error = 0.0;
  int directions = 0;
  bool pass = false;
};

// Compares analytic directional derivatives of the full training objective
// on a miniature scene against central finite differences along random
// directions in parameter space. `corrupt_seed` scales the seed gradient to
// verify the harness detects a broken backward pass.
GradCheckResult gradcheck(uint64_t seed, int descriptor_dim, int hidden,
                          int attention_dim, int directions,
                          bool corrupt = false);

}  // namespace hograph

#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "hograph/graph.hpp"

namespace hograph {

struct BlockParams {
  Mat weight;  // (2 * in) x hidden; input is [intra message | inter message]
  Mat bias;    // 1 x hidden
};

struct ModelParams {
  int descriptor_dim = 64;
  int hidden = 64;
  int attention_dim = 32;

  EncoderParams encoder_hand, encoder_obj;
  std::array<AttentionParams, 4> attention;       // indexed by EdgeKind
  std::array<BlockParams, 4> blocks_hand;         // four refinement blocks
  std::array<BlockParams, 4> blocks_obj;
  Mat head_hand, head_obj;                        // hidden x 3, no activation
};

// Input width of block k (0-based): block 0 sees the initial features, blocks
// 1 and 2 see the previous hidden state, block 3 sees the initial features
// concatenated with all three previous block outputs.
int block_input_width(const ModelParams& params, int k);

// Glorot-uniform weights, zero biases. Attention maps are scaled down so the
// initial attention rows stay spiky enough to clear the edge threshold
// without saturating; displacement heads start near zero so refinement
// begins close to the identity.
ModelParams init_params(int descriptor_dim, int hidden, int attention_dim,
                        uint64_t seed);

// Stable name -> tensor listing; the order defines the parameter vector
// layout used by the optimizer, flatten/unflatten and checkpoints.
std::vector<std::pair<std::string, Mat*>> param_entries(ModelParams& params);
std::vector<std::pair<std::string, const Mat*>> param_entries(
    const ModelParams& params);

Vec flatten_params(const ModelParams& params);
void unflatten_params(const Vec& theta, ModelParams& params);

// JSON checkpoint with dimensions and named tensors; exact decimal
// round-trip, so save(load(x)) is byte-identical.
void save_checkpoint(const ModelParams& params, const std::string& path);
ModelParams load_checkpoint(const std::string& path);

}  // namespace hograph

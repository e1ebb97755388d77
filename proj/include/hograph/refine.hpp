#pragma once

#include <array>

#include "hograph/autodiff.hpp"
#include "hograph/params.hpp"
#include "hograph/scene.hpp"

namespace hograph {

// Weighted neighborhood sum with fixed self weight 1 and no degree
// normalization: out_i = x_i + sum over edges (p -> i) of w * neigh_p.
Mat aggregate(const Mat& self, const Mat& neigh, const EdgeSet& edges);

// One refinement block update for both classes: per class, the intra and
// inter aggregation results are concatenated and pushed through an affine
// map and ReLU. `xh`/`xo` are the current features of block k's input.
std::pair<Mat, Mat> gc_block(const Mat& xh, const Mat& xo,
                             const FinalGraphs& graphs,
                             const BlockParams& block_h,
                             const BlockParams& block_o);

struct BlockTrace {
  std::array<Mat, 4> hand, obj;
};

struct RefineResult {
  Points disp_hand, disp_obj;
  Mesh refined_hand, refined_obj;
  BlockTrace trace;
};

// Full refinement forward pass on prebuilt graphs: four blocks (the last one
// consuming the initial features concatenated with every previous block
// output), then a linear displacement head added onto the initial vertices.
RefineResult refine(const Mesh& hand_init, const Mesh& obj_init,
                    const FinalGraphs& graphs, const ModelParams& params);

// --- differentiable pipeline ---

// Tape leaves mirroring ModelParams; `ordered` is aligned with
// param_entries() for gradient collection.
struct ParamVars {
  ad::Var enc_h_w, enc_h_b, enc_o_w, enc_o_b;
  std::array<std::pair<ad::Var, ad::Var>, 4> attention;  // (w_query, w_key)
  std::array<std::pair<ad::Var, ad::Var>, 4> blocks_h, blocks_o;
  ad::Var head_h, head_o;
  std::vector<ad::Var> ordered;
};

ParamVars params_on_tape(ad::Tape& tape, const ModelParams& params);

// Graph structure with edge weights as tape nodes.
struct TapeGraphs {
  std::array<std::vector<int>, 4> src, dst;  // merged edges per kind
  std::array<ad::Var, 4> weights;            // E x 1 each
  ad::Var x_hand, x_obj;                     // initial node features
};

// Rebuilds the attention subgraph on the tape so gradients flow through the
// soft edge weights; edge selection itself happens on values and is treated
// as locally constant. Writes the value-level graphs to `info` if given.
TapeGraphs graphs_on_tape(ad::Tape& tape, const ParamVars& pv,
                          const ModelParams& params, const Mesh& hand_init,
                          const Mesh& obj_init,
                          const std::vector<int>& contact_indices,
                          const GraphOptions& options,
                          FinalGraphs* info = nullptr);

// Same structure with every weight a constant (forward-only use).
TapeGraphs graphs_on_tape_const(ad::Tape& tape, const FinalGraphs& graphs);

struct RefineNodes {
  ad::Var refined_hand, refined_obj;
  ad::Var disp_hand, disp_obj;
  std::array<ad::Var, 4> block_hand, block_obj;
};

RefineNodes refine_on_tape(ad::Tape& tape, const TapeGraphs& graphs,
                           const ParamVars& pv, const Mesh& hand_init,
                           const Mesh& obj_init);

}  // namespace hograph

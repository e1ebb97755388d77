#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "hograph/mesh.hpp"

namespace hograph {

// Directed edge families between the hand (h) and object (o) node sets.
// Index order is fixed and used wherever per-kind arrays appear.
enum class EdgeKind { hh = 0, oo = 1, ho = 2, oh = 3 };
enum class EdgeOrigin { common, attention, merged };
enum class NodeClass { hand, object };

constexpr std::array<EdgeKind, 4> kEdgeKinds = {EdgeKind::hh, EdgeKind::oo,
                                                EdgeKind::ho, EdgeKind::oh};

std::string to_string(EdgeKind kind);

struct Edge {
  int src, dst;
  double weight;
};

struct EdgeSet {
  EdgeKind kind = EdgeKind::hh;
  EdgeOrigin origin = EdgeOrigin::common;
  std::vector<Edge> edges;  // sorted by (src, dst), pairs unique
};

// Per-node feature rows: vertex position (3) followed by the class-level
// scene descriptor, identical on every row of a class.
struct NodeFeatures {
  Mat rows;
  NodeClass node_class = NodeClass::hand;
  int descriptor_dim = 0;
};

struct EncoderParams {
  Mat weight;  // D x 102
  Mat bias;    // D x 1
};

struct AttentionParams {
  Mat w_query;  // (3 + D) x d_att
  Mat w_key;    // (3 + D) x d_att
};

// Raw mesh statistics feeding the descriptor encoder: centroid (3), bounding
// box extents (3), then 32 farthest-point-sampled vertices (96), row-major.
constexpr int kDescriptorStatCount = 102;
constexpr int kDescriptorSamples = 32;

Vec descriptor_stats(const Mesh& mesh);

// Greedy farthest point sampling seeded at index 0; distance ties take the
// lowest index; indices cycle when count exceeds the vertex count.
std::vector<int> farthest_point_indices(const Points& points, int count);

// zeta = W * stats + b.
Vec scene_descriptor(const Mesh& mesh, const EncoderParams& encoder);

NodeFeatures init_nodes(const Mesh& mesh, const Vec& descriptor,
                        NodeClass node_class);

// Mesh edges in both directions, weight 1.
EdgeSet common_edges_intra(const Mesh& mesh, EdgeKind kind);

// Contact prior: each contact hand vertex connects to its nearest object
// vertex (ties take the lowest index); the oh set is the exact reversal.
std::pair<EdgeSet, EdgeSet> common_edges_inter(
    const Points& hand_vertices, const Points& obj_vertices,
    const std::vector<int>& contact_indices);

// Row-stochastic scaled dot-product attention from src nodes to dst nodes:
// softmax_rows((X_src W_q)(X_dst W_k)^T / sqrt(d_att)).
Mat attention_matrix(const NodeFeatures& src, const NodeFeatures& dst,
                     const AttentionParams& params);

// Keeps entries strictly greater than gamma as soft edges. Diagonal entries
// are kept too unless exclude_self is set (used for hh and oo, where a fixed
// self weight is part of aggregation already).
EdgeSet attention_edges(const Mat& attention, double gamma, EdgeKind kind,
                        bool exclude_self = false);

// Union of the connectivity; an edge present in both keeps the sum of its
// weights. Kinds must match.
EdgeSet merge_edge_sets(const EdgeSet& common, const EdgeSet& attention);

struct GraphOptions {
  double gamma = 0.01;
  bool use_common = true;
  bool use_attention = true;
};

struct FinalGraphs {
  NodeFeatures hand, obj;
  Vec zeta_hand, zeta_obj;
  std::array<EdgeSet, 4> common;     // indexed by EdgeKind
  std::array<EdgeSet, 4> attention;  // indexed by EdgeKind
  std::array<EdgeSet, 4> merged;     // indexed by EdgeKind
};

const EdgeSet& edge_set(const std::array<EdgeSet, 4>& sets, EdgeKind kind);

// Builds node features, both edge families and their merge for all four
// kinds. Disabled families come back empty but correctly typed.
FinalGraphs build_final_graphs(const Mesh& hand_init, const Mesh& obj_init,
                               const std::vector<int>& contact_indices,
                               const EncoderParams& encoder_hand,
                               const EncoderParams& encoder_obj,
                               const std::array<AttentionParams, 4>& attention,
                               const GraphOptions& options);

// Debug dump: per-kind edge triplets and node feature shapes.
std::string graphs_to_json(const FinalGraphs& graphs);

}  // namespace hograph

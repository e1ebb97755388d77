#include "hograph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "hograph/autodiff.hpp"

namespace hograph {

std::string to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::hh: return "hh";
    case EdgeKind::oo: return "oo";
    case EdgeKind::ho: return "ho";
    case EdgeKind::oh: return "oh";
  }
  return "hh";
}

const EdgeSet& edge_set(const std::array<EdgeSet, 4>& sets, EdgeKind kind) {
  return sets[size_t(kind)];
}

std::vector<int> farthest_point_indices(const Points& points, int count) {
  const int n = int(points.rows());
  if (n == 0) throw std::invalid_argument("farthest_point_indices: no points");
  std::vector<int> picked;
  picked.reserve(size_t(count));
  picked.push_back(0);
  Vec dist = (points.rowwise() - points.row(0)).rowwise().squaredNorm();
  while (int(picked.size()) < std::min(count, n)) {
    int best = 0;
    for (int i = 1; i < n; ++i)
      if (dist(i) > dist(best)) best = i;  // ties keep the lowest index
    picked.push_back(best);
    Vec d = (points.rowwise() - points.row(best)).rowwise().squaredNorm();
    dist = dist.cwiseMin(d);
  }
  for (int i = n; i < count; ++i) picked.push_back(picked[size_t(i % n)]);
  return picked;
}

Vec descriptor_stats(const Mesh& mesh) {
  Vec stats(kDescriptorStatCount);
  stats.segment<3>(0) = mesh.vertices.colwise().mean().transpose();
  stats.segment<3>(3) = (mesh.vertices.colwise().maxCoeff() -
                         mesh.vertices.colwise().minCoeff())
                            .transpose();
  auto idx = farthest_point_indices(mesh.vertices, kDescriptorSamples);
  for (int i = 0; i < kDescriptorSamples; ++i)
    stats.segment<3>(6 + 3 * i) = mesh.vertices.row(idx[size_t(i)]).transpose();
  return stats;
}

Vec scene_descriptor(const Mesh& mesh, const EncoderParams& encoder) {
  if (encoder.weight.cols() != kDescriptorStatCount)
    throw std::invalid_argument("scene_descriptor: encoder expects " +
                                std::to_string(kDescriptorStatCount) +
                                " statistics");
  return encoder.weight * descriptor_stats(mesh) + encoder.bias;
}

NodeFeatures init_nodes(const Mesh& mesh, const Vec& descriptor,
                        NodeClass node_class) {
  NodeFeatures nodes;
  nodes.node_class = node_class;
  nodes.descriptor_dim = int(descriptor.size());
  nodes.rows.resize(mesh.vertices.rows(), 3 + descriptor.size());
  nodes.rows.leftCols(3) = mesh.vertices;
  nodes.rows.rightCols(descriptor.size()).rowwise() = descriptor.transpose();
  return nodes;
}

EdgeSet common_edges_intra(const Mesh& mesh, EdgeKind kind) {
  if (kind != EdgeKind::hh && kind != EdgeKind::oo)
    throw std::invalid_argument("common_edges_intra: kind must be hh or oo");
  EdgeSet set;
  set.kind = kind;
  set.origin = EdgeOrigin::common;
  for (const auto& e : vertex_adjacency(mesh)) {
    set.edges.push_back({e[0], e[1], 1.0});
    set.edges.push_back({e[1], e[0], 1.0});
  }
  std::sort(set.edges.begin(), set.edges.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.src, a.dst) < std::pair(b.src, b.dst);
  });
  return set;
}

std::pair<EdgeSet, EdgeSet> common_edges_inter(
    const Points& hand_vertices, const Points& obj_vertices,
    const std::vector<int>& contact_indices) {
  EdgeSet ho, oh;
  ho.kind = EdgeKind::ho;
  oh.kind = EdgeKind::oh;
  ho.origin = oh.origin = EdgeOrigin::common;
  if (contact_indices.empty())
    std::cerr << "warning: no contact vertices, ho/oh common edges empty\n";

  std::vector<int> contacts = contact_indices;
  std::sort(contacts.begin(), contacts.end());
  contacts.erase(std::unique(contacts.begin(), contacts.end()), contacts.end());

  for (int ci : contacts) {
    if (ci < 0 || ci >= hand_vertices.rows())
      throw std::invalid_argument("contact index out of range");
    int best = 0;
    double best2 = std::numeric_limits<double>::infinity();
    for (int j = 0; j < obj_vertices.rows(); ++j) {
      double d2 = (obj_vertices.row(j) - hand_vertices.row(ci)).squaredNorm();
      if (d2 < best2) {  // strict: ties keep the lowest index
        best2 = d2;
        best = j;
      }
    }
    ho.edges.push_back({ci, best, 1.0});
    oh.edges.push_back({best, ci, 1.0});
  }
  auto by_pair = [](const Edge& a, const Edge& b) {
    return std::pair(a.src, a.dst) < std::pair(b.src, b.dst);
  };
  std::sort(ho.edges.begin(), ho.edges.end(), by_pair);
  std::sort(oh.edges.begin(), oh.edges.end(), by_pair);
  return {ho, oh};
}

Mat attention_matrix(const NodeFeatures& src, const NodeFeatures& dst,
                     const AttentionParams& params) {
  if (params.w_query.rows() != src.rows.cols() ||
      params.w_key.rows() != dst.rows.cols())
    throw std::invalid_argument("attention_matrix: projection shape mismatch");
  if (params.w_query.cols() != params.w_key.cols())
    throw std::invalid_argument("attention_matrix: query/key widths differ");
  Mat q = src.rows * params.w_query;
  Mat k = dst.rows * params.w_key;
  Mat logits = (q * k.transpose()) * (1.0 / std::sqrt(double(q.cols())));
  return ad::softmax_rows_kernel(logits);
}

EdgeSet attention_edges(const Mat& attention, double gamma, EdgeKind kind,
                        bool exclude_self) {
  EdgeSet set;
  set.kind = kind;
  set.origin = EdgeOrigin::attention;
  for (long i = 0; i < attention.rows(); ++i)
    for (long j = 0; j < attention.cols(); ++j) {
      if (exclude_self && i == j) continue;
      if (attention(i, j) > gamma)
        set.edges.push_back({int(i), int(j), attention(i, j)});
    }
  return set;
}

EdgeSet merge_edge_sets(const EdgeSet& common, const EdgeSet& attention) {
  if (common.kind != attention.kind)
    throw std::invalid_argument("merge_edge_sets: kinds differ (" +
                                to_string(common.kind) + " vs " +
                                to_string(attention.kind) + ")");
  std::map<std::pair<int, int>, double> acc;
  for (const Edge& e : common.edges) acc[{e.src, e.dst}] += e.weight;
  for (const Edge& e : attention.edges) acc[{e.src, e.dst}] += e.weight;
  EdgeSet out;
  out.kind = common.kind;
  out.origin = EdgeOrigin::merged;
  out.edges.reserve(acc.size());
  for (const auto& [key, w] : acc) out.edges.push_back({key.first, key.second, w});
  return out;
}

FinalGraphs build_final_graphs(const Mesh& hand_init, const Mesh& obj_init,
                               const std::vector<int>& contact_indices,
                               const EncoderParams& encoder_hand,
                               const EncoderParams& encoder_obj,
                               const std::array<AttentionParams, 4>& attention,
                               const GraphOptions& options) {
  FinalGraphs g;
  g.zeta_hand = scene_descriptor(hand_init, encoder_hand);
  g.zeta_obj = scene_descriptor(obj_init, encoder_obj);
  g.hand = init_nodes(hand_init, g.zeta_hand, NodeClass::hand);
  g.obj = init_nodes(obj_init, g.zeta_obj, NodeClass::object);

  for (EdgeKind kind : kEdgeKinds) {
    g.common[size_t(kind)].kind = kind;
    g.common[size_t(kind)].origin = EdgeOrigin::common;
    g.attention[size_t(kind)].kind = kind;
    g.attention[size_t(kind)].origin = EdgeOrigin::attention;
  }

  if (options.use_common) {
    g.common[size_t(EdgeKind::hh)] = common_edges_intra(hand_init, EdgeKind::hh);
    g.common[size_t(EdgeKind::oo)] = common_edges_intra(obj_init, EdgeKind::oo);
    auto [ho, oh] =
        common_edges_inter(hand_init.vertices, obj_init.vertices,
                           contact_indices);
    g.common[size_t(EdgeKind::ho)] = std::move(ho);
    g.common[size_t(EdgeKind::oh)] = std::move(oh);
  }

  if (options.use_attention) {
    auto att = [&](const NodeFeatures& s, const NodeFeatures& d, EdgeKind kind,
                   bool exclude_self) {
      Mat a = attention_matrix(s, d, attention[size_t(kind)]);
      return attention_edges(a, options.gamma, kind, exclude_self);
    };
    g.attention[size_t(EdgeKind::hh)] = att(g.hand, g.hand, EdgeKind::hh, true);
    g.attention[size_t(EdgeKind::oo)] = att(g.obj, g.obj, EdgeKind::oo, true);
    g.attention[size_t(EdgeKind::ho)] = att(g.hand, g.obj, EdgeKind::ho, false);
    g.attention[size_t(EdgeKind::oh)] = att(g.obj, g.hand, EdgeKind::oh, false);
  }

  for (EdgeKind kind : kEdgeKinds)
    g.merged[size_t(kind)] =
        merge_edge_sets(g.common[size_t(kind)], g.attention[size_t(kind)]);
  return g;
}

std::string graphs_to_json(const FinalGraphs& graphs) {
  nlohmann::json j;
  j["nodes"] = {
      {"hand", {{"count", graphs.hand.rows.rows()},
                {"feature_dim", graphs.hand.rows.cols()}}},
      {"object", {{"count", graphs.obj.rows.rows()},
                  {"feature_dim", graphs.obj.rows.cols()}}}};
  auto dump_sets = [&](const std::array<EdgeSet, 4>& sets) {
    nlohmann::json out;
    for (EdgeKind kind : kEdgeKinds) {
      nlohmann::json edges = nlohmann::json::array();
      for (const Edge& e : sets[size_t(kind)].edges)
        edges.push_back(nlohmann::json::array({e.src, e.dst, e.weight}));
      out[to_string(kind)] = std::move(edges);
    }
    return out;
  };
  j["common"] = dump_sets(graphs.common);
  j["attention"] = dump_sets(graphs.attention);
  j["merged"] = dump_sets(graphs.merged);
  return j.dump(2) + "\n";
}

}  // namespace hograph

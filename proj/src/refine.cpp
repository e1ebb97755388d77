#include "hograph/refine.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace hograph {

Mat aggregate(const Mat& self, const Mat& neigh, const EdgeSet& edges) {
  std::vector<int> src(edges.edges.size()), dst(edges.edges.size());
  Eigen::VectorXd w(long(edges.edges.size()));
  for (size_t e = 0; e < edges.edges.size(); ++e) {
    src[e] = edges.edges[e].src;
    dst[e] = edges.edges[e].dst;
    w(long(e)) = edges.edges[e].weight;
  }
  return ad::aggregate_kernel(self, neigh, src, dst, w);
}

std::pair<Mat, Mat> gc_block(const Mat& xh, const Mat& xo,
                             const FinalGraphs& graphs,
                             const BlockParams& block_h,
                             const BlockParams& block_o) {
  auto run = [&](const Mat& self, const Mat& other, EdgeKind intra,
                 EdgeKind inter, const BlockParams& block) {
    Mat a = aggregate(self, self, edge_set(graphs.merged, intra));
    Mat b = aggregate(self, other, edge_set(graphs.merged, inter));
    Mat cat(self.rows(), a.cols() + b.cols());
    cat << a, b;
    if (cat.cols() != block.weight.rows())
      throw std::invalid_argument("gc_block: weight expects input width " +
                                  std::to_string(block.weight.rows()) +
                                  ", got " + std::to_string(cat.cols()));
    Mat pre = cat * block.weight;
    pre.rowwise() += block.bias.row(0);
    return ad::relu_kernel(pre);
  };
  return {run(xh, xo, EdgeKind::hh, EdgeKind::oh, block_h),
          run(xo, xh, EdgeKind::oo, EdgeKind::ho, block_o)};
}

ParamVars params_on_tape(ad::Tape& tape, const ModelParams& params) {
  ParamVars pv;
  auto entries = param_entries(params);
  std::map<std::string, ad::Var> byname;
  for (const auto& [name, m] : entries) {
    ad::Var v = tape.param(*m);
    byname[name] = v;
    pv.ordered.push_back(v);
  }
  pv.enc_h_w = byname["encoder_hand.weight"];
  pv.enc_h_b = byname["encoder_hand.bias"];
  pv.enc_o_w = byname["encoder_obj.weight"];
  pv.enc_o_b = byname["encoder_obj.bias"];
  const char* kinds[4] = {"hh", "oo", "ho", "oh"};
  for (int k = 0; k < 4; ++k) {
    pv.attention[size_t(k)] = {
        byname[std::string("attention.") + kinds[k] + ".w_query"],
        byname[std::string("attention.") + kinds[k] + ".w_key"]};
  }
  for (int k = 0; k < 4; ++k) {
    std::string b = "block" + std::to_string(k + 1);
    pv.blocks_h[size_t(k)] = {byname[b + ".hand.weight"],
                              byname[b + ".hand.bias"]};
    pv.blocks_o[size_t(k)] = {byname[b + ".obj.weight"],
                              byname[b + ".obj.bias"]};
  }
  pv.head_h = byname["head.hand"];
  pv.head_o = byname["head.obj"];
  return pv;
}

namespace {

// Union of the two pair sets in (src, dst) order with, per edge, the constant
// common weight and whether the pair is an attention edge.
struct MergedEdges {
  std::vector<int> src, dst;
  std::vector<double> common_weight;
  std::vector<double> attention_mask;
};

MergedEdges merged_union(const EdgeSet& common, const EdgeSet& attention) {
  std::map<std::pair<int, int>, std::pair<double, bool>> acc;
  for (const Edge& e : common.edges) acc[{e.src, e.dst}] = {e.weight, false};
  for (const Edge& e : attention.edges) {
    auto& slot = acc[{e.src, e.dst}];
    slot.second = true;
  }
  MergedEdges out;
  for (const auto& [key, val] : acc) {
    out.src.push_back(key.first);
    out.dst.push_back(key.second);
    out.common_weight.push_back(val.first);
    out.attention_mask.push_back(val.second ? 1.0 : 0.0);
  }
  return out;
}

ad::Var features_on_tape(ad::Tape& tape, const Mesh& mesh, ad::Var enc_w,
                         ad::Var enc_b) {
  ad::Var stats = tape.constant(descriptor_stats(mesh));
  ad::Var zeta = ad::add(ad::matmul(enc_w, stats), enc_b);
  ad::Var coords = tape.constant(mesh.vertices);
  return ad::concat_cols(
      coords, ad::broadcast_rows(ad::transpose(zeta), int(mesh.vertices.rows())));
}

ad::Var attention_on_tape(ad::Tape& tape, ad::Var x_src, ad::Var x_dst,
                          ad::Var w_query, ad::Var w_key) {
  ad::Var q = ad::matmul(x_src, w_query);
  ad::Var k = ad::matmul(x_dst, w_key);
  double inv = 1.0 / std::sqrt(double(tape.value(q).cols()));
  return ad::softmax_rows(ad::scale(ad::matmul(q, ad::transpose(k)), inv));
}

}  // namespace

TapeGraphs graphs_on_tape(ad::Tape& tape, const ParamVars& pv,
                          const ModelParams& params, const Mesh& hand_init,
                          const Mesh& obj_init,
                          const std::vector<int>& contact_indices,
                          const GraphOptions& options, FinalGraphs* info) {
  TapeGraphs tg;
  tg.x_hand = features_on_tape(tape, hand_init, pv.enc_h_w, pv.enc_h_b);
  tg.x_obj = features_on_tape(tape, obj_init, pv.enc_o_w, pv.enc_o_b);

  FinalGraphs local;
  FinalGraphs& g = info ? *info : local;
  g.zeta_hand = tape.value(tg.x_hand).row(0).tail(params.descriptor_dim);
  g.zeta_obj = tape.value(tg.x_obj).row(0).tail(params.descriptor_dim);
  g.hand.rows = tape.value(tg.x_hand);
  g.hand.node_class = NodeClass::hand;
  g.hand.descriptor_dim = params.descriptor_dim;
  g.obj.rows = tape.value(tg.x_obj);
  g.obj.node_class = NodeClass::object;
  g.obj.descriptor_dim = params.descriptor_dim;

  for (EdgeKind kind : kEdgeKinds) {
    g.common[size_t(kind)].kind = kind;
    g.common[size_t(kind)].origin = EdgeOrigin::common;
    g.attention[size_t(kind)].kind = kind;
    g.attention[size_t(kind)].origin = EdgeOrigin::attention;
  }
  if (options.use_common) {
    g.common[size_t(EdgeKind::hh)] = common_edges_intra(hand_init, EdgeKind::hh);
    g.common[size_t(EdgeKind::oo)] = common_edges_intra(obj_init, EdgeKind::oo);
    auto [ho, oh] = common_edges_inter(hand_init.vertices, obj_init.vertices,
                                       contact_indices);
    g.common[size_t(EdgeKind::ho)] = std::move(ho);
    g.common[size_t(EdgeKind::oh)] = std::move(oh);
  }

  std::array<ad::Var, 4> attention_mats;
  if (options.use_attention) {
    auto pair_of = [&](EdgeKind kind) -> std::pair<ad::Var, ad::Var> {
      switch (kind) {
        case EdgeKind::hh: return {tg.x_hand, tg.x_hand};
        case EdgeKind::oo: return {tg.x_obj, tg.x_obj};
        case EdgeKind::ho: return {tg.x_hand, tg.x_obj};
        case EdgeKind::oh: return {tg.x_obj, tg.x_hand};
      }
      throw std::logic_error("bad kind");
    };
    for (EdgeKind kind : kEdgeKinds) {
      auto [xs, xd] = pair_of(kind);
      attention_mats[size_t(kind)] =
          attention_on_tape(tape, xs, xd, pv.attention[size_t(kind)].first,
                            pv.attention[size_t(kind)].second);
      bool exclude_self = kind == EdgeKind::hh || kind == EdgeKind::oo;
      g.attention[size_t(kind)] =
          attention_edges(tape.value(attention_mats[size_t(kind)]),
                          options.gamma, kind, exclude_self);
    }
  }

  for (EdgeKind kind : kEdgeKinds) {
    size_t ki = size_t(kind);
    g.merged[ki] = merge_edge_sets(g.common[ki], g.attention[ki]);
    MergedEdges me = merged_union(g.common[ki], g.attention[ki]);
    tg.src[ki] = me.src;
    tg.dst[ki] = me.dst;
    long ecount = long(me.src.size());
    Mat common_w(ecount, 1), mask(ecount, 1);
    for (long e = 0; e < ecount; ++e) {
      common_w(e, 0) = me.common_weight[size_t(e)];
      mask(e, 0) = me.attention_mask[size_t(e)];
    }
    if (options.use_attention && ecount > 0) {
      ad::Var gathered =
          ad::gather_entries(attention_mats[ki], me.src, me.dst);
      tg.weights[ki] = ad::add(ad::cmul(gathered, tape.constant(mask)),
                               tape.constant(common_w));
    } else {
      tg.weights[ki] = tape.constant(common_w);
    }
  }
  return tg;
}

TapeGraphs graphs_on_tape_const(ad::Tape& tape, const FinalGraphs& graphs) {
  TapeGraphs tg;
  tg.x_hand = tape.constant(graphs.hand.rows);
  tg.x_obj = tape.constant(graphs.obj.rows);
  for (EdgeKind kind : kEdgeKinds) {
    size_t ki = size_t(kind);
    const auto& edges = graphs.merged[ki].edges;
    Mat w(long(edges.size()), 1);
    for (size_t e = 0; e < edges.size(); ++e) {
      tg.src[ki].push_back(edges[e].src);
      tg.dst[ki].push_back(edges[e].dst);
      w(long(e), 0) = edges[e].weight;
    }
    tg.weights[ki] = tape.constant(w);
  }
  return tg;
}

RefineNodes refine_on_tape(ad::Tape& tape, const TapeGraphs& graphs,
                           const ParamVars& pv, const Mesh& hand_init,
                           const Mesh& obj_init) {
  const int nh = int(hand_init.vertices.rows());
  const int no = int(obj_init.vertices.rows());
  auto agg = [&](ad::Var self, ad::Var neigh, EdgeKind kind) {
    size_t ki = size_t(kind);
    return ad::edge_aggregate(self, neigh, graphs.weights[ki], graphs.src[ki],
                              graphs.dst[ki]);
  };
  auto block = [&](ad::Var in_self, ad::Var in_other, EdgeKind intra,
                   EdgeKind inter, const std::pair<ad::Var, ad::Var>& bp,
                   int rows) {
    ad::Var cat =
        ad::concat_cols(agg(in_self, in_self, intra), agg(in_self, in_other, inter));
    ad::Var pre = ad::add(ad::matmul(cat, bp.first),
                          ad::broadcast_rows(bp.second, rows));
    return ad::relu(pre);
  };

  RefineNodes rn;
  ad::Var cur_h = graphs.x_hand, cur_o = graphs.x_obj;
  for (int k = 0; k < 4; ++k) {
    ad::Var in_h = cur_h, in_o = cur_o;
    if (k == 3) {
      in_h = ad::concat_cols({graphs.x_hand, rn.block_hand[0],
                              rn.block_hand[1], rn.block_hand[2]});
      in_o = ad::concat_cols({graphs.x_obj, rn.block_obj[0], rn.block_obj[1],
                              rn.block_obj[2]});
    }
    ad::Var out_h = block(in_h, in_o, EdgeKind::hh, EdgeKind::oh,
                          pv.blocks_h[size_t(k)], nh);
    ad::Var out_o = block(in_o, in_h, EdgeKind::oo, EdgeKind::ho,
                          pv.blocks_o[size_t(k)], no);
    rn.block_hand[size_t(k)] = out_h;
    rn.block_obj[size_t(k)] = out_o;
    cur_h = out_h;
    cur_o = out_o;
  }

  rn.disp_hand = ad::matmul(rn.block_hand[3], pv.head_h);
  rn.disp_obj = ad::matmul(rn.block_obj[3], pv.head_o);
  rn.refined_hand = ad::add(tape.constant(hand_init.vertices), rn.disp_hand);
  rn.refined_obj = ad::add(tape.constant(obj_init.vertices), rn.disp_obj);
  return rn;
}

RefineResult refine(const Mesh& hand_init, const Mesh& obj_init,
                    const FinalGraphs& graphs, const ModelParams& params) {
  ad::Tape tape;
  ParamVars pv = params_on_tape(tape, params);
  TapeGraphs tg = graphs_on_tape_const(tape, graphs);
  RefineNodes rn = refine_on_tape(tape, tg, pv, hand_init, obj_init);

  RefineResult out;
  out.disp_hand = tape.value(rn.disp_hand);
  out.disp_obj = tape.value(rn.disp_obj);
  out.refined_hand = {tape.value(rn.refined_hand), hand_init.faces};
  out.refined_obj = {tape.value(rn.refined_obj), obj_init.faces};
  for (int k = 0; k < 4; ++k) {
    out.trace.hand[size_t(k)] = tape.value(rn.block_hand[size_t(k)]);
    out.trace.obj[size_t(k)] = tape.value(rn.block_obj[size_t(k)]);
  }
  return out;
}

}  // namespace hograph

#include "hograph/losses.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "hograph/graph.hpp"

namespace hograph {

double vertex_l2(const Points& pred, const Points& gt) {
  if (pred.rows() != gt.rows())
    throw std::invalid_argument("vertex_l2: vertex counts differ");
  return (pred - gt).rowwise().squaredNorm().mean();
}

double joint_l2(const Points& pred, const Points& gt,
                const Eigen::SparseMatrix<double>& regressor) {
  Mat jp = regressor * pred;
  Mat jg = regressor * gt;
  return (jp - jg).rowwise().squaredNorm().mean();
}

double chamfer(const Points& a, const Points& b) {
  if (a.rows() == 0 || b.rows() == 0)
    throw std::invalid_argument("chamfer: empty point set");
  auto one_way = [](const Points& from, const Points& to) {
    double acc = 0.0;
    for (long i = 0; i < from.rows(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (long j = 0; j < to.rows(); ++j) {
        double d2 = (from.row(i) - to.row(j)).squaredNorm();
        if (d2 < best) best = d2;
      }
      acc += best;
    }
    return acc / double(from.rows());
  };
  return one_way(a, b) + one_way(b, a);
}

namespace {

Vec edge_lengths(const Mesh& mesh) {
  auto edges = vertex_adjacency(mesh);
  Vec len(long(edges.size()));
  for (size_t e = 0; e < edges.size(); ++e)
    len(long(e)) =
        (mesh.vertices.row(edges[e][0]) - mesh.vertices.row(edges[e][1])).norm();
  return len;
}

}  // namespace

double edge_regularizer(const Mesh& mesh) {
  Vec len = edge_lengths(mesh);
  if (len.size() == 0) return 0.0;
  double mu = len.mean();
  return (len.array() - mu).square().mean();
}

Points laplacian_residuals(const Mesh& mesh) {
  const long n = mesh.vertices.rows();
  std::vector<std::vector<int>> nbr(static_cast<size_t>(n));
  for (const auto& e : vertex_adjacency(mesh)) {
    nbr[size_t(e[0])].push_back(e[1]);
    nbr[size_t(e[1])].push_back(e[0]);
  }
  Points out = Points::Zero(n, 3);
  for (long i = 0; i < n; ++i) {
    if (nbr[size_t(i)].empty()) continue;
    Vec3 mean = Vec3::Zero();
    for (int j : nbr[size_t(i)]) mean += mesh.vertices.row(j).transpose();
    mean /= double(nbr[size_t(i)].size());
    out.row(i) = mesh.vertices.row(i) - mean.transpose();
  }
  return out;
}

double laplacian_loss(const Mesh& mesh) {
  return laplacian_residuals(mesh).rowwise().squaredNorm().mean();
}

LossBreakdown refine_loss(const Points& pred_hand, const Points& pred_obj,
                          const GraspScene& scene,
                          const SurfacePattern& samples) {
  LossBreakdown lb;
  lb.vertex = vertex_l2(pred_hand, scene.hand_gt.vertices);
  lb.joint = joint_l2(pred_hand, scene.hand_gt.vertices, scene.joint_regressor);
  Mesh pred_obj_mesh{pred_obj, scene.obj_gt.faces};
  lb.chamfer = chamfer(pattern_points(pred_obj_mesh, samples),
                       pattern_points(scene.obj_gt, samples));
  lb.edge = edge_regularizer(pred_obj_mesh);
  lb.laplacian = laplacian_loss(pred_obj_mesh);
  lb.hand = lb.vertex + lb.joint;
  lb.obj = lb.chamfer + 2.0 * lb.edge + 0.1 * lb.laplacian;
  lb.total = lb.hand + lb.obj;
  return lb;
}

LossNodes loss_on_tape(ad::Tape& tape, ad::Var refined_hand,
                       ad::Var refined_obj, const GraspScene& scene,
                       const SurfacePattern& samples) {
  using namespace ad;
  const long nh = scene.hand_gt.vertices.rows();
  const long ns = samples.faces.size();

  LossNodes ln;

  // Hand: mean squared vertex and joint distances.
  Var gt_h = tape.constant(scene.hand_gt.vertices);
  ln.vertex = scale(squared_norm(sub(refined_hand, gt_h)), 1.0 / double(nh));
  Var reg = tape.constant(Mat(scene.joint_regressor));
  Var joints_gt = tape.constant(Mat(scene.joint_regressor) *
                                scene.hand_gt.vertices);
  ln.joint = scale(
      squared_norm(sub(matmul(reg, refined_hand), joints_gt)), 1.0 / 21.0);

  // Object: symmetric chamfer between the sample pattern evaluated on the
  // predicted mesh and on the ground truth, built from the pairwise squared
  // distance matrix.
  std::vector<int> ca, cb, cc;
  for (long i = 0; i < ns; ++i) {
    ca.push_back(scene.obj_gt.faces(samples.faces(int(i)), 0));
    cb.push_back(scene.obj_gt.faces(samples.faces(int(i)), 1));
    cc.push_back(scene.obj_gt.faces(samples.faces(int(i)), 2));
  }
  auto weight = [&](int k) {
    return tape.constant(Mat(samples.bary.col(k).replicate(1, 3)));
  };
  Var ps = add(add(cmul(gather_rows(refined_obj, ca), weight(0)),
                   cmul(gather_rows(refined_obj, cb), weight(1))),
               cmul(gather_rows(refined_obj, cc), weight(2)));  // m x 3
  Mat gs = pattern_points(scene.obj_gt, samples);
  Var p2 = row_sums(cmul(ps, ps));                              // m x 1
  Var cross = scale(matmul(ps, tape.constant(Mat(gs.transpose()))), -2.0);
  Var ones_row = tape.constant(Mat::Ones(1, ns));
  Var g2 = tape.constant(
      Mat(gs.rowwise().squaredNorm().transpose().replicate(ns, 1)));
  Var dist = add(add(matmul(p2, ones_row), g2), cross);        // m x m
  Var to_gt = mean(row_min(dist));
  Var to_pred = mean(row_min(transpose(dist)));
  ln.chamfer = add(to_gt, to_pred);

  // Edge length variance of the predicted object mesh.
  Mesh topo{scene.obj_gt.vertices, scene.obj_gt.faces};
  auto edges = vertex_adjacency(topo);
  std::vector<int> esrc, edst;
  for (const auto& e : edges) {
    esrc.push_back(e[0]);
    edst.push_back(e[1]);
  }
  Var diff = sub(gather_rows(refined_obj, esrc), gather_rows(refined_obj, edst));
  Var len = sqrt_elem(row_sums(cmul(diff, diff)));
  Var mu = mean(len);
  Var dev = sub(len, broadcast_rows(mu, int(esrc.size())));
  ln.edge = mean(cmul(dev, dev));

  // Uniform Laplacian of the predicted object mesh; the neighbor-mean map is
  // constant (topology only).
  const long no = scene.obj_gt.vertices.rows();
  Mat lap = Mat::Zero(no, no);
  std::vector<int> degree(size_t(no), 0);
  for (const auto& e : edges) {
    ++degree[size_t(e[0])];
    ++degree[size_t(e[1])];
  }
  for (const auto& e : edges) {
    lap(e[0], e[1]) = 1.0;
    lap(e[1], e[0]) = 1.0;
  }
  for (long i = 0; i < no; ++i)
    if (degree[size_t(i)] > 0) lap.row(i) /= double(degree[size_t(i)]);
  Var neighbor_mean = matmul(tape.constant(lap), refined_obj);
  // Isolated vertices contribute zero: their neighbor mean row is zero, so
  // subtract the vertex itself only where the degree is positive.
  Mat keep(no, 1);
  for (long i = 0; i < no; ++i) keep(i, 0) = degree[size_t(i)] > 0 ? 1.0 : 0.0;
  Var kept = cmul(refined_obj, tape.constant(Mat(keep.replicate(1, 3))));
  ln.laplacian =
      scale(squared_norm(sub(kept, neighbor_mean)), 1.0 / double(no));

  ln.hand = add(ln.vertex, ln.joint);
  ln.obj = add(add(ln.chamfer, scale(ln.edge, 2.0)), scale(ln.laplacian, 0.1));
  ln.total = add(ln.hand, ln.obj);
  return ln;
}

}  // namespace hograph

#include <doctest.h>

#include <cmath>
#include <vector>

#include "hograph/losses.hpp"
#include "hograph/refine.hpp"
#include "hograph/rng.hpp"
#include "helpers.hpp"

using namespace hograph;
using namespace hograph::test;

namespace {

Points random_points(int n, Rng& rng, double scale = 10.0) {
  Points p(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 3; ++j) p(i, j) = rng.uniform(-scale, scale);
  return p;
}

double chamfer_oracle(const Points& a, const Points& b) {
  auto one_way = [](const Points& from, const Points& to) {
    double acc = 0.0;
    for (int i = 0; i < from.rows(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (int j = 0; j < to.rows(); ++j)
        best = std::min(best, (from.row(i) - to.row(j)).squaredNorm());
      acc += best;
    }
    return acc / double(from.rows());
  };
  return one_way(a, b) + one_way(b, a);
}

double edge_variance_oracle(const Mesh& mesh) {
  std::vector<double> lengths;
  for (const auto& e : vertex_adjacency(mesh))
    lengths.push_back(
        (mesh.vertices.row(e[0]) - mesh.vertices.row(e[1])).norm());
  double mean = 0.0;
  for (double l : lengths) mean += l;
  mean /= double(lengths.size());
  double var = 0.0;
  for (double l : lengths) var += (l - mean) * (l - mean);
  return var / double(lengths.size());
}

double laplacian_oracle(const Mesh& mesh) {
  auto adj = vertex_adjacency(mesh);
  std::vector<std::vector<int>> nbr(size_t(mesh.vertex_count()));
  for (const auto& e : adj) {
    nbr[size_t(e[0])].push_back(e[1]);
    nbr[size_t(e[1])].push_back(e[0]);
  }
  double acc = 0.0;
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    if (nbr[size_t(i)].empty()) continue;
    Vec3 mean = Vec3::Zero();
    for (int j : nbr[size_t(i)]) mean += mesh.vertices.row(j).transpose();
    mean /= double(nbr[size_t(i)].size());
    acc += (mesh.vertices.row(i).transpose() - mean).squaredNorm();
  }
  return acc / double(mesh.vertex_count());
}

GraspScene tiny_loss_scene(uint64_t seed = 21) {
  SceneParams params;
  params.kind = ObjectKind::sphere;
  params.object_resolution = 42;
  params.noise = {2.0, 6.0, 0.0};
  return make_scene(params, seed);
}

}  // namespace

TEST_CASE("vertex and joint terms match explicit loops") {
  Rng rng(61);
  Points pred = random_points(30, rng);
  Points gt = random_points(30, rng);
  double acc = 0.0;
  for (int i = 0; i < 30; ++i) acc += (pred.row(i) - gt.row(i)).squaredNorm();
  CHECK(vertex_l2(pred, gt) == doctest::Approx(acc / 30.0).epsilon(1e-12));
  CHECK(vertex_l2(gt, gt) == 0.0);

  // regressor averaging the first three vertices per joint
  Eigen::SparseMatrix<double> reg(21, 30);
  std::vector<Eigen::Triplet<double>> trips;
  for (int r = 0; r < 21; ++r)
    for (int k = 0; k < 3; ++k) trips.push_back({r, (r + k) % 30, 1.0 / 3.0});
  reg.setFromTriplets(trips.begin(), trips.end());
  Mat jp = reg * pred, jg = reg * gt;
  double jacc = 0.0;
  for (int r = 0; r < 21; ++r) jacc += (jp.row(r) - jg.row(r)).squaredNorm();
  CHECK(joint_l2(pred, gt, reg) ==
        doctest::Approx(jacc / 21.0).epsilon(1e-12));
}

TEST_CASE("chamfer distance matches the quadratic oracle") {
  Rng rng(62);
  for (int trial = 0; trial < 5; ++trial) {
    Points a = random_points(20 + trial, rng);
    Points b = random_points(35 - trial, rng);
    CHECK(chamfer(a, b) ==
          doctest::Approx(chamfer_oracle(a, b)).epsilon(1e-12));
    CHECK(chamfer(a, b) == doctest::Approx(chamfer(b, a)).epsilon(1e-12));
  }
  Points same = random_points(25, rng);
  CHECK(chamfer(same, same) == 0.0);

  // one far outlier dominates the mean by exactly its squared distance
  Points single(1, 3), pair(2, 3);
  single << 0, 0, 0;
  pair << 0, 0, 0, 3, 4, 0;
  CHECK(chamfer(single, pair) == doctest::Approx(12.5).epsilon(1e-12));

  // one point each way: both directions contribute the squared gap
  Points origin(1, 3), apart(1, 3);
  origin << 0, 0, 0;
  apart << 3, 0, 0;
  CHECK(chamfer(origin, apart) == doctest::Approx(18.0).epsilon(1e-12));
}

TEST_CASE("distance terms have exact closed forms for uniform offsets") {
  Rng rng(63);
  Points gt = random_points(40, rng);

  Points shifted = gt;
  shifted.col(0).array() += 1.0;
  CHECK(vertex_l2(shifted, gt) == doctest::Approx(1.0).epsilon(1e-12));

  // doubling every residual quadruples the mean squared error
  Points noise = random_points(40, rng, 2.0);
  CHECK(vertex_l2(gt + 2.0 * noise, gt) ==
        doctest::Approx(4.0 * vertex_l2(gt + noise, gt)).epsilon(1e-12));

  // regressor rows sum to one, so a rigid translation moves every joint by
  // the same vector and the joint term is exactly its squared norm
  Eigen::SparseMatrix<double> reg(21, 40);
  std::vector<Eigen::Triplet<double>> trips;
  for (int r = 0; r < 21; ++r)
    for (int k = 0; k < 4; ++k) trips.push_back({r, (r + k) % 40, 0.25});
  reg.setFromTriplets(trips.begin(), trips.end());
  Vec3 t(2.0, -3.0, 6.0);
  Points translated_pts = gt.rowwise() + t.transpose();
  CHECK(joint_l2(translated_pts, gt, reg) ==
        doctest::Approx(t.squaredNorm()).epsilon(1e-12));
}

TEST_CASE("distance terms are invariant under a shared rigid motion") {
  Rng rng(64);
  Points a = random_points(25, rng);
  Points b = random_points(31, rng);
  Mat3 rot = axis_angle(Vec3(2, -1, 5).normalized(), 0.83);
  Vec3 t(14.0, -3.0, 7.5);
  auto move = [&](const Points& p) -> Points {
    return (p * rot.transpose()).rowwise() + t.transpose();
  };

  CHECK(chamfer(move(a), move(b)) ==
        doctest::Approx(chamfer(a, b)).epsilon(1e-9));

  Points pred = random_points(25, rng);
  CHECK(vertex_l2(move(pred), move(a)) ==
        doctest::Approx(vertex_l2(pred, a)).epsilon(1e-9));

  Eigen::SparseMatrix<double> reg(21, 25);
  std::vector<Eigen::Triplet<double>> trips;
  for (int r = 0; r < 21; ++r)
    for (int k = 0; k < 5; ++k) trips.push_back({r, (r + k) % 25, 0.2});
  reg.setFromTriplets(trips.begin(), trips.end());
  CHECK(joint_l2(move(pred), move(a), reg) ==
        doctest::Approx(joint_l2(pred, a, reg)).epsilon(1e-9));
}

TEST_CASE("edge regularizer is the population variance of edge lengths") {
  Mesh cube = make_cube(10.0);
  CHECK(edge_regularizer(cube) ==
        doctest::Approx(edge_variance_oracle(cube)).epsilon(1e-12));

  // regular octahedron: all edges the same length, variance exactly zero
  Mesh octa = make_octahedron(5.0);
  CHECK(edge_regularizer(octa) == doctest::Approx(0.0).scale(1.0).epsilon(1e-18));

  Rng rng(63);
  Mesh warped = cube;
  for (int i = 0; i < warped.vertices.size(); ++i)
    warped.vertices.data()[i] += rng.uniform(-2.0, 2.0);
  CHECK(edge_regularizer(warped) ==
        doctest::Approx(edge_variance_oracle(warped)).epsilon(1e-12));
  CHECK(edge_regularizer(warped) > 0.0);
}

TEST_CASE("laplacian loss matches the explicit neighborhood-mean oracle") {
  Rng rng(64);
  Mesh ball = make_icosphere(12.0, 1);
  for (int i = 0; i < ball.vertices.size(); ++i)
    ball.vertices.data()[i] += rng.uniform(-1.0, 1.0);
  CHECK(laplacian_loss(ball) ==
        doctest::Approx(laplacian_oracle(ball)).epsilon(1e-12));

  Points res = laplacian_residuals(ball);
  CHECK(res.rows() == ball.vertex_count());
  double acc = 0.0;
  for (int i = 0; i < res.rows(); ++i) acc += res.row(i).squaredNorm();
  CHECK(laplacian_loss(ball) ==
        doctest::Approx(acc / double(res.rows())).epsilon(1e-12));
}

TEST_CASE("mesh regularizers are rigid-motion invariant") {
  Mesh ball = make_icosphere(12.0, 1);
  Rng rng(65);
  for (int i = 0; i < ball.vertices.size(); ++i)
    ball.vertices.data()[i] += rng.uniform(-1.0, 1.0);
  double e0 = edge_regularizer(ball), l0 = laplacian_loss(ball);

  Mesh moved = rotated(translated(ball, Vec3(40, -7, 13)),
                       axis_angle(Vec3(1, 2, 3).normalized(), 1.1),
                       Vec3(5, 5, 5));
  CHECK(edge_regularizer(moved) == doctest::Approx(e0).epsilon(1e-9));
  CHECK(laplacian_loss(moved) == doctest::Approx(l0).epsilon(1e-9));
}

TEST_CASE("the objective splits into weighted hand and object terms") {
  GraspScene scene = tiny_loss_scene();
  SurfacePattern samples = object_sample_pattern(scene, 200);
  Rng rng(66);
  Points pred_hand = scene.hand_init.vertices;
  Points pred_obj = scene.obj_init.vertices;
  for (int i = 0; i < pred_hand.size(); ++i)
    pred_hand.data()[i] += rng.uniform(-1.0, 1.0);
  for (int i = 0; i < pred_obj.size(); ++i)
    pred_obj.data()[i] += rng.uniform(-1.0, 1.0);

  LossBreakdown loss = refine_loss(pred_hand, pred_obj, scene, samples);

  CHECK(loss.vertex ==
        doctest::Approx(vertex_l2(pred_hand, scene.hand_gt.vertices))
            .epsilon(1e-12));
  CHECK(loss.joint ==
        doctest::Approx(joint_l2(pred_hand, scene.hand_gt.vertices,
                                 scene.joint_regressor))
            .epsilon(1e-12));
  Mesh pred_mesh = scene.obj_init;
  pred_mesh.vertices = pred_obj;
  CHECK(loss.chamfer ==
        doctest::Approx(chamfer(pattern_points(pred_mesh, samples),
                                pattern_points(scene.obj_gt, samples)))
            .epsilon(1e-12));
  CHECK(loss.edge ==
        doctest::Approx(edge_regularizer(pred_mesh)).epsilon(1e-12));
  CHECK(loss.laplacian ==
        doctest::Approx(laplacian_loss(pred_mesh)).epsilon(1e-12));

  CHECK(loss.hand == doctest::Approx(loss.vertex + loss.joint).epsilon(1e-12));
  CHECK(loss.obj == doctest::Approx(loss.chamfer + 2.0 * loss.edge +
                                    0.1 * loss.laplacian)
                        .epsilon(1e-12));
  CHECK(loss.total == doctest::Approx(loss.hand + loss.obj).epsilon(1e-12));

  // a ground truth prediction zeroes everything except the regularizers
  LossBreakdown at_gt = refine_loss(scene.hand_gt.vertices,
                                    scene.obj_gt.vertices, scene, samples);
  CHECK(at_gt.vertex == 0.0);
  CHECK(at_gt.joint == 0.0);
  CHECK(at_gt.chamfer == 0.0);
  CHECK(at_gt.total ==
        doctest::Approx(2.0 * at_gt.edge + 0.1 * at_gt.laplacian)
            .epsilon(1e-12));
  CHECK(at_gt.total < loss.total);
}

TEST_CASE("tape objective agrees with the plain objective") {
  GraspScene scene = tiny_loss_scene(22);
  SurfacePattern samples = object_sample_pattern(scene, 150);
  ModelParams mp = init_params(8, 8, 4, 3);
  FinalGraphs graphs = build_final_graphs(
      scene.hand_init, scene.obj_init, scene.contact_indices, mp.encoder_hand,
      mp.encoder_obj, mp.attention, GraphOptions{});
  RefineResult plain = refine(scene.hand_init, scene.obj_init, graphs, mp);
  LossBreakdown want = refine_loss(plain.refined_hand.vertices,
                                   plain.refined_obj.vertices, scene, samples);

  ad::Tape tape;
  ParamVars pv = params_on_tape(tape, mp);
  TapeGraphs tg = graphs_on_tape(tape, pv, mp, scene.hand_init, scene.obj_init,
                                 scene.contact_indices, GraphOptions{});
  RefineNodes nodes = refine_on_tape(tape, tg, pv, scene.hand_init,
                                     scene.obj_init);
  LossNodes ln = loss_on_tape(tape, nodes.refined_hand, nodes.refined_obj,
                              scene, samples);

  CHECK(tape.value(ln.vertex)(0, 0) ==
        doctest::Approx(want.vertex).epsilon(1e-9));
  CHECK(tape.value(ln.joint)(0, 0) ==
        doctest::Approx(want.joint).epsilon(1e-9));
  CHECK(tape.value(ln.chamfer)(0, 0) ==
        doctest::Approx(want.chamfer).epsilon(1e-9));
  CHECK(tape.value(ln.edge)(0, 0) == doctest::Approx(want.edge).epsilon(1e-9));
  CHECK(tape.value(ln.laplacian)(0, 0) ==
        doctest::Approx(want.laplacian).epsilon(1e-9));
  CHECK(tape.value(ln.total)(0, 0) ==
        doctest::Approx(want.total).epsilon(1e-9));

  // and the tape gradient of the total is finite and nonzero
  tape.backward(ln.total);
  double gmax = 0.0;
  for (ad::Var v : pv.ordered)
    gmax = std::max(gmax, tape.grad(v).cwiseAbs().maxCoeff());
  CHECK(std::isfinite(gmax));
  CHECK(gmax > 0.0);
}

TEST_CASE("moving the prediction toward ground truth lowers the loss") {
  GraspScene scene = tiny_loss_scene(23);
  SurfacePattern samples = object_sample_pattern(scene, 200);
  double prev = std::numeric_limits<double>::infinity();
  for (double t : {0.0, 0.5, 1.0}) {
    Points ph =
        (1.0 - t) * scene.hand_init.vertices + t * scene.hand_gt.vertices;
    Points po = (1.0 - t) * scene.obj_init.vertices + t * scene.obj_gt.vertices;
    LossBreakdown loss = refine_loss(ph, po, scene, samples);
    CHECK(loss.total < prev);
    prev = loss.total;
  }
}

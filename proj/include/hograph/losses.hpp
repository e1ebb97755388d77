#pragma once

#include "hograph/autodiff.hpp"
#include "hograph/scene.hpp"

namespace hograph {

// Mean squared vertex distance, mm^2. Meshes must share topology.
double vertex_l2(const Points& pred, const Points& gt);

// Mean squared distance over the 21 regressed joints, mm^2.
double joint_l2(const Points& pred, const Points& gt,
                const Eigen::SparseMatrix<double>& regressor);

// Symmetric chamfer: mean of squared nearest-neighbor distances from a to b
// plus the same from b to a, each mean over the source set.
double chamfer(const Points& a, const Points& b);

// Population variance of the face-induced edge lengths.
double edge_regularizer(const Mesh& mesh);

// Per-vertex offset from the mean of adjacent vertices (uniform Laplacian);
// isolated vertices get a zero row.
Points laplacian_residuals(const Mesh& mesh);

// Mean squared norm of the Laplacian residuals.
double laplacian_loss(const Mesh& mesh);

struct LossBreakdown {
  double vertex, joint;          // hand terms
  double chamfer, edge, laplacian;  // object terms (unweighted values)
  double hand, obj, total;       // hand + obj with weights 2 and 0.1 applied
};

// total = (l_v + l_j) + (l_cd + 2 l_e + 0.1 l_l); the regularizers act on
// the predicted object mesh only. The chamfer term compares the sample
// pattern evaluated on the predicted mesh against the same pattern on the
// ground truth, so a perfect prediction scores exactly zero.
LossBreakdown refine_loss(const Points& pred_hand, const Points& pred_obj,
                          const GraspScene& scene,
                          const SurfacePattern& samples);

// Differentiable version of the same objective on tape nodes.
struct LossNodes {
  ad::Var vertex, joint, chamfer, edge, laplacian;
  ad::Var hand, obj, total;
};

LossNodes loss_on_tape(ad::Tape& tape, ad::Var refined_hand,
                       ad::Var refined_obj, const GraspScene& scene,
                       const SurfacePattern& samples);

}  // namespace hograph

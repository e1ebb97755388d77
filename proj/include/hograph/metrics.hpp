#pragma once

#include <string>
#include <vector>

#include "hograph/scene.hpp"

namespace hograph {

// Deepest hand vertex inside the object: max over hand vertices of
// max(0, -signed_distance to the object). Zero when disjoint. mm.
double max_penetration(const Mesh& hand, const Mesh& obj);

// Volume of voxel centers inside both meshes on a grid of `voxel_mm` cubes
// spanning the union bounding box padded by one voxel. Returns cm^3.
double intersection_volume(const Mesh& hand, const Mesh& obj,
                           double voxel_mm = 5.0);

struct SceneMetrics {
  double hand_joint_error_mm;   // mean Euclidean over 21 regressed joints
  double hand_mesh_error_mm;    // mean per-vertex Euclidean
  double object_error_mm;       // symmetric chamfer against the gt vertices
  double max_pen_mm;
  double inter_vol_cm3;
};

SceneMetrics evaluate_scene(const Mesh& hand, const Mesh& obj,
                            const GraspScene& scene);

// Per-scene records plus their mean, every value rounded to two decimals.
// `initial` holds the metrics of the perturbed inputs, `refine` the metrics
// of the refined meshes.
std::string metrics_report_json(const std::vector<SceneMetrics>& initial,
                                const std::vector<SceneMetrics>& refined);

SceneMetrics mean_metrics(const std::vector<SceneMetrics>& metrics);

}  // namespace hograph

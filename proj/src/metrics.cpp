#include "hograph/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "hograph/losses.hpp"

using nlohmann::json;

namespace hograph {

double max_penetration(const Mesh& hand, const Mesh& obj) {
  require_watertight(obj);
  auto [lo, hi] = bounding_box(obj);
  double deepest = 0.0;
  for (long i = 0; i < hand.vertices.rows(); ++i) {
    Vec3 p = hand.vertices.row(i).transpose();
    // Points outside the bounding box are outside the mesh.
    if ((p.array() < lo.array()).any() || (p.array() > hi.array()).any())
      continue;
    if (generalized_winding_number(p, obj) <= 0.5) continue;
    double best2 = std::numeric_limits<double>::infinity();
    for (int f = 0; f < obj.face_count(); ++f) {
      Vec3 q = detail::closest_point_on_triangle(
          p, obj.vertices.row(obj.faces(f, 0)).transpose(),
          obj.vertices.row(obj.faces(f, 1)).transpose(),
          obj.vertices.row(obj.faces(f, 2)).transpose());
      best2 = std::min(best2, (q - p).squaredNorm());
    }
    deepest = std::max(deepest, std::sqrt(best2));
  }
  return deepest;
}

double intersection_volume(const Mesh& hand, const Mesh& obj,
                           double voxel_mm) {
  require_watertight(hand);
  require_watertight(obj);
  auto [hlo, hhi] = bounding_box(hand);
  auto [olo, ohi] = bounding_box(obj);
  Vec3 lo = hlo.cwiseMin(olo).array() - voxel_mm;
  Vec3 hi = hhi.cwiseMax(ohi).array() + voxel_mm;

  // A voxel center inside both meshes lies in both bounding boxes; restrict
  // the scan to that overlap.
  Vec3 over_lo = hlo.cwiseMax(olo), over_hi = hhi.cwiseMin(ohi);
  if ((over_lo.array() > over_hi.array()).any()) return 0.0;

  int i0[3], i1[3];
  for (int a = 0; a < 3; ++a) {
    int count = int(std::ceil((hi[a] - lo[a]) / voxel_mm));
    auto cell = [&](double x) { return int(std::floor((x - lo[a]) / voxel_mm)); };
    i0[a] = std::max(0, cell(over_lo[a]));
    i1[a] = std::min(count - 1, cell(over_hi[a]));
  }

  long count = 0;
  for (int i = i0[0]; i <= i1[0]; ++i)
    for (int j = i0[1]; j <= i1[1]; ++j)
      for (int k = i0[2]; k <= i1[2]; ++k) {
        Vec3 c = lo + voxel_mm * Vec3(i + 0.5, j + 0.5, k + 0.5);
        if (generalized_winding_number(c, obj) <= 0.5) continue;
        if (generalized_winding_number(c, hand) <= 0.5) continue;
        ++count;
      }
  return double(count) * voxel_mm * voxel_mm * voxel_mm / 1000.0;
}

SceneMetrics evaluate_scene(const Mesh& hand, const Mesh& obj,
                            const GraspScene& scene) {
  SceneMetrics m;
  Mat jp = scene.joint_regressor * hand.vertices;
  Mat jg = scene.joint_regressor * scene.hand_gt.vertices;
  m.hand_joint_error_mm = (jp - jg).rowwise().norm().mean();
  m.hand_mesh_error_mm =
      (hand.vertices - scene.hand_gt.vertices).rowwise().norm().mean();
  m.object_error_mm = chamfer(obj.vertices, scene.obj_gt.vertices);
  m.max_pen_mm = max_penetration(hand, obj);
  m.inter_vol_cm3 = intersection_volume(hand, obj);
  return m;
}

namespace {

double round2(double x) { return std::round(x * 100.0) / 100.0; }

json metrics_to_json(const SceneMetrics& m) {
  return json{{"hand_joint_error_mm", round2(m.hand_joint_error_mm)},
              {"hand_mesh_error_mm", round2(m.hand_mesh_error_mm)},
              {"object_error_mm", round2(m.object_error_mm)},
              {"max_pen_mm", round2(m.max_pen_mm)},
              {"inter_vol_cm3", round2(m.inter_vol_cm3)}};
}

json block_to_json(const std::vector<SceneMetrics>& per_scene) {
  json scenes = json::array();
  std::vector<SceneMetrics> rounded;
  for (const auto& m : per_scene) {
    SceneMetrics r{round2(m.hand_joint_error_mm), round2(m.hand_mesh_error_mm),
                   round2(m.object_error_mm), round2(m.max_pen_mm),
                   round2(m.inter_vol_cm3)};
    rounded.push_back(r);
    scenes.push_back(metrics_to_json(m));
  }
  return json{{"scenes", scenes},
              {"mean", metrics_to_json(mean_metrics(rounded))}};
}

}  // namespace

SceneMetrics mean_metrics(const std::vector<SceneMetrics>& metrics) {
  SceneMetrics m{0, 0, 0, 0, 0};
  for (const auto& s : metrics) {
    m.hand_joint_error_mm += s.hand_joint_error_mm;
    m.hand_mesh_error_mm += s.hand_mesh_error_mm;
    m.object_error_mm += s.object_error_mm;
    m.max_pen_mm += s.max_pen_mm;
    m.inter_vol_cm3 += s.inter_vol_cm3;
  }
  double n = std::max<size_t>(metrics.size(), 1);
  m.hand_joint_error_mm /= n;
  m.hand_mesh_error_mm /= n;
  m.object_error_mm /= n;
  m.max_pen_mm /= n;
  m.inter_vol_cm3 /= n;
  return m;
}

std::string metrics_report_json(const std::vector<SceneMetrics>& initial,
                                const std::vector<SceneMetrics>& refined) {
  json j;
  j["initial"] = block_to_json(initial);
  j["refine"] = block_to_json(refined);
  return j.dump(2) + "\n";
}

}  // namespace hograph

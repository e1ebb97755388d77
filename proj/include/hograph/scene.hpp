#pragma once

#include <Eigen/SparseCore>
#include <string>
#include <vector>

#include "hograph/mesh.hpp"

namespace hograph {

enum class ObjectKind { sphere, box, cylinder };

std::string to_string(ObjectKind kind);
ObjectKind object_kind_from_string(const std::string& name);

// Icosahedron subdivided `subdivisions` times and projected to the sphere;
// 10 * 4^s + 2 vertices, watertight, outward winding.
Mesh make_icosphere(double radius, int subdivisions);

// Axis-aligned box whose surface is an (s+1)^3 boundary lattice, s chosen as
// the smallest subdivision with at least `resolution` vertices.
Mesh make_box(const Vec3& extents, int resolution);

// Closed cylinder along z with ring count derived from `resolution`.
Mesh make_cylinder(double radius, double height, int resolution);

// `size` is (radius, -, -) for spheres, full extents for boxes and
// (radius, height, -) for cylinders. The mesh is centered at the origin.
Mesh make_object(ObjectKind kind, const Vec3& size, int resolution);

struct HandPose {
  // Orbit radius of the finger joint centers around the origin.
  double grasp_radius = 45.0;
  double curl = 0.5;    // in [0, 1], controls how far fingers wrap
  double spread = 0.5;  // in [0, 1], controls finger plane spacing
};

struct Hand {
  Mesh mesh;
  // Vertices expected to touch the object: fingertip caps and inner palm.
  std::vector<int> contact_indices;
  // 21 x n, rows sum to 1: wrist then 4 joints per finger, thumb first.
  Eigen::SparseMatrix<double> joint_regressor;
};

// Procedural hand: a box palm plus five fingers of three capsules each,
// wrapped around a sphere of radius `pose.grasp_radius` centered at the
// origin. Deterministic in (pose, seed).
Hand make_hand(const HandPose& pose, uint64_t seed);

struct PerturbNoise {
  double vertex_sigma = 3.0;    // mm, control-lattice Gaussian per axis
  double translation = 10.0;    // mm, fixed magnitude, random direction
  double rotation_deg = 0.0;    // fixed angle, random axis through centroid
};

// Smooth corruption: rotation about the centroid, low-frequency vertex noise
// from a trilinearly interpolated 4x4x4 control lattice, then translation.
// Topology is untouched. Zero noise returns the input bit-exactly.
Mesh perturb(const Mesh& mesh, const PerturbNoise& noise, uint64_t seed);

struct GraspScene {
  Mesh hand_gt, obj_gt;
  Mesh hand_init, obj_init;
  std::vector<int> contact_indices;
  Eigen::SparseMatrix<double> joint_regressor;  // 21 x hand vertex count
  ObjectKind kind = ObjectKind::sphere;
  uint64_t seed = 0;
};

struct SceneParams {
  ObjectKind kind = ObjectKind::sphere;
  int object_resolution = 162;
  PerturbNoise noise;
};

// Ground truth grasp (hand wrapped around the object, penetration free) plus
// perturbed initial meshes. Deterministic in (params, seed).
GraspScene make_scene(const SceneParams& params, uint64_t seed);

// Object kind cycles sphere, box, cylinder; scene i is seeded mix(seed, i).
std::vector<GraspScene> synth_scenes(int count, const PerturbNoise& noise,
                                     int object_resolution, uint64_t seed);

// Directory layout: hand_gt.obj, obj_gt.obj, hand_init.obj, obj_init.obj,
// contact.json, regressor.json (sparse triplets), meta.json.
void save_scene(const GraspScene& scene, const std::string& dir);
GraspScene load_scene(const std::string& dir);

// Writes scene_%04d directories plus manifest.json listing them.
void save_scene_set(const std::vector<GraspScene>& scenes,
                    const PerturbNoise& noise, uint64_t seed,
                    const std::string& dir);
std::vector<GraspScene> load_scene_set(const std::string& dir);

// Fixed area-weighted sample pattern over the ground-truth object surface,
// seeded from the scene seed; the chamfer term evaluates it on both the
// predicted and the ground-truth mesh.
SurfacePattern object_sample_pattern(const GraspScene& scene, int count);

// The pattern's points on the ground-truth object mesh.
Points object_samples(const GraspScene& scene, int count);

}  // namespace hograph

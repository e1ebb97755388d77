#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hograph/types.hpp"

namespace hograph {

// Triangle mesh, vertices in millimeters, faces 0-based and counter-clockwise
// when seen from outside.
struct Mesh {
  Points vertices;
  Faces faces;

  int vertex_count() const { return int(vertices.rows()); }
  int face_count() const { return int(faces.rows()); }
};

// Throws std::runtime_error naming the first violated structural invariant
// (index out of range, degenerate face).
void validate_mesh(const Mesh& mesh);

// OBJ subset: `v x y z` and `f i j k [l ...]` with 1-based indices, `#`
// comments, everything else ignored. Polygons are fan-triangulated. Parse
// errors report the offending line number.
Mesh load_mesh(const std::string& path);

// Writes vertices then faces, coordinates with six decimals.
void save_mesh(const Mesh& mesh, const std::string& path);

// Unordered vertex pairs {i, j} with i < j induced by the faces, sorted.
std::vector<std::array<int, 2>> vertex_adjacency(const Mesh& mesh);

// A mesh is watertight when every undirected edge is shared by exactly two
// faces traversing it in opposite directions. Returns an offending edge if
// the mesh is not, std::nullopt otherwise.
std::optional<std::array<int, 2>> watertight_violation(const Mesh& mesh);

// Throws std::runtime_error naming the offending edge.
void require_watertight(const Mesh& mesh);

// Sum of the signed solid angles of all faces divided by 4 pi. Close to 1
// inside a watertight mesh and close to 0 outside.
double generalized_winding_number(const Vec3& point, const Mesh& mesh);

struct SignedDistance {
  double distance;  // negative inside
  Vec3 closest_point;
  int face_index;
};

// Distance to the closest surface point, sign from the generalized winding
// number (inside when it exceeds 1/2). Ties between faces keep the lowest
// face index. Requires a watertight mesh.
SignedDistance signed_distance(const Vec3& point, const Mesh& mesh);

Vec3 centroid(const Mesh& mesh);

// Component-wise min and max corner.
std::array<Vec3, 2> bounding_box(const Mesh& mesh);

// Signed volume by the divergence theorem, positive for outward winding.
double mesh_volume(const Mesh& mesh);

Mesh translated(const Mesh& mesh, const Vec3& offset);

// Rotates vertices about a pivot point.
Mesh rotated(const Mesh& mesh, const Mat3& rotation, const Vec3& pivot);

// Rodrigues rotation about a unit axis.
Mat3 axis_angle(const Vec3& axis, double angle);

// A fixed set of surface locations: face index plus barycentric weights per
// sample. Evaluating the same pattern on two meshes with shared topology
// yields corresponding point sets.
struct SurfacePattern {
  Eigen::VectorXi faces;  // count
  Mat bary;               // count x 3, rows sum to 1
};

// Area-weighted random pattern, deterministic in the seed.
SurfacePattern sample_pattern(const Mesh& mesh, int count, uint64_t seed);

// Points of the pattern on a mesh with the same face table.
Points pattern_points(const Mesh& mesh, const SurfacePattern& pattern);

// Area-weighted surface samples, deterministic in the seed.
Points sample_surface(const Mesh& mesh, int count, uint64_t seed);

namespace detail {
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b,
                               const Vec3& c);
}

}  // namespace hograph

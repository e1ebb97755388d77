#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hograph/mesh.hpp"
#include "hograph/rng.hpp"

namespace hograph::test {

// Unit cube scaled by `half`, centered at `center`, outward winding.
inline Mesh make_cube(double half = 0.5, const Vec3& center = Vec3::Zero()) {
  Mesh m;
  m.vertices.resize(8, 3);
  int row = 0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z)
        m.vertices.row(row++) =
            (center + half * Vec3(2 * x - 1, 2 * y - 1, 2 * z - 1)).transpose();
  m.faces.resize(12, 3);
  m.faces << 0, 1, 3, 0, 3, 2,    // -x
      4, 6, 7, 4, 7, 5,           // +x
      0, 4, 5, 0, 5, 1,           // -y
      2, 3, 7, 2, 7, 6,           // +y
      0, 2, 6, 0, 6, 4,           // -z
      1, 5, 7, 1, 7, 3;           // +z
  return m;
}

inline Mesh make_octahedron(double r = 1.0, const Vec3& center = Vec3::Zero()) {
  Mesh m;
  m.vertices.resize(6, 3);
  m.vertices << r, 0, 0, -r, 0, 0, 0, r, 0, 0, -r, 0, 0, 0, r, 0, 0, -r;
  m.vertices.rowwise() += center.transpose();
  m.faces.resize(8, 3);
  m.faces << 0, 2, 4, 2, 1, 4, 1, 3, 4, 3, 0, 4, 2, 0, 5, 1, 2, 5, 3, 1, 5, 0,
      3, 5;
  return m;
}

// Moller-Trumbore; used to count ray crossings for the parity oracle.
inline bool ray_hits_triangle(const Vec3& o, const Vec3& d, const Vec3& a,
                              const Vec3& b, const Vec3& c) {
  Vec3 e1 = b - a, e2 = c - a;
  Vec3 p = d.cross(e2);
  double det = e1.dot(p);
  if (std::abs(det) < 1e-12) return false;
  double inv = 1.0 / det;
  Vec3 t = o - a;
  double u = t.dot(p) * inv;
  if (u < 0.0 || u > 1.0) return false;
  Vec3 q = t.cross(e1);
  double v = d.dot(q) * inv;
  if (v < 0.0 || u + v > 1.0) return false;
  return e2.dot(q) * inv > 0.0;
}

inline bool inside_by_ray_parity(const Vec3& p, const Mesh& mesh) {
  const Vec3 dir = Vec3(0.8509035, 0.3782986, 0.3646061).normalized();
  int crossings = 0;
  for (int f = 0; f < mesh.face_count(); ++f)
    if (ray_hits_triangle(p, dir, mesh.vertices.row(mesh.faces(f, 0)).transpose(),
                          mesh.vertices.row(mesh.faces(f, 1)).transpose(),
                          mesh.vertices.row(mesh.faces(f, 2)).transpose()))
      ++crossings;
  return crossings % 2 == 1;
}

// Independent point-triangle squared distance: minimum over the three
// vertices, the three clamped edge projections and the interior projection.
inline double point_triangle_dist2_oracle(const Vec3& p, const Vec3& a,
                                          const Vec3& b, const Vec3& c) {
  double best = std::min({(p - a).squaredNorm(), (p - b).squaredNorm(),
                          (p - c).squaredNorm()});
  auto edge = [&](const Vec3& u, const Vec3& v) {
    double t = (p - u).dot(v - u) / (v - u).squaredNorm();
    t = std::clamp(t, 0.0, 1.0);
    best = std::min(best, (p - (u + t * (v - u))).squaredNorm());
  };
  edge(a, b);
  edge(b, c);
  edge(c, a);
  Vec3 n = (b - a).cross(c - a);
  double n2 = n.squaredNorm();
  if (n2 > 0) {
    Vec3 q = p - n * (p - a).dot(n) / n2;
    // barycentric coordinates of the projection
    Vec3 v0 = b - a, v1 = c - a, v2 = q - a;
    double d00 = v0.dot(v0), d01 = v0.dot(v1), d11 = v1.dot(v1);
    double d20 = v2.dot(v0), d21 = v2.dot(v1);
    double denom = d00 * d11 - d01 * d01;
    double bv = (d11 * d20 - d01 * d21) / denom;
    double bw = (d00 * d21 - d01 * d20) / denom;
    if (bv >= 0 && bw >= 0 && bv + bw <= 1)
      best = std::min(best, (p - q).squaredNorm());
  }
  return best;
}

inline double brute_unsigned_distance(const Vec3& p, const Mesh& mesh) {
  double best = std::numeric_limits<double>::infinity();
  for (int f = 0; f < mesh.face_count(); ++f)
    best = std::min(best, point_triangle_dist2_oracle(
                              p, mesh.vertices.row(mesh.faces(f, 0)).transpose(),
                              mesh.vertices.row(mesh.faces(f, 1)).transpose(),
                              mesh.vertices.row(mesh.faces(f, 2)).transpose()));
  return std::sqrt(best);
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    dir_ = std::filesystem::temp_directory_path() /
           ("hograph_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() { std::filesystem::remove_all(dir_); }
  std::filesystem::path path() const { return dir_; }
  std::string str(const std::string& rel = "") const {
    return rel.empty() ? dir_.string() : (dir_ / rel).string();
  }

 private:
  std::filesystem::path dir_;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace hograph::test

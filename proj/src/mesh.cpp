#include "hograph/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "hograph/rng.hpp"

namespace hograph {

void validate_mesh(const Mesh& mesh) {
  const int n = mesh.vertex_count();
  for (int f = 0; f < mesh.face_count(); ++f) {
    int a = mesh.faces(f, 0), b = mesh.faces(f, 1), c = mesh.faces(f, 2);
    if (a < 0 || a >= n || b < 0 || b >= n || c < 0 || c >= n)
      throw std::runtime_error("face " + std::to_string(f) +
                               " references a vertex out of range");
    if (a == b || b == c || a == c)
      throw std::runtime_error("face " + std::to_string(f) +
                               " is degenerate (repeated vertex)");
  }
}

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  std::vector<Vec3> verts;
  std::vector<std::array<int, 3>> tris;
  std::vector<int> tri_lines;
  std::string line;
  int lineno = 0;

  auto fail = [&](const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;
    if (tag == "v") {
      Vec3 v;
      if (!(ss >> v.x() >> v.y() >> v.z())) fail("vertex needs 3 coordinates");
      verts.push_back(v);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ss >> tok) {
        char* end = nullptr;
        long i = std::strtol(tok.c_str(), &end, 10);
        if (tok.empty() || end != tok.c_str() + tok.size())
          fail("bad face index '" + tok + "'");
        idx.push_back(int(i));
      }
      if (idx.size() < 3) fail("face needs at least 3 indices");
      for (size_t k = 1; k + 1 < idx.size(); ++k) {
        tris.push_back({idx[0] - 1, idx[k] - 1, idx[k + 1] - 1});
        tri_lines.push_back(lineno);
      }
    }
    // other line types are ignored
  }

  Mesh mesh;
  mesh.vertices.resize(long(verts.size()), 3);
  for (size_t i = 0; i < verts.size(); ++i) mesh.vertices.row(long(i)) = verts[i];
  mesh.faces.resize(long(tris.size()), 3);
  for (size_t f = 0; f < tris.size(); ++f) {
    lineno = tri_lines[f];
    for (int k = 0; k < 3; ++k) {
      int i = tris[f][k];
      if (i < 0 || i >= int(verts.size()))
        fail("face index " + std::to_string(i + 1) + " out of range");
      mesh.faces(long(f), k) = i;
    }
    if (tris[f][0] == tris[f][1] || tris[f][1] == tris[f][2] ||
        tris[f][0] == tris[f][2])
      fail("degenerate face (repeated vertex)");
  }
  return mesh;
}

void save_mesh(const Mesh& mesh, const std::string& path) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw std::runtime_error("cannot write " + path);
  for (long i = 0; i < mesh.vertices.rows(); ++i)
    std::fprintf(out, "v %.6f %.6f %.6f\n", mesh.vertices(i, 0),
                 mesh.vertices(i, 1), mesh.vertices(i, 2));
  for (long f = 0; f < mesh.faces.rows(); ++f)
    std::fprintf(out, "f %d %d %d\n", mesh.faces(f, 0) + 1,
                 mesh.faces(f, 1) + 1, mesh.faces(f, 2) + 1);
  std::fclose(out);
}

std::vector<std::array<int, 2>> vertex_adjacency(const Mesh& mesh) {
  std::vector<std::array<int, 2>> edges;
  edges.reserve(size_t(mesh.face_count()) * 3);
  for (int f = 0; f < mesh.face_count(); ++f) {
    for (int k = 0; k < 3; ++k) {
      int i = mesh.faces(f, k), j = mesh.faces(f, (k + 1) % 3);
      edges.push_back({std::min(i, j), std::max(i, j)});
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

std::optional<std::array<int, 2>> watertight_violation(const Mesh& mesh) {
  // Counts directed half-edges; closed orientable manifolds have every
  // undirected edge appear once per direction.
  std::map<std::array<int, 2>, int> forward, backward;
  for (int f = 0; f < mesh.face_count(); ++f) {
    for (int k = 0; k < 3; ++k) {
      int i = mesh.faces(f, k), j = mesh.faces(f, (k + 1) % 3);
      if (i < j)
        forward[{i, j}]++;
      else
        backward[{j, i}]++;
    }
  }
  for (const auto& [e, c] : forward) {
    auto it = backward.find(e);
    if (c != 1 || it == backward.end() || it->second != 1) return e;
  }
  for (const auto& [e, c] : backward) {
    (void)c;
    if (forward.find(e) == forward.end()) return e;
  }
  return std::nullopt;
}

void require_watertight(const Mesh& mesh) {
  if (auto e = watertight_violation(mesh))
    throw std::runtime_error("mesh is not watertight at edge (" +
                             std::to_string((*e)[0]) + ", " +
                             std::to_string((*e)[1]) + ")");
}

double generalized_winding_number(const Vec3& point, const Mesh& mesh) {
  double omega = 0.0;
  for (int f = 0; f < mesh.face_count(); ++f) {
    Vec3 a = mesh.vertices.row(mesh.faces(f, 0)).transpose() - point;
    Vec3 b = mesh.vertices.row(mesh.faces(f, 1)).transpose() - point;
    Vec3 c = mesh.vertices.row(mesh.faces(f, 2)).transpose() - point;
    double la = a.norm(), lb = b.norm(), lc = c.norm();
    double num = a.dot(b.cross(c));
    double den = la * lb * lc + a.dot(b) * lc + b.dot(c) * la + c.dot(a) * lb;
    omega += 2.0 * std::atan2(num, den);
  }
  return omega / (4.0 * M_PI);
}

namespace detail {

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b,
                               const Vec3& c) {
  Vec3 ab = b - a, ac = c - a, ap = p - a;
  double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;

  Vec3 bp = p - b;
  double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;

  double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + ab * (d1 / (d1 - d3));

  Vec3 cp = p - c;
  double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;

  double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + ac * (d2 / (d2 - d6));

  double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && d4 - d3 >= 0.0 && d5 - d6 >= 0.0) {
    double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return b + (c - b) * w;
  }

  double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

}  // namespace detail

SignedDistance signed_distance(const Vec3& point, const Mesh& mesh) {
  require_watertight(mesh);
  if (mesh.face_count() == 0)
    throw std::runtime_error("signed_distance on empty mesh");

  double best2 = std::numeric_limits<double>::infinity();
  Vec3 best_point = Vec3::Zero();
  int best_face = -1;
  for (int f = 0; f < mesh.face_count(); ++f) {
    Vec3 q = detail::closest_point_on_triangle(
        point, mesh.vertices.row(mesh.faces(f, 0)).transpose(),
        mesh.vertices.row(mesh.faces(f, 1)).transpose(),
        mesh.vertices.row(mesh.faces(f, 2)).transpose());
    double d2 = (q - point).squaredNorm();
    if (d2 < best2) {
      best2 = d2;
      best_point = q;
      best_face = f;
    }
  }
  double d = std::sqrt(best2);
  if (generalized_winding_number(point, mesh) > 0.5) d = -d;
  return {d, best_point, best_face};
}

Vec3 centroid(const Mesh& mesh) {
  return mesh.vertices.colwise().mean().transpose();
}

std::array<Vec3, 2> bounding_box(const Mesh& mesh) {
  return {mesh.vertices.colwise().minCoeff().transpose(),
          mesh.vertices.colwise().maxCoeff().transpose()};
}

double mesh_volume(const Mesh& mesh) {
  double v = 0.0;
  for (int f = 0; f < mesh.face_count(); ++f) {
    Vec3 a = mesh.vertices.row(mesh.faces(f, 0)).transpose();
    Vec3 b = mesh.vertices.row(mesh.faces(f, 1)).transpose();
    Vec3 c = mesh.vertices.row(mesh.faces(f, 2)).transpose();
    v += a.dot(b.cross(c));
  }
  return v / 6.0;
}

Mesh translated(const Mesh& mesh, const Vec3& offset) {
  Mesh out = mesh;
  out.vertices.rowwise() += offset.transpose();
  return out;
}

Mesh rotated(const Mesh& mesh, const Mat3& rotation, const Vec3& pivot) {
  Mesh out = mesh;
  out.vertices = ((mesh.vertices.rowwise() - pivot.transpose()) *
                  rotation.transpose())
                     .rowwise() +
                 pivot.transpose();
  return out;
}

Mat3 axis_angle(const Vec3& axis, double angle) {
  double c = std::cos(angle), s = std::sin(angle);
  Mat3 k;
  k << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
  return Mat3::Identity() * c + k * s + axis * axis.transpose() * (1.0 - c);
}

SurfacePattern sample_pattern(const Mesh& mesh, int count, uint64_t seed) {
  std::vector<double> cum(size_t(mesh.face_count()));
  double total = 0.0;
  for (int f = 0; f < mesh.face_count(); ++f) {
    Vec3 a = mesh.vertices.row(mesh.faces(f, 0)).transpose();
    Vec3 b = mesh.vertices.row(mesh.faces(f, 1)).transpose();
    Vec3 c = mesh.vertices.row(mesh.faces(f, 2)).transpose();
    total += 0.5 * (b - a).cross(c - a).norm();
    cum[size_t(f)] = total;
  }
  if (total <= 0.0) throw std::runtime_error("sample_pattern on zero-area mesh");

  Rng rng(seed);
  SurfacePattern out;
  out.faces.resize(count);
  out.bary.resize(count, 3);
  for (int i = 0; i < count; ++i) {
    double t = rng.uniform() * total;
    int f = int(std::lower_bound(cum.begin(), cum.end(), t) - cum.begin());
    if (f >= mesh.face_count()) f = mesh.face_count() - 1;
    double u = rng.uniform(), v = rng.uniform();
    if (u + v > 1.0) {
      u = 1.0 - u;
      v = 1.0 - v;
    }
    out.faces(i) = f;
    out.bary(i, 0) = 1.0 - u - v;
    out.bary(i, 1) = u;
    out.bary(i, 2) = v;
  }
  return out;
}

Points pattern_points(const Mesh& mesh, const SurfacePattern& pattern) {
  Points out(pattern.faces.size(), 3);
  for (int i = 0; i < pattern.faces.size(); ++i) {
    int f = pattern.faces(i);
    out.row(i) = pattern.bary(i, 0) * mesh.vertices.row(mesh.faces(f, 0)) +
                 pattern.bary(i, 1) * mesh.vertices.row(mesh.faces(f, 1)) +
                 pattern.bary(i, 2) * mesh.vertices.row(mesh.faces(f, 2));
  }
  return out;
}

Points sample_surface(const Mesh& mesh, int count, uint64_t seed) {
  return pattern_points(mesh, sample_pattern(mesh, count, seed));
}

}  // namespace hograph

#include "hograph/scene.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "hograph/metrics.hpp"
#include "hograph/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace hograph {

std::string to_string(ObjectKind kind) {
  switch (kind) {
    case ObjectKind::sphere: return "sphere";
    case ObjectKind::box: return "box";
    case ObjectKind::cylinder: return "cylinder";
  }
  return "sphere";
}

ObjectKind object_kind_from_string(const std::string& name) {
  if (name == "sphere") return ObjectKind::sphere;
  if (name == "box") return ObjectKind::box;
  if (name == "cylinder") return ObjectKind::cylinder;
  throw std::runtime_error("unknown object kind '" + name + "'");
}

Mesh make_icosphere(double radius, int subdivisions) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> verts = {
      {-1, t, 0}, {1, t, 0},   {-1, -t, 0}, {1, -t, 0},
      {0, -1, t}, {0, 1, t},   {0, -1, -t}, {0, 1, -t},
      {t, 0, -1}, {t, 0, 1},   {-t, 0, -1}, {-t, 0, 1}};
  for (Vec3& v : verts) v.normalize();
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec3 m = (verts[size_t(a)] + verts[size_t(b)]).normalized();
      verts.push_back(m);
      int idx = int(verts.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }

  Mesh mesh;
  mesh.vertices.resize(long(verts.size()), 3);
  for (size_t i = 0; i < verts.size(); ++i)
    mesh.vertices.row(long(i)) = (radius * verts[i]).transpose();
  mesh.faces.resize(long(faces.size()), 3);
  for (size_t f = 0; f < faces.size(); ++f)
    for (int k = 0; k < 3; ++k) mesh.faces(long(f), k) = faces[f][k];
  return mesh;
}

namespace {

// Boundary lattice box builder shared by make_box and the hand palm.
// `face_class` (optional) receives, per vertex, a bitmask of which of the six
// box faces it lies on: bits 0..5 = -x, +x, -y, +y, -z, +z.
Mesh lattice_box(const Vec3& extents, int s, std::vector<int>* face_class) {
  std::unordered_map<int, int> index;
  std::vector<Vec3> verts;
  std::vector<int> klass;
  auto vid = [&](int i, int j, int k) {
    int key = (i * (s + 1) + j) * (s + 1) + k;
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    Vec3 p(extents.x() * (double(i) / s - 0.5),
           extents.y() * (double(j) / s - 0.5),
           extents.z() * (double(k) / s - 0.5));
    verts.push_back(p);
    int mask = (i == 0 ? 1 : 0) | (i == s ? 2 : 0) | (j == 0 ? 4 : 0) |
               (j == s ? 8 : 0) | (k == 0 ? 16 : 0) | (k == s ? 32 : 0);
    klass.push_back(mask);
    int idx = int(verts.size()) - 1;
    index.emplace(key, idx);
    return idx;
  };

  std::vector<std::array<int, 3>> tris;
  auto quad = [&](int a, int b, int c, int d) {
    tris.push_back({a, b, c});
    tris.push_back({a, c, d});
  };
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b) {
      quad(vid(0, a, b), vid(0, a, b + 1), vid(0, a + 1, b + 1),
           vid(0, a + 1, b));
      quad(vid(s, a, b), vid(s, a + 1, b), vid(s, a + 1, b + 1),
           vid(s, a, b + 1));
      quad(vid(a, 0, b), vid(a + 1, 0, b), vid(a + 1, 0, b + 1),
           vid(a, 0, b + 1));
      quad(vid(a, s, b), vid(a, s, b + 1), vid(a + 1, s, b + 1),
           vid(a + 1, s, b));
      quad(vid(a, b, 0), vid(a, b + 1, 0), vid(a + 1, b + 1, 0),
           vid(a + 1, b, 0));
      quad(vid(a, b, s), vid(a + 1, b, s), vid(a + 1, b + 1, s),
           vid(a, b + 1, s));
    }

  Mesh mesh;
  mesh.vertices.resize(long(verts.size()), 3);
  for (size_t i = 0; i < verts.size(); ++i)
    mesh.vertices.row(long(i)) = verts[i].transpose();
  mesh.faces.resize(long(tris.size()), 3);
  for (size_t f = 0; f < tris.size(); ++f)
    for (int k = 0; k < 3; ++k) mesh.faces(long(f), k) = tris[f][k];
  if (face_class) *face_class = std::move(klass);
  return mesh;
}

int lattice_vertex_count(int s) {
  int a = s + 1, b = s - 1;
  return a * a * a - b * b * b;
}

}  // namespace

Mesh make_box(const Vec3& extents, int resolution) {
  int s = 1;
  while (lattice_vertex_count(s) < resolution && s < 64) ++s;
  return lattice_box(extents, s, nullptr);
}

Mesh make_cylinder(double radius, double height, int resolution) {
  int n = std::max(4, (resolution - 2 + 1) / 2);
  std::vector<Vec3> verts;
  verts.reserve(size_t(2 * n + 2));
  verts.emplace_back(0, 0, -height / 2);  // bottom center
  verts.emplace_back(0, 0, height / 2);   // top center
  for (int k = 0; k < n; ++k) {
    double a = 2.0 * M_PI * k / n;
    verts.emplace_back(radius * std::cos(a), radius * std::sin(a),
                       -height / 2);
  }
  for (int k = 0; k < n; ++k) {
    double a = 2.0 * M_PI * k / n;
    verts.emplace_back(radius * std::cos(a), radius * std::sin(a), height / 2);
  }

  std::vector<std::array<int, 3>> tris;
  auto bot = [&](int k) { return 2 + (k % n); };
  auto top = [&](int k) { return 2 + n + (k % n); };
  for (int k = 0; k < n; ++k) {
    tris.push_back({0, bot(k + 1), bot(k)});
    tris.push_back({1, top(k), top(k + 1)});
    tris.push_back({bot(k), bot(k + 1), top(k + 1)});
    tris.push_back({bot(k), top(k + 1), top(k)});
  }

  Mesh mesh;
  mesh.vertices.resize(long(verts.size()), 3);
  for (size_t i = 0; i < verts.size(); ++i)
    mesh.vertices.row(long(i)) = verts[i].transpose();
  mesh.faces.resize(long(tris.size()), 3);
  for (size_t f = 0; f < tris.size(); ++f)
    for (int k = 0; k < 3; ++k) mesh.faces(long(f), k) = tris[f][k];
  return mesh;
}

Mesh make_object(ObjectKind kind, const Vec3& size, int resolution) {
  switch (kind) {
    case ObjectKind::sphere: {
      int s = 0;
      while (10 * (1 << (2 * s)) + 2 < resolution && s < 6) ++s;
      return make_icosphere(size.x(), s);
    }
    case ObjectKind::box:
      return make_box(size, resolution);
    case ObjectKind::cylinder:
      return make_cylinder(size.x(), size.y(), resolution);
  }
  throw std::runtime_error("unknown object kind");
}

namespace {

struct CapsuleIds {
  int bottom_pole = -1, top_pole = -1;
  std::vector<int> bottom, top;  // hemisphere rings excluding poles
};

constexpr int kCapSegs = 8;
constexpr int kCapRings = 3;  // rings per hemisphere

CapsuleIds add_capsule(std::vector<Vec3>& verts,
                       std::vector<std::array<int, 3>>& tris, const Vec3& p0,
                       const Vec3& p1, double radius) {
  Vec3 d = p1 - p0;
  double len = d.norm();
  d = len > 1e-12 ? Vec3(d / len) : Vec3(0, 0, 1);
  Vec3 u = std::abs(d.x()) < 0.9 ? Vec3(1, 0, 0) : Vec3(0, 1, 0);
  u = (u - d * u.dot(d)).normalized();
  Vec3 v = d.cross(u);

  CapsuleIds ids;
  int base = int(verts.size());
  verts.push_back(p0 - radius * d);
  ids.bottom_pole = base;

  std::vector<std::vector<int>> rings;
  auto add_ring = [&](const Vec3& center, double along, double lateral) {
    std::vector<int> ring(kCapSegs);
    for (int k = 0; k < kCapSegs; ++k) {
      double a = 2.0 * M_PI * k / kCapSegs;
      ring[size_t(k)] = int(verts.size());
      verts.push_back(center + along * d +
                      lateral * (std::cos(a) * u + std::sin(a) * v));
    }
    rings.push_back(ring);
    return ring;
  };

  for (int i = 1; i <= kCapRings; ++i) {
    double phi = (M_PI / 2) * i / kCapRings;
    auto ring = add_ring(p0, -radius * std::cos(phi), radius * std::sin(phi));
    ids.bottom.insert(ids.bottom.end(), ring.begin(), ring.end());
  }
  for (int i = kCapRings; i >= 1; --i) {
    double phi = (M_PI / 2) * i / kCapRings;
    auto ring = add_ring(p1, radius * std::cos(phi), radius * std::sin(phi));
    ids.top.insert(ids.top.end(), ring.begin(), ring.end());
  }
  ids.top_pole = int(verts.size());
  verts.push_back(p1 + radius * d);

  auto quad = [&](int a, int b, int c, int dd) {
    tris.push_back({a, b, c});
    tris.push_back({a, c, dd});
  };
  const auto& first = rings.front();
  for (int k = 0; k < kCapSegs; ++k)
    tris.push_back(
        {ids.bottom_pole, first[size_t((k + 1) % kCapSegs)], first[size_t(k)]});
  for (size_t r = 0; r + 1 < rings.size(); ++r)
    for (int k = 0; k < kCapSegs; ++k) {
      int k1 = (k + 1) % kCapSegs;
      quad(rings[r][size_t(k)], rings[r][size_t(k1)], rings[r + 1][size_t(k1)],
           rings[r + 1][size_t(k)]);
    }
  const auto& last = rings.back();
  for (int k = 0; k < kCapSegs; ++k)
    tris.push_back(
        {ids.top_pole, last[size_t(k)], last[size_t((k + 1) % kCapSegs)]});
  return ids;
}

}  // namespace

Hand make_hand(const HandPose& pose, uint64_t seed) {
  (void)seed;  // the hand shape is fully determined by the pose
  const double orbit = pose.grasp_radius;

  std::vector<Vec3> verts;
  std::vector<std::array<int, 3>> tris;
  std::vector<std::vector<int>> joint_groups(21);
  std::vector<int> contacts;

  // Palm: a lattice box below the object, inner (+z) face toward it.
  const double palm_spacing = 10.0 + 10.0 * pose.spread;
  const double palm_w = 3.0 * palm_spacing + 18.0;
  const Vec3 palm_extents(palm_w, 46.0, 16.0);
  std::vector<int> face_class;
  Mesh palm = lattice_box(palm_extents, 3, &face_class);
  const Vec3 palm_center(0.0, 2.0, -(orbit - 6.0) - palm_extents.z() / 2);
  for (long i = 0; i < palm.vertices.rows(); ++i) {
    int id = int(verts.size());
    verts.push_back(palm.vertices.row(i).transpose() + palm_center);
    int mask = face_class[size_t(i)];
    if (mask & 32) contacts.push_back(id);          // inner face
    if (mask & 4) joint_groups[0].push_back(id);    // wrist edge (-y face)
  }
  for (long f = 0; f < palm.faces.rows(); ++f)
    tris.push_back({palm.faces(f, 0), palm.faces(f, 1), palm.faces(f, 2)});

  // Five fingers, three capsules each, joint centers on the orbit sphere.
  // The four fingers wrap in planes of constant x toward +y and over the
  // top; the thumb wraps in a plane of constant y over the -x side.
  struct FingerShape {
    int plane_axis;     // 0: x = offset (wraps over +y), 1: y = offset (-x)
    double offset;
    double theta0, dtheta;
    std::array<double, 3> radii;
  };
  std::vector<FingerShape> fingers;
  const double dtheta = 0.45 + 0.25 * pose.curl;
  fingers.push_back({1, -12.0, 0.12, 0.40 + 0.20 * pose.curl, {8.0, 7.0, 6.2}});
  for (int f = 0; f < 4; ++f)
    fingers.push_back({0, (f - 1.5) * palm_spacing, 0.10, dtheta,
                       {7.0, 6.3, 5.6}});

  int finger_row = 1;  // rows 1..20, thumb first
  for (const auto& fing : fingers) {
    double s = std::sqrt(orbit * orbit - fing.offset * fing.offset);
    auto joint = [&](int j) {
      double th = fing.theta0 + j * fing.dtheta;
      if (fing.plane_axis == 0)
        return Vec3(fing.offset, s * std::sin(th), -s * std::cos(th));
      return Vec3(-s * std::sin(th), fing.offset, -s * std::cos(th));
    };
    for (int c = 0; c < 3; ++c) {
      CapsuleIds ids = add_capsule(verts, tris, joint(c), joint(c + 1),
                                   fing.radii[size_t(c)]);
      auto& near_group = joint_groups[size_t(finger_row + c)];
      near_group.push_back(ids.bottom_pole);
      near_group.insert(near_group.end(), ids.bottom.begin(), ids.bottom.end());
      if (c == 2) {
        auto& tip_group = joint_groups[size_t(finger_row + 3)];
        tip_group.push_back(ids.top_pole);
        tip_group.insert(tip_group.end(), ids.top.begin(), ids.top.end());
        contacts.push_back(ids.top_pole);
        contacts.insert(contacts.end(), ids.top.begin(), ids.top.end());
      }
    }
    finger_row += 4;
  }

  Hand hand;
  hand.mesh.vertices.resize(long(verts.size()), 3);
  for (size_t i = 0; i < verts.size(); ++i)
    hand.mesh.vertices.row(long(i)) = verts[i].transpose();
  hand.mesh.faces.resize(long(tris.size()), 3);
  for (size_t f = 0; f < tris.size(); ++f)
    for (int k = 0; k < 3; ++k) hand.mesh.faces(long(f), k) = tris[f][k];

  std::sort(contacts.begin(), contacts.end());
  hand.contact_indices = std::move(contacts);

  std::vector<Eigen::Triplet<double>> triplets;
  for (int r = 0; r < 21; ++r) {
    const auto& group = joint_groups[size_t(r)];
    if (group.empty()) throw std::runtime_error("empty joint group");
    for (int c : group)
      triplets.emplace_back(r, c, 1.0 / double(group.size()));
  }
  hand.joint_regressor.resize(21, long(verts.size()));
  hand.joint_regressor.setFromTriplets(triplets.begin(), triplets.end());
  return hand;
}

Mesh perturb(const Mesh& mesh, const PerturbNoise& noise, uint64_t seed) {
  Mesh out = mesh;
  Rng rng(seed);

  if (noise.rotation_deg != 0.0) {
    Vec3 axis = rng.unit_vector();
    double angle = noise.rotation_deg * M_PI / 180.0;
    out = rotated(out, axis_angle(axis, angle), centroid(out));
  }

  if (noise.vertex_sigma != 0.0 && out.vertices.rows() > 0) {
    auto [lo, hi] = bounding_box(out);
    lo.array() -= 1.0;
    hi.array() += 1.0;
    constexpr int L = 4;  // control lattice points per axis
    double ctrl[L][L][L][3];
    for (int i = 0; i < L; ++i)
      for (int j = 0; j < L; ++j)
        for (int k = 0; k < L; ++k)
          for (int a = 0; a < 3; ++a)
            ctrl[i][j][k][a] = noise.vertex_sigma * rng.normal();

    Points disp(out.vertices.rows(), 3);
    for (long vi = 0; vi < out.vertices.rows(); ++vi) {
      Vec3 p = out.vertices.row(vi).transpose();
      double w[3];
      int cell[3];
      for (int a = 0; a < 3; ++a) {
        double t = (p[a] - lo[a]) / (hi[a] - lo[a]);
        t = std::clamp(t, 0.0, 1.0) * (L - 1);
        cell[a] = std::min(int(t), L - 2);
        w[a] = t - cell[a];
      }
      for (int a = 0; a < 3; ++a) {
        double acc = 0.0;
        for (int di = 0; di < 2; ++di)
          for (int dj = 0; dj < 2; ++dj)
            for (int dk = 0; dk < 2; ++dk) {
              double wt = (di ? w[0] : 1 - w[0]) * (dj ? w[1] : 1 - w[1]) *
                          (dk ? w[2] : 1 - w[2]);
              acc += wt * ctrl[cell[0] + di][cell[1] + dj][cell[2] + dk][a];
            }
        disp(vi, a) = acc;
      }
    }
    out.vertices += disp;
  }

  if (noise.translation != 0.0) {
    Vec3 dir = rng.unit_vector();
    out.vertices.rowwise() += (noise.translation * dir).transpose();
  }
  return out;
}

GraspScene make_scene(const SceneParams& params, uint64_t seed) {
  Rng rng(seed);
  for (int attempt = 0; attempt < 20; ++attempt) {
    Vec3 size(0, 0, 0);
    switch (params.kind) {
      case ObjectKind::sphere:
        size.x() = rng.uniform(22.0, 32.0);
        break;
      case ObjectKind::box:
        size = Vec3(rng.uniform(35.0, 55.0), rng.uniform(35.0, 55.0),
                    rng.uniform(35.0, 55.0));
        break;
      case ObjectKind::cylinder:
        size = Vec3(rng.uniform(16.0, 24.0), rng.uniform(45.0, 75.0), 0);
        break;
    }
    Mesh obj = make_object(params.kind, size, params.object_resolution);
    double bounding = obj.vertices.rowwise().norm().maxCoeff();

    HandPose pose;
    pose.grasp_radius = bounding + 10.0;
    pose.curl = rng.uniform(0.35, 0.65);
    pose.spread = rng.uniform(0.3, 0.7);
    Hand hand = make_hand(pose, seed);

    double yaw = rng.uniform(0.0, 2.0 * M_PI);
    Mesh hand_gt =
        rotated(hand.mesh, axis_angle(Vec3(0, 0, 1), yaw), Vec3::Zero());

    if (max_penetration(hand_gt, obj) > 0.0 ||
        intersection_volume(hand_gt, obj) > 0.0)
      continue;

    GraspScene scene;
    scene.kind = params.kind;
    scene.seed = seed;
    scene.hand_gt = std::move(hand_gt);
    scene.obj_gt = std::move(obj);
    scene.contact_indices = hand.contact_indices;
    scene.joint_regressor = hand.joint_regressor;
    scene.hand_init = perturb(scene.hand_gt, params.noise, Rng::mix(seed, 101));
    scene.obj_init = perturb(scene.obj_gt, params.noise, Rng::mix(seed, 202));
    return scene;
  }
  throw std::runtime_error("could not build a collision-free grasp");
}

std::vector<GraspScene> synth_scenes(int count, const PerturbNoise& noise,
                                     int object_resolution, uint64_t seed) {
  std::vector<GraspScene> scenes;
  scenes.reserve(size_t(count));
  constexpr ObjectKind kinds[3] = {ObjectKind::sphere, ObjectKind::box,
                                   ObjectKind::cylinder};
  for (int i = 0; i < count; ++i) {
    SceneParams params;
    params.kind = kinds[i % 3];
    params.object_resolution = object_resolution;
    params.noise = noise;
    scenes.push_back(make_scene(params, Rng::mix(seed, uint64_t(i))));
  }
  return scenes;
}

namespace {

json noise_to_json(const PerturbNoise& noise) {
  return json{{"vertex_sigma", noise.vertex_sigma},
              {"translation", noise.translation},
              {"rotation_deg", noise.rotation_deg}};
}

void write_json(const json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return json::parse(in);
}

}  // namespace

void save_scene(const GraspScene& scene, const std::string& dir) {
  fs::create_directories(dir);
  fs::path base(dir);
  save_mesh(scene.hand_gt, (base / "hand_gt.obj").string());
  save_mesh(scene.obj_gt, (base / "obj_gt.obj").string());
  save_mesh(scene.hand_init, (base / "hand_init.obj").string());
  save_mesh(scene.obj_init, (base / "obj_init.obj").string());

  write_json(json(scene.contact_indices), base / "contact.json");

  json jt = json::array();
  std::vector<std::tuple<int, int, double>> entries;
  for (int k = 0; k < scene.joint_regressor.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(scene.joint_regressor,
                                                       k);
         it; ++it)
      entries.emplace_back(int(it.row()), int(it.col()), it.value());
  std::sort(entries.begin(), entries.end());
  for (const auto& [r, c, v] : entries) jt.push_back(json::array({r, c, v}));
  write_json(json{{"rows", scene.joint_regressor.rows()},
                  {"cols", scene.joint_regressor.cols()},
                  {"triplets", jt}},
             base / "regressor.json");

  write_json(json{{"seed", scene.seed}, {"kind", to_string(scene.kind)}},
             base / "meta.json");
}

GraspScene load_scene(const std::string& dir) {
  fs::path base(dir);
  GraspScene scene;
  scene.hand_gt = load_mesh((base / "hand_gt.obj").string());
  scene.obj_gt = load_mesh((base / "obj_gt.obj").string());
  scene.hand_init = load_mesh((base / "hand_init.obj").string());
  scene.obj_init = load_mesh((base / "obj_init.obj").string());

  json contact = read_json(base / "contact.json");
  scene.contact_indices = contact.get<std::vector<int>>();

  json reg = read_json(base / "regressor.json");
  std::vector<Eigen::Triplet<double>> triplets;
  for (const auto& t : reg.at("triplets"))
    triplets.emplace_back(t.at(0).get<int>(), t.at(1).get<int>(),
                          t.at(2).get<double>());
  scene.joint_regressor.resize(reg.at("rows").get<int>(),
                               reg.at("cols").get<int>());
  scene.joint_regressor.setFromTriplets(triplets.begin(), triplets.end());

  json meta = read_json(base / "meta.json");
  scene.seed = meta.at("seed").get<uint64_t>();
  scene.kind = object_kind_from_string(meta.at("kind").get<std::string>());
  return scene;
}

void save_scene_set(const std::vector<GraspScene>& scenes,
                    const PerturbNoise& noise, uint64_t seed,
                    const std::string& dir) {
  fs::create_directories(dir);
  json names = json::array();
  char buf[32];
  for (size_t i = 0; i < scenes.size(); ++i) {
    std::snprintf(buf, sizeof buf, "scene_%04zu", i);
    save_scene(scenes[i], (fs::path(dir) / buf).string());
    names.push_back(buf);
  }
  write_json(json{{"seed", seed},
                  {"count", scenes.size()},
                  {"noise", noise_to_json(noise)},
                  {"scenes", names}},
             fs::path(dir) / "manifest.json");
}

std::vector<GraspScene> load_scene_set(const std::string& dir) {
  json manifest = read_json(fs::path(dir) / "manifest.json");
  std::vector<GraspScene> scenes;
  for (const auto& name : manifest.at("scenes"))
    scenes.push_back(load_scene((fs::path(dir) / name.get<std::string>()).string()));
  return scenes;
}

SurfacePattern object_sample_pattern(const GraspScene& scene, int count) {
  return sample_pattern(scene.obj_gt, count, Rng::mix(scene.seed, 777));
}

Points object_samples(const GraspScene& scene, int count) {
  return pattern_points(scene.obj_gt, object_sample_pattern(scene, count));
}

}  // namespace hograph

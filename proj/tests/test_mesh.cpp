#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "hograph/mesh.hpp"
#include "hograph/rng.hpp"
#include "helpers.hpp"

using namespace hograph;
using namespace hograph::test;

TEST_CASE("obj loader parses vertices, faces and comments") {
  TempDir tmp("obj");
  std::ofstream out(tmp.str("quad.obj"));
  out << "# a quad\n"
         "v 0 0 0\n"
         "v 1 0 0\n"
         "v 1 1 0  # inline comment\n"
         "v 0 1 0\n"
         "vn 0 0 1\n"
         "f 1 2 3 4\n";
  out.close();

  Mesh m = load_mesh(tmp.str("quad.obj"));
  CHECK(m.vertex_count() == 4);
  REQUIRE(m.face_count() == 2);
  // fan triangulation: (0,1,2) and (0,2,3)
  CHECK(m.faces(0, 0) == 0);
  CHECK(m.faces(0, 1) == 1);
  CHECK(m.faces(0, 2) == 2);
  CHECK(m.faces(1, 0) == 0);
  CHECK(m.faces(1, 1) == 2);
  CHECK(m.faces(1, 2) == 3);
  CHECK(m.vertices(2, 0) == doctest::Approx(1.0));
}

TEST_CASE("obj loader reports offending line numbers") {
  TempDir tmp("objerr");
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(tmp.str(name));
    out << text;
  };

  write("short.obj", "v 0 0 0\nv 1 0\n");
  CHECK_THROWS_WITH_AS(load_mesh(tmp.str("short.obj")),
                       doctest::Contains(":2:"), std::runtime_error);

  write("degen.obj", "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 1 2\n");
  CHECK_THROWS_WITH_AS(load_mesh(tmp.str("degen.obj")),
                       doctest::Contains("degenerate"), std::runtime_error);

  write("range.obj", "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 5\n");
  CHECK_THROWS_WITH_AS(load_mesh(tmp.str("range.obj")),
                       doctest::Contains("out of range"), std::runtime_error);

  write("badtok.obj", "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3x\n");
  CHECK_THROWS_AS(load_mesh(tmp.str("badtok.obj")), std::runtime_error);
}

TEST_CASE("save then load is an identity and resaving is byte stable") {
  TempDir tmp("roundtrip");
  Mesh cube = make_cube(7.25, Vec3(0.125, -3.5, 2.0));
  save_mesh(cube, tmp.str("a.obj"));
  Mesh back = load_mesh(tmp.str("a.obj"));
  REQUIRE(back.vertex_count() == cube.vertex_count());
  REQUIRE(back.face_count() == cube.face_count());
  CHECK((back.vertices - cube.vertices).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(back.faces == cube.faces);

  save_mesh(back, tmp.str("b.obj"));
  CHECK(slurp(tmp.str("a.obj")) == slurp(tmp.str("b.obj")));
}

TEST_CASE("vertex adjacency of a cube has 18 unique edges") {
  Mesh cube = make_cube();
  auto edges = vertex_adjacency(cube);
  // Euler: E = V + F - 2 = 8 + 12 - 2
  CHECK(edges.size() == 18);
  for (size_t e = 1; e < edges.size(); ++e) CHECK(edges[e - 1] < edges[e]);
  for (const auto& e : edges) CHECK(e[0] < e[1]);
}

TEST_CASE("watertight check accepts closed meshes and reports broken edges") {
  Mesh cube = make_cube();
  CHECK(!watertight_violation(cube).has_value());

  Mesh open = cube;
  open.faces.conservativeResize(11, 3);  // drop one +z triangle
  auto violation = watertight_violation(open);
  REQUIRE(violation.has_value());
  // the dropped face was (1,7,3); all its edges are now unmatched
  std::array<int, 2> e = *violation;
  bool touches = (e == std::array<int, 2>{1, 7}) ||
                 (e == std::array<int, 2>{3, 7}) ||
                 (e == std::array<int, 2>{1, 3});
  CHECK(touches);
  CHECK_THROWS_WITH_AS(require_watertight(open), doctest::Contains("edge"),
                       std::runtime_error);

  // duplicated face breaks the two-sided count as well
  Mesh dup = cube;
  dup.faces.conservativeResize(13, 3);
  dup.faces.row(12) = dup.faces.row(0);
  CHECK(watertight_violation(dup).has_value());
}

TEST_CASE("winding number is 1 inside, 0 outside and flips with orientation") {
  Mesh cube = make_cube(10.0);
  CHECK(generalized_winding_number(Vec3(1, 2, 3), cube) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(generalized_winding_number(Vec3(25, 0, 0), cube) ==
        doctest::Approx(0.0).epsilon(1e-9));

  Mesh flipped = cube;
  flipped.faces.col(1).swap(flipped.faces.col(2));
  CHECK(generalized_winding_number(Vec3(1, 2, 3), flipped) ==
        doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("signed distance matches brute force oracle with ray parity sign") {
  Mesh sphere_like = make_octahedron(12.0, Vec3(1, -2, 0.5));
  Mesh cube = make_cube(8.0, Vec3(-1, 0.25, 2));
  Rng rng(2024);

  for (const Mesh& mesh : {sphere_like, cube}) {
    for (int i = 0; i < 100; ++i) {
      Vec3 p(rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-20, 20));
      SignedDistance sd = signed_distance(p, mesh);
      double expect = brute_unsigned_distance(p, mesh);
      bool inside = inside_by_ray_parity(p, mesh);
      CHECK(std::abs(sd.distance) == doctest::Approx(expect).epsilon(1e-9));
      CHECK((sd.distance < 0) == inside);
      CHECK(sd.face_index >= 0);
      CHECK(sd.face_index < mesh.face_count());
      CHECK(std::abs((sd.closest_point - p).norm() - expect) < 1e-9);
    }
  }
}

TEST_CASE("signed distance known values on a centered cube") {
  Mesh cube = make_cube(10.0);  // spans [-10, 10]^3
  SignedDistance inside = signed_distance(Vec3(5, 0, 0), cube);
  CHECK(inside.distance == doctest::Approx(-5.0).epsilon(1e-12));
  SignedDistance outside = signed_distance(Vec3(14, 0, 0), cube);
  CHECK(outside.distance == doctest::Approx(4.0).epsilon(1e-12));
  SignedDistance corner = signed_distance(Vec3(13, 14, 12), cube);
  CHECK(corner.distance ==
        doctest::Approx(Vec3(3, 4, 2).norm()).epsilon(1e-12));
}

TEST_CASE("signed distance requires a watertight mesh") {
  Mesh open = make_cube();
  open.faces.conservativeResize(11, 3);
  CHECK_THROWS_AS(signed_distance(Vec3(0, 0, 0), open), std::runtime_error);
}

TEST_CASE("mesh volume and bounding box") {
  Mesh cube = make_cube(5.0, Vec3(3, -2, 1));  // side 10
  CHECK(mesh_volume(cube) == doctest::Approx(1000.0).epsilon(1e-12));
  auto [lo, hi] = bounding_box(cube);
  CHECK((lo - Vec3(-2, -7, -4)).norm() < 1e-12);
  CHECK((hi - Vec3(8, 3, 6)).norm() < 1e-12);
  CHECK((centroid(cube) - Vec3(3, -2, 1)).norm() < 1e-12);

  Mesh flipped = cube;
  flipped.faces.col(1).swap(flipped.faces.col(2));
  CHECK(mesh_volume(flipped) == doctest::Approx(-1000.0).epsilon(1e-12));
}

TEST_CASE("rotation helpers preserve shape") {
  Mesh cube = make_cube(4.0, Vec3(10, 0, 0));
  Mat3 rot = axis_angle(Vec3(0, 0, 1), M_PI / 2);
  Mesh turned = rotated(cube, rot, Vec3::Zero());
  CHECK(mesh_volume(turned) == doctest::Approx(mesh_volume(cube)));
  // the center moves from +x to +y
  CHECK((centroid(turned) - Vec3(0, 10, 0)).norm() < 1e-9);

  CHECK((axis_angle(Vec3(0, 0, 1), 0.0) - Mat3::Identity()).norm() == 0.0);
}

TEST_CASE("surface samples lie on the mesh and are deterministic") {
  Mesh octa = make_octahedron(9.0);
  Points s1 = sample_surface(octa, 64, 42);
  Points s2 = sample_surface(octa, 64, 42);
  CHECK((s1 - s2).cwiseAbs().maxCoeff() == 0.0);

  Points s3 = sample_surface(octa, 64, 43);
  CHECK((s1 - s3).cwiseAbs().maxCoeff() > 0.0);

  for (long i = 0; i < s1.rows(); ++i)
    CHECK(brute_unsigned_distance(s1.row(i).transpose(), octa) < 1e-9);
}

TEST_CASE("validate_mesh names the first broken invariant") {
  Mesh bad = make_cube();
  bad.faces(3, 1) = 11;
  CHECK_THROWS_WITH_AS(validate_mesh(bad), doctest::Contains("out of range"),
                       std::runtime_error);
  Mesh degen = make_cube();
  degen.faces(2, 0) = degen.faces(2, 1);
  CHECK_THROWS_WITH_AS(validate_mesh(degen), doctest::Contains("degenerate"),
                       std::runtime_error);
}

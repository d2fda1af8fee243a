#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "mvface/capture.hpp"
#include "mvface/image_io.hpp"
#include "mvface/vecmath.hpp"

using namespace mvf;

namespace {

Mat3 random_rotation(std::mt19937_64& rng) {
  std::uniform_real_distribution<real> u(-1, 1);
  Vec3 axis{u(rng), u(rng), u(rng)};
  if (norm(axis) < 1e-6) axis = {0, 0, 1};
  std::uniform_real_distribution<real> a(0, 6.28);
  return axis_angle(axis, a(rng));
}

TrackedMesh random_mesh(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<real> u(-100, 100);
  TrackedMesh m;
  for (int i = 0; i < n; ++i) m.vertices.push_back({u(rng), u(rng), u(rng)});
  return m;
}

}  // namespace

TEST_CASE("frame list: trivial cases") {
  CHECK(parse_frame_list("").empty());

  auto recs = parse_frame_list("EXP_neutral 0\nEXP_smile 31");
  REQUIRE(recs.size() == 2);
  CHECK(recs[0] == FrameRecord{"EXP_neutral", 0});
  CHECK(recs[1] == FrameRecord{"EXP_smile", 31});

  // Blank lines are skipped.
  CHECK(parse_frame_list("\n\nA 1\n\n").size() == 1);
}

TEST_CASE("frame list: errors carry position and type") {
  try {
    parse_frame_list("A 1\nB\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
  CHECK_THROWS_AS(parse_frame_list("A x"), ParseError);
  CHECK_THROWS_AS(parse_frame_list("A -3"), ParseError);
  CHECK_THROWS_AS(parse_frame_list("A 1 2"), ParseError);
  CHECK_THROWS_AS(parse_frame_list("A 1\nA 1\n"), DuplicateEntryError);
}

// Round-trip oracle: serialize(parse(x)) equals an independently computed
// canonical form, over 1,000 randomized valid files.
TEST_CASE("frame list: canonicalizing round trip") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> n_lines(0, 12), idx(0, 9999), ws(1, 3), pad(0, 2);
  const char* seps[] = {" ", "\t", "  ", " \t"};
  for (int trial = 0; trial < 1000; ++trial) {
    std::string raw, canonical;
    std::set<std::pair<std::string, int>> used;
    int n = n_lines(rng);
    for (int i = 0; i < n; ++i) {
      std::string seg = "SEG_" + std::to_string(rng() % 50);
      int fi = idx(rng);
      if (!used.insert({seg, fi}).second) continue;
      for (int b = pad(rng); b > 0; --b) raw += "\n";  // interleaved blanks
      raw += seg + seps[ws(rng) % 4] + std::to_string(fi);
      if (pad(rng) > 0) raw += " ";  // trailing whitespace
      raw += "\n";
      canonical += seg + " " + std::to_string(fi) + "\n";
    }
    CHECK(serialize_frame_list(parse_frame_list(raw)) == canonical);
    // Mutually inverse on the canonical format.
    CHECK(serialize_frame_list(parse_frame_list(canonical)) == canonical);
  }
}

TEST_CASE("obj: minimal mesh") {
  auto lm = load_mesh(
      "v 0 0 0\n"
      "v 1 0 0\n"
      "v 0 1 0\n"
      "vt 0 0\nvt 1 0\nvt 0 1\n"
      "f 1/1 2/2 3/3\n");
  CHECK(lm.topology.vertex_count == 3);
  REQUIRE(lm.topology.triangles.size() == 1);
  CHECK(lm.topology.triangles[0] == std::array<int, 3>{0, 1, 2});
  CHECK(lm.mesh.vertices[1] == Vec3{1, 0, 0});
  CHECK(lm.topology.uv_per_corner[0][2] == Vec2{0, 1});
}

TEST_CASE("obj: structural and format errors") {
  CHECK_THROWS_AS(load_mesh("v 0 0 0\nvt 0 0\nf 1/1 2/1 3/1\n"), StructuralError);
  CHECK_THROWS_AS(load_mesh("v 0 0 0\nv 1 0 0\nv 0 1 0\nv 1 1 0\n"
                            "vt 0 0\nf 1/1 2/1 3/1 4/1\n"),
                  UnsupportedFaceError);
  CHECK_THROWS_AS(load_mesh("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n"), StructuralError);
  // UV outside [0,1] violates the topology invariant.
  CHECK_THROWS_AS(load_mesh("v 0 0 0\nv 1 0 0\nv 0 1 0\nvt 2 0\nvt 0 0\nvt 0 1\n"
                            "f 1/1 2/2 3/3\n"),
                  ValidationError);
}

// Round-trip oracle: load(write(M)) == M on randomized meshes.
TEST_CASE("obj: write/load round trip") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<real> uv01(0, 1);
  for (int trial = 0; trial < 40; ++trial) {
    int nv = 3 + int(rng() % 40);
    TrackedMesh mesh = random_mesh(rng, nv);
    MeshTopology topo;
    topo.vertex_count = nv;
    int nt = 1 + int(rng() % 30);
    for (int t = 0; t < nt; ++t) {
      topo.triangles.push_back({int(rng() % nv), int(rng() % nv), int(rng() % nv)});
      topo.uv_per_corner.push_back({Vec2{uv01(rng), uv01(rng)}, Vec2{uv01(rng), uv01(rng)},
                                    Vec2{uv01(rng), uv01(rng)}});
    }
    auto lm = load_mesh(write_mesh(topo, mesh));
    REQUIRE(lm.topology.vertex_count == nv);
    REQUIRE(lm.topology.triangles == topo.triangles);
    for (int t = 0; t < nt; ++t)
      for (int c = 0; c < 3; ++c) {
        CHECK(lm.topology.uv_per_corner[t][c].x == doctest::Approx(topo.uv_per_corner[t][c].x).epsilon(1e-12));
        CHECK(lm.topology.uv_per_corner[t][c].y == doctest::Approx(topo.uv_per_corner[t][c].y).epsilon(1e-12));
      }
    for (int v = 0; v < nv; ++v) {
      CHECK(std::abs(lm.mesh.vertices[v].x - mesh.vertices[v].x) < 1e-6);
      CHECK(std::abs(lm.mesh.vertices[v].y - mesh.vertices[v].y) < 1e-6);
      CHECK(std::abs(lm.mesh.vertices[v].z - mesh.vertices[v].z) < 1e-6);
    }
  }
}

// Full-scale tracked meshes carry exactly 7,306 vertices.
TEST_CASE("obj: full-scale mesh vertex count") {
  std::string obj;
  for (int i = 0; i < 7306; ++i)
    obj += "v " + std::to_string(i * 0.1) + " 0 0\n";
  obj += "vt 0 0\nvt 1 0\nvt 0 1\nf 1/1 2/2 3/3\n";
  auto lm = load_mesh(obj);
  CHECK(lm.topology.vertex_count == 7306);
  CHECK(lm.mesh.vertex_count() == 7306);
}

TEST_CASE("headpose: parse, validate, serialize") {
  Headpose identity;
  auto round = parse_headpose(serialize_headpose(identity));
  CHECK(round.transform.m == identity.transform.m);

  CHECK_THROWS_AS(parse_headpose("1 0 0 0 0 1 0 0 0 0 1"), ParseError);  // 11 values
  // Scaled rotation fails orthonormality.
  CHECK_THROWS_AS(parse_headpose("2 0 0 0 0 2 0 0 0 0 2 0"), ValidationError);
  // Reflection (det -1) is rejected.
  CHECK_THROWS_AS(parse_headpose("-1 0 0 0 0 1 0 0 0 0 1 0"), ValidationError);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 25; ++i) {
    Headpose pose;
    pose.transform.set_rotation(random_rotation(rng));
    pose.transform.set_translation({real(i), -2.5, 7.0});
    auto back = parse_headpose(serialize_headpose(pose));
    for (int k = 0; k < 12; ++k)
      CHECK(std::abs(back.transform.m[k] - pose.transform.m[k]) < 1e-15);
  }
}

TEST_CASE("KRT: identity block") {
  std::string krt =
      "cam0\n"
      "1 0 0\n0 1 0\n0 0 1\n"
      "1 0 0 0\n0 1 0 0\n0 0 1 0\n"
      "640 480\n";
  auto cams = load_calibrations(krt);
  REQUIRE(cams.size() == 1);
  CHECK(cams[0].camera_id == "cam0");
  CHECK(cams[0].intrinsics(0, 0) == 1);
  CHECK(cams[0].intrinsics(1, 1) == 1);
  CHECK(cams[0].extrinsics.translation() == Vec3{0, 0, 0});
  CHECK(cams[0].width == 640);
  CHECK(cams[0].height == 480);
}

TEST_CASE("KRT: validation and duplicates") {
  std::string scaled =
      "cam0\n"
      "1 0 0\n0 1 0\n0 0 1\n"
      "2 0 0 0\n0 2 0 0\n0 0 2 0\n"
      "64 64\n";
  CHECK_THROWS_AS(load_calibrations(scaled), ValidationError);

  std::string dup =
      "c\n1 0 0\n0 1 0\n0 0 1\n1 0 0 0\n0 1 0 0\n0 0 1 0\n8 8\n\n"
      "c\n1 0 0\n0 1 0\n0 0 1\n1 0 0 0\n0 1 0 0\n0 0 1 0\n8 8\n";
  CHECK_THROWS_AS(load_calibrations(dup), DuplicateEntryError);

  std::string bad_fx =
      "c\n-1 0 0\n0 1 0\n0 0 1\n1 0 0 0\n0 1 0 0\n0 0 1 0\n8 8\n";
  CHECK_THROWS_AS(load_calibrations(bad_fx), ValidationError);
}

// Round-trip oracle: write-then-read of randomized rigs is the identity.
TEST_CASE("KRT: round trip") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<real> f(100, 2000), c(0, 1000), t(-500, 500);
  std::vector<CameraCalibration> rig;
  for (int i = 0; i < 12; ++i) {
    CameraCalibration cal;
    cal.camera_id = "cam" + std::to_string(i);
    cal.intrinsics = Mat3::identity();
    cal.intrinsics(0, 0) = f(rng);
    cal.intrinsics(1, 1) = f(rng);
    cal.intrinsics(0, 1) = 0.01 * t(rng);
    cal.intrinsics(0, 2) = c(rng);
    cal.intrinsics(1, 2) = c(rng);
    cal.extrinsics.set_rotation(random_rotation(rng));
    cal.extrinsics.set_translation({t(rng), t(rng), t(rng)});
    cal.width = 2048;
    cal.height = 1334;
    rig.push_back(cal);
  }
  auto back = load_calibrations(write_calibrations(rig));
  REQUIRE(back.size() == rig.size());
  for (size_t i = 0; i < rig.size(); ++i) {
    CHECK(back[i].camera_id == rig[i].camera_id);
    for (int k = 0; k < 9; ++k)
      CHECK(std::abs(back[i].intrinsics.m[k] - rig[i].intrinsics.m[k]) < 1e-9);
    for (int k = 0; k < 12; ++k)
      CHECK(std::abs(back[i].extrinsics.m[k] - rig[i].extrinsics.m[k]) < 1e-9);
  }
}

TEST_CASE("stats: closed forms") {
  CHECK_THROWS_AS(compute_stats({}, {}), EmptyInputError);

  Texture a(4, 0.25), b(4, 0.75);
  TrackedMesh m = random_mesh(*(new std::mt19937_64(1)), 5);

  auto single = compute_stats({a}, {m});
  for (real v : single.tex_var.pixels) CHECK(v == 0.0);
  for (const auto& v : single.vert_var) CHECK((v.x == 0 && v.y == 0 && v.z == 0));

  auto two = compute_stats({a, b}, {m});
  for (real v : two.tex_mean.pixels) CHECK(v == doctest::Approx(0.5));
  for (real v : two.tex_var.pixels) CHECK(v == doctest::Approx(0.0625));
}

// Brute-force oracle: naive two-pass mean/variance, element by element.
TEST_CASE("stats: matches naive reference on random data") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<real> u(0, 1);
  const int res = 6, n = 50, nv = 7;
  std::vector<Texture> textures;
  std::vector<TrackedMesh> meshes;
  for (int i = 0; i < n; ++i) {
    Texture t(res);
    for (auto& p : t.pixels) p = u(rng);
    textures.push_back(std::move(t));
    meshes.push_back(random_mesh(rng, nv));
  }
  auto stats = compute_stats(textures, meshes);

  for (size_t i = 0; i < textures[0].pixels.size(); ++i) {
    real mean = 0;
    for (const auto& t : textures) mean += t.pixels[i];
    mean /= n;
    real var = 0;
    for (const auto& t : textures) var += (t.pixels[i] - mean) * (t.pixels[i] - mean);
    var /= n;
    CHECK(std::abs(stats.tex_mean.pixels[i] - mean) < 1e-9);
    CHECK(std::abs(stats.tex_var.pixels[i] - var) < 1e-9);
  }
  for (int v = 0; v < nv; ++v)
    for (int d = 0; d < 3; ++d) {
      real mean = 0;
      for (const auto& m : meshes) mean += m.vertices[v][d];
      mean /= n;
      real var = 0;
      for (const auto& m : meshes) var += (m.vertices[v][d] - mean) * (m.vertices[v][d] - mean);
      var /= n;
      CHECK(std::abs(stats.vert_mean[v][d] - mean) < 1e-9);
      CHECK(std::abs(stats.vert_var[v][d] - var) < 1e-9);
    }
}

TEST_CASE("stats: disk round trip") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<real> u(0, 1);
  Texture t(4);
  for (auto& p : t.pixels) p = u(rng);
  auto stats = compute_stats({t, Texture(4, 0.5)}, {random_mesh(rng, 6), random_mesh(rng, 6)});

  auto dir = std::filesystem::temp_directory_path() / "mvface_stats_test";
  std::filesystem::create_directories(dir);
  save_stats(dir, stats);
  auto back = load_stats(dir, 4, 6);
  CHECK(back.tex_mean.pixels == stats.tex_mean.pixels);
  CHECK(back.tex_var.pixels == stats.tex_var.pixels);
  for (size_t i = 0; i < stats.vert_mean.size(); ++i) {
    CHECK(back.vert_mean[i] == stats.vert_mean[i]);
    CHECK(back.vert_var[i] == stats.vert_var[i]);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("png: byte-exact round trip after quantization") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<real> u(0, 1);
  Image img(20, 14);
  for (auto& p : img.pixels) p = u(rng);

  auto path = std::filesystem::temp_directory_path() / "mvface_png_test.png";
  save_png(path, img);
  auto back = load_png(path);
  auto quantized = quantize_8bit(img);
  REQUIRE(back.width == img.width);
  REQUIRE(back.height == img.height);
  CHECK(back.pixels == quantized.pixels);
  std::filesystem::remove(path);
}

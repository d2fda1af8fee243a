#pragma once

// Capture data model: the domain types of a multi-view face capture and the
// on-disk layout (images, meshes, headposes, calibrations, frame lists,
// statistics metadata). Loaders are pure; a CaptureSet is immutable after
// construction and safe to share across threads.

#include <filesystem>
#include <string>
#include <vector>

#include "mvface/error.hpp"
#include "mvface/vecmath.hpp"

namespace mvf {

// Fixed triangulation with per-corner UV coordinates, shared by all frames
// of a capture.
struct MeshTopology {
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::array<Vec2, 3>> uv_per_corner;  // one entry per triangle
  int vertex_count = 0;

  int triangle_count() const { return static_cast<int>(triangles.size()); }
};

// Per-frame vertex positions in millimeters, head-local frame.
struct TrackedMesh {
  std::vector<Vec3> vertices;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
};

// Rigid transform mapping head-local coordinates to world coordinates.
struct Headpose {
  Mat34 transform;
};

struct CameraCalibration {
  std::string camera_id;
  Mat3 intrinsics;   // [fx skew cx; 0 fy cy; 0 0 1]
  Mat34 extrinsics;  // world -> camera, [R | t]
  int width = 0, height = 0;
};

// Square RGB texture, row-major interleaved, values nominally in [0,1].
// Row 0 corresponds to v = 0 (top of the UV atlas).
struct Texture {
  int res = 0;
  std::vector<real> pixels;  // res * res * 3

  Texture() = default;
  explicit Texture(int r, real fill = 0) : res(r), pixels(size_t(r) * r * 3, fill) {}
  real* at(int x, int y) { return pixels.data() + (size_t(y) * res + x) * 3; }
  const real* at(int x, int y) const { return pixels.data() + (size_t(y) * res + x) * 3; }
};

// RGB image, row-major interleaved, values in [0,1]. Origin top-left, y down.
struct Image {
  int width = 0, height = 0;
  std::vector<real> pixels;  // height * width * 3

  Image() = default;
  Image(int w, int h, real fill = 0) : width(w), height(h), pixels(size_t(w) * h * 3, fill) {}
  real* at(int x, int y) { return pixels.data() + (size_t(y) * width + x) * 3; }
  const real* at(int x, int y) const { return pixels.data() + (size_t(y) * width + x) * 3; }
};

struct FrameRecord {
  std::string segment;
  int frame_index = 0;

  bool operator==(const FrameRecord& o) const {
    return segment == o.segment && frame_index == o.frame_index;
  }
};

// Per-element mean and population variance across all frames and cameras.
struct DatasetStats {
  Texture tex_mean, tex_var;
  std::vector<Vec3> vert_mean, vert_var;
};

// Relative locations of the capture pieces, overridable by a manifest file.
struct CaptureLayout {
  std::string images_dir = "images";
  std::string meshes_dir = "meshes";
  std::string headposes_dir = "headposes";
  std::string krt_file = "KRT";
  std::string frame_list_file = "frame_list.txt";
  std::string stats_dir = "stats";
};

struct CaptureSet {
  std::filesystem::path root;
  CaptureLayout layout;
  MeshTopology topology;
  std::vector<FrameRecord> frames;
  std::vector<CameraCalibration> cameras;
  std::vector<TrackedMesh> meshes;     // one per frame
  std::vector<Headpose> headposes;     // one per frame
  DatasetStats stats;

  int frame_count() const { return static_cast<int>(frames.size()); }
  int camera_count() const { return static_cast<int>(cameras.size()); }
  std::filesystem::path image_path(int frame, int camera) const;
  std::filesystem::path mesh_path(int frame) const;
  std::filesystem::path headpose_path(int frame) const;
  Image load_image(int frame, int camera) const;
  const CameraCalibration& camera(const std::string& id) const;
  int camera_index(const std::string& id) const;  // -1 if unknown
};

// --- frame lists -----------------------------------------------------------

// Parses "segment frame_index" lines; blank lines are skipped.
std::vector<FrameRecord> parse_frame_list(const std::string& text);
// Canonical serialization: one "segment index\n" per record, file order.
std::string serialize_frame_list(const std::vector<FrameRecord>& records);

// --- meshes (.obj) ----------------------------------------------------------

struct LoadedMesh {
  MeshTopology topology;
  TrackedMesh mesh;
};

// Wavefront OBJ with triangular v/vt faces. Vertices keep file order;
// indices are 0-based internally.
LoadedMesh load_mesh(const std::string& obj_text);
std::string write_mesh(const MeshTopology& topology, const TrackedMesh& mesh);

// --- headposes ---------------------------------------------------------------

// 12 whitespace-separated floats, row-major 3x4.
Headpose parse_headpose(const std::string& text);
std::string serialize_headpose(const Headpose& pose);
void validate_headpose(const Headpose& pose, real tol = 1e-6);

// --- calibrations (KRT) ------------------------------------------------------

// Text blocks: camera id line, 3 intrinsic rows, 3 extrinsic rows, then
// "width height". Blocks separated by blank lines.
std::vector<CameraCalibration> load_calibrations(const std::string& krt_text);
std::string write_calibrations(const std::vector<CameraCalibration>& cams);
void validate_calibration(const CameraCalibration& cal, real rot_tol = 1e-4);

// --- statistics --------------------------------------------------------------

// Population mean/variance over the given texture and mesh samples.
DatasetStats compute_stats(const std::vector<Texture>& textures,
                           const std::vector<TrackedMesh>& meshes);

// --- capture-level IO --------------------------------------------------------

CaptureLayout load_manifest(const std::filesystem::path& root);
CaptureSet load_capture(const std::filesystem::path& root);
// Checks invariants and referenced files; throws on the first violation.
void validate_capture(const CaptureSet& capture);

void save_stats(const std::filesystem::path& stats_dir, const DatasetStats& stats);
DatasetStats load_stats(const std::filesystem::path& stats_dir, int expected_res,
                        int expected_vertex_count);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace mvf

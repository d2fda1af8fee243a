#include "mvface/capture.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mvface/image_io.hpp"
#include "mvface/tensor_io.hpp"

namespace mvf {
namespace {

using json = nlohmann::json;

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

std::string fmt_real(real v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool parse_real(const std::string& s, real& out) {
  try {
    size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

bool parse_int(const std::string& s, int& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

real rotation_error(const Mat3& r) {
  Mat3 should_be_identity = r * r.transposed();
  real err = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      err = std::max(err, std::abs(should_be_identity(i, j) - (i == j ? 1.0 : 0.0)));
  return err;
}

std::string frame_stem(const FrameRecord& rec) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%06d", rec.frame_index);
  return buf;
}

}  // namespace

// --- frame lists -------------------------------------------------------------

std::vector<FrameRecord> parse_frame_list(const std::string& text) {
  std::vector<FrameRecord> records;
  std::set<std::pair<std::string, int>> seen;
  std::istringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (fields.size() != 2)
      throw ParseError("frame list line needs exactly two fields", line_no);
    int idx = 0;
    if (!parse_int(fields[1], idx) || idx < 0)
      throw ParseError("frame index must be a non-negative integer", line_no);
    if (!seen.insert({fields[0], idx}).second)
      throw DuplicateEntryError("duplicate frame record " + fields[0] + " " + fields[1]);
    records.push_back({fields[0], idx});
  }
  return records;
}

std::string serialize_frame_list(const std::vector<FrameRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += r.segment;
    out += ' ';
    out += std::to_string(r.frame_index);
    out += '\n';
  }
  return out;
}

// --- meshes (.obj) -------------------------------------------------------------

LoadedMesh load_mesh(const std::string& obj_text) {
  LoadedMesh lm;
  std::vector<Vec2> uvs;
  std::istringstream ss(obj_text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    auto fields = split_ws(line);
    if (fields.empty() || fields[0][0] == '#') continue;
    if (fields[0] == "v") {
      if (fields.size() < 4) throw ParseError("vertex line needs 3 coordinates", line_no);
      Vec3 v;
      if (!parse_real(fields[1], v.x) || !parse_real(fields[2], v.y) ||
          !parse_real(fields[3], v.z))
        throw ParseError("bad vertex coordinate", line_no);
      lm.mesh.vertices.push_back(v);
    } else if (fields[0] == "vt") {
      if (fields.size() < 3) throw ParseError("vt line needs 2 coordinates", line_no);
      Vec2 uv;
      if (!parse_real(fields[1], uv.x) || !parse_real(fields[2], uv.y))
        throw ParseError("bad texture coordinate", line_no);
      uvs.push_back(uv);
    } else if (fields[0] == "f") {
      if (fields.size() != 4)
        throw UnsupportedFaceError("only triangular faces are supported (line " +
                                   std::to_string(line_no) + ")");
      std::array<int, 3> tri{};
      std::array<Vec2, 3> corner_uv{};
      for (int c = 0; c < 3; ++c) {
        const std::string& tok = fields[c + 1];
        size_t slash = tok.find('/');
        if (slash == std::string::npos)
          throw StructuralError("face corner lacks a vt index (line " +
                                std::to_string(line_no) + ")");
        int vi = 0, ti = 0;
        std::string v_part = tok.substr(0, slash);
        std::string rest = tok.substr(slash + 1);
        size_t slash2 = rest.find('/');
        std::string t_part = slash2 == std::string::npos ? rest : rest.substr(0, slash2);
        if (!parse_int(v_part, vi) || !parse_int(t_part, ti))
          throw ParseError("bad face index", line_no);
        if (vi < 1 || vi > static_cast<int>(lm.mesh.vertices.size()))
          throw StructuralError("vertex index out of range (line " +
                                std::to_string(line_no) + ")");
        if (ti < 1 || ti > static_cast<int>(uvs.size()))
          throw StructuralError("vt index out of range (line " + std::to_string(line_no) +
                                ")");
        tri[c] = vi - 1;
        corner_uv[c] = uvs[ti - 1];
        if (corner_uv[c].x < 0 || corner_uv[c].x > 1 || corner_uv[c].y < 0 ||
            corner_uv[c].y > 1)
          throw ValidationError("UV coordinate outside [0,1] (line " +
                                std::to_string(line_no) + ")");
      }
      lm.topology.triangles.push_back(tri);
      lm.topology.uv_per_corner.push_back(corner_uv);
    }
  }
  lm.topology.vertex_count = lm.mesh.vertex_count();
  return lm;
}

std::string write_mesh(const MeshTopology& topology, const TrackedMesh& mesh) {
  if (topology.vertex_count != mesh.vertex_count())
    throw ShapeError("mesh/topology vertex count mismatch");
  std::string out;
  for (const auto& v : mesh.vertices)
    out += "v " + fmt_real(v.x) + " " + fmt_real(v.y) + " " + fmt_real(v.z) + "\n";
  for (const auto& uv3 : topology.uv_per_corner)
    for (const auto& uv : uv3)
      out += "vt " + fmt_real(uv.x) + " " + fmt_real(uv.y) + "\n";
  for (size_t t = 0; t < topology.triangles.size(); ++t) {
    out += "f";
    for (int c = 0; c < 3; ++c) {
      out += ' ' + std::to_string(topology.triangles[t][c] + 1) + '/' +
             std::to_string(t * 3 + c + 1);
    }
    out += '\n';
  }
  return out;
}

// --- headposes -----------------------------------------------------------------

Headpose parse_headpose(const std::string& text) {
  auto fields = split_ws(text);
  if (fields.size() != 12)
    throw ParseError("headpose needs 12 values, got " + std::to_string(fields.size()), 1);
  Headpose pose;
  for (int i = 0; i < 12; ++i)
    if (!parse_real(fields[i], pose.transform.m[i]))
      throw ParseError("bad headpose value", 1);
  validate_headpose(pose);
  return pose;
}

std::string serialize_headpose(const Headpose& pose) {
  std::string out;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) {
      if (c) out += ' ';
      out += fmt_real(pose.transform(r, c));
    }
    out += '\n';
  }
  return out;
}

void validate_headpose(const Headpose& pose, real tol) {
  Mat3 r = pose.transform.rotation();
  if (rotation_error(r) > tol)
    throw ValidationError("headpose rotation is not orthonormal");
  if (std::abs(r.det() - 1.0) > tol)
    throw ValidationError("headpose rotation determinant is not +1");
}

// --- calibrations (KRT) ----------------------------------------------------------

std::vector<CameraCalibration> load_calibrations(const std::string& krt_text) {
  std::vector<CameraCalibration> cams;
  std::set<std::string> ids;
  std::istringstream ss(krt_text);
  std::string line;
  int line_no = 0;
  // Collect non-blank lines with their numbers, then consume 8 per block.
  std::vector<std::pair<std::string, int>> lines;
  while (std::getline(ss, line)) {
    ++line_no;
    if (!split_ws(line).empty()) lines.emplace_back(line, line_no);
  }
  if (lines.size() % 8 != 0)
    throw ParseError("KRT blocks need 8 lines each",
                     lines.empty() ? 1 : lines.back().second);
  for (size_t b = 0; b < lines.size(); b += 8) {
    CameraCalibration cal;
    auto id_fields = split_ws(lines[b].first);
    if (id_fields.size() != 1)
      throw ParseError("camera id line must hold a single token", lines[b].second);
    cal.camera_id = id_fields[0];
    if (!ids.insert(cal.camera_id).second)
      throw DuplicateEntryError("duplicate camera id " + cal.camera_id);
    for (int r = 0; r < 3; ++r) {
      auto f = split_ws(lines[b + 1 + r].first);
      if (f.size() != 3) throw ParseError("intrinsic row needs 3 values", lines[b + 1 + r].second);
      for (int c = 0; c < 3; ++c)
        if (!parse_real(f[c], cal.intrinsics(r, c)))
          throw ParseError("bad intrinsic value", lines[b + 1 + r].second);
    }
    for (int r = 0; r < 3; ++r) {
      auto f = split_ws(lines[b + 4 + r].first);
      if (f.size() != 4) throw ParseError("extrinsic row needs 4 values", lines[b + 4 + r].second);
      for (int c = 0; c < 4; ++c)
        if (!parse_real(f[c], cal.extrinsics(r, c)))
          throw ParseError("bad extrinsic value", lines[b + 4 + r].second);
    }
    auto sz = split_ws(lines[b + 7].first);
    if (sz.size() != 2 || !parse_int(sz[0], cal.width) || !parse_int(sz[1], cal.height))
      throw ParseError("image size line needs width height", lines[b + 7].second);
    validate_calibration(cal);
    cams.push_back(std::move(cal));
  }
  return cams;
}

std::string write_calibrations(const std::vector<CameraCalibration>& cams) {
  std::string out;
  for (const auto& cal : cams) {
    out += cal.camera_id + "\n";
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        if (c) out += ' ';
        out += fmt_real(cal.intrinsics(r, c));
      }
      out += '\n';
    }
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 4; ++c) {
        if (c) out += ' ';
        out += fmt_real(cal.extrinsics(r, c));
      }
      out += '\n';
    }
    out += std::to_string(cal.width) + " " + std::to_string(cal.height) + "\n\n";
  }
  return out;
}

void validate_calibration(const CameraCalibration& cal, real rot_tol) {
  if (cal.intrinsics(0, 0) <= 0 || cal.intrinsics(1, 1) <= 0)
    throw ValidationError("camera " + cal.camera_id + ": fx and fy must be positive");
  if (std::abs(cal.intrinsics(2, 0)) > 1e-12 || std::abs(cal.intrinsics(2, 1)) > 1e-12 ||
      std::abs(cal.intrinsics(2, 2) - 1.0) > 1e-9)
    throw ValidationError("camera " + cal.camera_id + ": intrinsic bottom row must be 0 0 1");
  if (cal.width <= 0 || cal.height <= 0)
    throw ValidationError("camera " + cal.camera_id + ": image size must be positive");
  if (rotation_error(cal.extrinsics.rotation()) > rot_tol)
    throw ValidationError("camera " + cal.camera_id + ": extrinsic rotation not orthonormal");
}

// --- statistics -------------------------------------------------------------------

DatasetStats compute_stats(const std::vector<Texture>& textures,
                           const std::vector<TrackedMesh>& meshes) {
  if (textures.empty() || meshes.empty())
    throw EmptyInputError("compute_stats needs at least one texture and one mesh");
  int res = textures.front().res;
  for (const auto& t : textures)
    if (t.res != res) throw ShapeError("texture resolutions differ");
  int vc = meshes.front().vertex_count();
  for (const auto& m : meshes)
    if (m.vertex_count() != vc) throw ShapeError("mesh vertex counts differ");

  DatasetStats stats;
  stats.tex_mean = Texture(res);
  stats.tex_var = Texture(res);
  size_t n_tex = textures.front().pixels.size();
  // Two passes; population variance.
  for (const auto& t : textures)
    for (size_t i = 0; i < n_tex; ++i) stats.tex_mean.pixels[i] += t.pixels[i];
  for (size_t i = 0; i < n_tex; ++i) stats.tex_mean.pixels[i] /= real(textures.size());
  for (const auto& t : textures)
    for (size_t i = 0; i < n_tex; ++i) {
      real d = t.pixels[i] - stats.tex_mean.pixels[i];
      stats.tex_var.pixels[i] += d * d;
    }
  for (size_t i = 0; i < n_tex; ++i) stats.tex_var.pixels[i] /= real(textures.size());

  stats.vert_mean.assign(vc, Vec3{});
  stats.vert_var.assign(vc, Vec3{});
  for (const auto& m : meshes)
    for (int v = 0; v < vc; ++v) stats.vert_mean[v] = stats.vert_mean[v] + m.vertices[v];
  for (int v = 0; v < vc; ++v) stats.vert_mean[v] = stats.vert_mean[v] * (1.0 / real(meshes.size()));
  for (const auto& m : meshes)
    for (int v = 0; v < vc; ++v) {
      Vec3 d = m.vertices[v] - stats.vert_mean[v];
      stats.vert_var[v] = stats.vert_var[v] + Vec3{d.x * d.x, d.y * d.y, d.z * d.z};
    }
  for (int v = 0; v < vc; ++v) stats.vert_var[v] = stats.vert_var[v] * (1.0 / real(meshes.size()));
  return stats;
}

// --- capture-level IO ----------------------------------------------------------------

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw IoError("cannot open " + tmp.string());
    f << text;
  }
  std::filesystem::rename(tmp, path);
}

CaptureLayout load_manifest(const std::filesystem::path& root) {
  CaptureLayout layout;
  auto manifest = root / "manifest.json";
  if (!std::filesystem::exists(manifest)) return layout;
  json j = json::parse(read_text_file(manifest));
  layout.images_dir = j.value("images_dir", layout.images_dir);
  layout.meshes_dir = j.value("meshes_dir", layout.meshes_dir);
  layout.headposes_dir = j.value("headposes_dir", layout.headposes_dir);
  layout.krt_file = j.value("krt_file", layout.krt_file);
  layout.frame_list_file = j.value("frame_list_file", layout.frame_list_file);
  layout.stats_dir = j.value("stats_dir", layout.stats_dir);
  return layout;
}

std::filesystem::path CaptureSet::image_path(int frame, int camera) const {
  return root / layout.images_dir / cameras[camera].camera_id / frames[frame].segment /
         (frame_stem(frames[frame]) + ".png");
}

std::filesystem::path CaptureSet::mesh_path(int frame) const {
  return root / layout.meshes_dir / frames[frame].segment / (frame_stem(frames[frame]) + ".obj");
}

std::filesystem::path CaptureSet::headpose_path(int frame) const {
  return root / layout.headposes_dir / frames[frame].segment /
         (frame_stem(frames[frame]) + ".txt");
}

Image CaptureSet::load_image(int frame, int camera) const {
  return load_png(image_path(frame, camera));
}

int CaptureSet::camera_index(const std::string& id) const {
  for (size_t i = 0; i < cameras.size(); ++i)
    if (cameras[i].camera_id == id) return static_cast<int>(i);
  return -1;
}

const CameraCalibration& CaptureSet::camera(const std::string& id) const {
  int i = camera_index(id);
  if (i < 0) throw LookupError("unknown camera " + id);
  return cameras[i];
}

void save_stats(const std::filesystem::path& stats_dir, const DatasetStats& stats) {
  std::filesystem::create_directories(stats_dir);
  int res = stats.tex_mean.res;
  save_array(stats_dir / "tex_mean", {res, res, 3}, stats.tex_mean.pixels);
  save_array(stats_dir / "tex_var", {res, res, 3}, stats.tex_var.pixels);
  int vc = static_cast<int>(stats.vert_mean.size());
  std::vector<double> flat(size_t(vc) * 3);
  auto flatten = [&](const std::vector<Vec3>& v) {
    for (int i = 0; i < vc; ++i) {
      flat[i * 3 + 0] = v[i].x;
      flat[i * 3 + 1] = v[i].y;
      flat[i * 3 + 2] = v[i].z;
    }
  };
  flatten(stats.vert_mean);
  save_array(stats_dir / "vert_mean", {vc, 3}, flat);
  flatten(stats.vert_var);
  save_array(stats_dir / "vert_var", {vc, 3}, flat);
}

DatasetStats load_stats(const std::filesystem::path& stats_dir, int expected_res,
                        int expected_vertex_count) {
  DatasetStats stats;
  auto tm = load_array(stats_dir / "tex_mean");
  auto tv = load_array(stats_dir / "tex_var");
  if (tm.shape != std::vector<int>{expected_res, expected_res, 3} || tm.shape != tv.shape)
    throw ShapeError("texture stats shape mismatch");
  stats.tex_mean = Texture(expected_res);
  stats.tex_mean.pixels = std::move(tm.data);
  stats.tex_var = Texture(expected_res);
  stats.tex_var.pixels = std::move(tv.data);
  auto vm = load_array(stats_dir / "vert_mean");
  auto vv = load_array(stats_dir / "vert_var");
  if (vm.shape != std::vector<int>{expected_vertex_count, 3} || vm.shape != vv.shape)
    throw ShapeError("vertex stats shape mismatch");
  auto unflatten = [&](const std::vector<double>& flat) {
    std::vector<Vec3> out(expected_vertex_count);
    for (int i = 0; i < expected_vertex_count; ++i)
      out[i] = {flat[i * 3], flat[i * 3 + 1], flat[i * 3 + 2]};
    return out;
  };
  stats.vert_mean = unflatten(vm.data);
  stats.vert_var = unflatten(vv.data);
  for (const auto& v : stats.vert_var)
    if (v.x < 0 || v.y < 0 || v.z < 0) throw ValidationError("negative vertex variance");
  for (real v : stats.tex_var.pixels)
    if (v < 0) throw ValidationError("negative texture variance");
  return stats;
}

CaptureSet load_capture(const std::filesystem::path& root) {
  CaptureSet cs;
  cs.root = root;
  cs.layout = load_manifest(root);
  cs.frames = parse_frame_list(read_text_file(root / cs.layout.frame_list_file));
  if (cs.frames.empty()) throw EmptyInputError("capture has no frames");
  cs.cameras = load_calibrations(read_text_file(root / cs.layout.krt_file));

  cs.meshes.reserve(cs.frames.size());
  cs.headposes.reserve(cs.frames.size());
  for (int f = 0; f < cs.frame_count(); ++f) {
    auto lm = load_mesh(read_text_file(cs.mesh_path(f)));
    if (f == 0) {
      cs.topology = std::move(lm.topology);
    } else if (lm.topology.triangles != cs.topology.triangles ||
               lm.topology.vertex_count != cs.topology.vertex_count) {
      throw ValidationError("per-frame mesh topology differs from frame 0");
    }
    cs.meshes.push_back(std::move(lm.mesh));
    cs.headposes.push_back(parse_headpose(read_text_file(cs.headpose_path(f))));
  }
  cs.stats = load_stats(root / cs.layout.stats_dir, /*expected_res=*/[&] {
    auto tm = load_array(root / cs.layout.stats_dir / "tex_mean");
    return tm.shape.empty() ? 0 : tm.shape[0];
  }(), cs.topology.vertex_count);
  return cs;
}

void validate_capture(const CaptureSet& cs) {
  if (cs.frames.empty()) throw EmptyInputError("capture has no frames");
  if (cs.cameras.empty()) throw EmptyInputError("capture has no cameras");
  if (cs.meshes.size() != cs.frames.size() || cs.headposes.size() != cs.frames.size())
    throw ShapeError("per-frame mesh/headpose count mismatch");
  if (cs.topology.vertex_count < 3) throw ValidationError("topology needs at least 3 vertices");
  for (const auto& tri : cs.topology.triangles)
    for (int idx : tri)
      if (idx < 0 || idx >= cs.topology.vertex_count)
        throw StructuralError("triangle index out of range");
  for (const auto& uv3 : cs.topology.uv_per_corner)
    for (const auto& uv : uv3)
      if (uv.x < 0 || uv.x > 1 || uv.y < 0 || uv.y > 1)
        throw ValidationError("UV coordinate outside [0,1]");
  for (const auto& m : cs.meshes)
    if (m.vertex_count() != cs.topology.vertex_count)
      throw ShapeError("mesh vertex count does not match topology");
  for (const auto& hp : cs.headposes) validate_headpose(hp, 1e-4);
  for (const auto& cal : cs.cameras) validate_calibration(cal);
  if (cs.stats.tex_mean.res == 0) throw ValidationError("missing texture stats");
  if (static_cast<int>(cs.stats.vert_mean.size()) != cs.topology.vertex_count)
    throw ShapeError("vertex stats size mismatch");
  for (int f = 0; f < cs.frame_count(); ++f)
    for (int c = 0; c < cs.camera_count(); ++c)
      if (!std::filesystem::exists(cs.image_path(f, c)))
        throw IoError("missing image " + cs.image_path(f, c).string());
}

}  // namespace mvf

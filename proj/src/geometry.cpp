#include "mvface/geometry.hpp"

#include <cmath>

#include "mvface/error.hpp"

namespace mvf {

TrackedMesh apply_headpose(const TrackedMesh& mesh, const Headpose& pose) {
  TrackedMesh out;
  out.vertices.reserve(mesh.vertices.size());
  for (const auto& v : mesh.vertices) out.vertices.push_back(pose.transform.apply(v));
  return out;
}

Headpose inverse_headpose(const Headpose& pose) {
  Mat3 rt = pose.transform.rotation().transposed();
  Vec3 t = pose.transform.translation();
  Headpose inv;
  inv.transform.set_rotation(rt);
  inv.transform.set_translation(rt * t * -1.0);
  return inv;
}

ScreenVertex project(const CameraCalibration& cal, const Vec3& world_point) {
  Vec3 p_cam = cal.extrinsics.apply(world_point);
  Vec3 h = cal.intrinsics * p_cam;
  ScreenVertex sv;
  sv.depth = p_cam.z;
  sv.behind = p_cam.z <= 0;
  if (h.z != 0) sv.xy = {h.x / h.z, h.y / h.z};
  return sv;
}

Vec3 unproject(const CameraCalibration& cal, const Vec2& pixel, real depth) {
  Vec3 ray = cal.intrinsics.inverse() * Vec3{pixel.x, pixel.y, 1.0};
  Vec3 p_cam = ray * (depth / ray.z);
  Mat3 rt = cal.extrinsics.rotation().transposed();
  return rt * (p_cam - cal.extrinsics.translation());
}

Vec3 camera_position(const CameraCalibration& cal) {
  Mat3 rt = cal.extrinsics.rotation().transposed();
  return rt * cal.extrinsics.translation() * -1.0;
}

std::array<real, 3> barycentric(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& p) {
  real d = signed_area2(a, b, c);
  // area^2 > 1e-20 px^4, i.e. |2A| > 2e-10.
  if (d * d <= 4e-20) throw ValidationError("degenerate triangle in barycentric");
  real w0 = cross2(b - p, c - p) / d;
  real w1 = cross2(c - p, a - p) / d;
  return {w0, w1, 1.0 - w0 - w1};
}

}  // namespace mvf

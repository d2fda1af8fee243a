#pragma once

// Rigid transforms, pinhole projection, and barycentric coordinates.
// Conventions: image origin top-left, y down; integer pixel (i, j) samples
// the continuous coordinate (i + 0.5, j + 0.5).

#include "mvface/capture.hpp"
#include "mvface/vecmath.hpp"

namespace mvf {

struct ScreenVertex {
  Vec2 xy;          // pixel coordinates
  real depth = 0;   // camera-space z, millimeters
  bool behind = false;  // depth <= 0; caller culls
};

// v' = R v + t per vertex.
TrackedMesh apply_headpose(const TrackedMesh& mesh, const Headpose& pose);
Headpose inverse_headpose(const Headpose& pose);

// Perspective projection through intrinsics; homogeneous in the overall
// scale of the intrinsic matrix.
ScreenVertex project(const CameraCalibration& cal, const Vec3& world_point);
// Inverse of project at a known camera-space depth.
Vec3 unproject(const CameraCalibration& cal, const Vec2& pixel, real depth);
// Camera center in world coordinates.
Vec3 camera_position(const CameraCalibration& cal);

// Barycentric weights of p in triangle (a, b, c); w0 + w1 + w2 == 1 exactly
// (the last weight is computed as 1 - w0 - w1). Throws on degenerate input.
std::array<real, 3> barycentric(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& p);

// Twice the signed area of (a, b, c) in pixel coordinates (y down).
inline real signed_area2(const Vec2& a, const Vec2& b, const Vec2& c) {
  return cross2(b - a, c - a);
}

}  // namespace mvf

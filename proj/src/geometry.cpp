#include "searchplan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace searchplan {

Cuboid::Cuboid(const Vec3& center, const Vec3& dims)
    : center_(center), dims_(dims) {
  if (!center.allFinite() || !dims.allFinite()) {
    throw std::invalid_argument("Cuboid: non-finite center or dims");
  }
  if ((dims.array() <= 0.0).any()) {
    throw std::invalid_argument("Cuboid: dims must be positive");
  }
  for (int axis = 0; axis < 3; ++axis) {
    Vec3 n = Vec3::Zero();
    n[axis] = 1.0;
    planes_[2 * axis] = Plane{n, center[axis] + 0.5 * dims[axis]};
    planes_[2 * axis + 1] = Plane{-n, -(center[axis] - 0.5 * dims[axis])};
  }
}

Cuboid Cuboid::from_min_max(const Vec3& lo, const Vec3& hi) {
  return Cuboid(0.5 * (lo + hi), hi - lo);
}

std::array<Vec3, 8> Cuboid::corners() const {
  const Vec3 lo = min_corner();
  const Vec3 hi = max_corner();
  std::array<Vec3, 8> out;
  for (int i = 0; i < 8; ++i) {
    out[i] = Vec3((i & 1) ? hi.x() : lo.x(), (i & 2) ? hi.y() : lo.y(),
                  (i & 4) ? hi.z() : lo.z());
  }
  return out;
}

bool contains(const Cuboid& c, const Vec3& p) {
  for (const Plane& plane : c.planes()) {
    if (halfspace_side(plane, p) > 0.0) return false;
  }
  return true;
}

std::array<Face, kCuboidFaceCount> faces(const Cuboid& c) {
  const Vec3 lo = c.min_corner();
  const Vec3 hi = c.max_corner();
  const Vec3& d = c.dims();
  std::array<Face, kCuboidFaceCount> out;
  for (int f = 0; f < kCuboidFaceCount; ++f) {
    const int axis = f / 2;
    const bool positive = (f % 2 == 0);
    const int ua = (axis == 0) ? 1 : 0;       // first in-plane axis
    const int va = (axis == 2) ? 1 : 2;       // second in-plane axis
    Face face;
    face.index = f;
    face.outward_normal = Vec3::Zero();
    face.outward_normal[axis] = positive ? 1.0 : -1.0;
    face.u_axis = Vec3::Zero();
    face.u_axis[ua] = 1.0;
    face.v_axis = Vec3::Zero();
    face.v_axis[va] = 1.0;
    face.extent_u = d[ua];
    face.extent_v = d[va];
    face.origin = lo;
    face.origin[axis] = positive ? hi[axis] : lo[axis];
    out[f] = face;
  }
  return out;
}

bool segment_intersects(const Cuboid& c, const Vec3& p0, const Vec3& p1) {
  // Slab test on the segment parameter range [0, 1].
  const Vec3 lo = c.min_corner();
  const Vec3 hi = c.max_corner();
  const Vec3 dir = p1 - p0;
  double tmin = 0.0;
  double tmax = 1.0;
  for (int axis = 0; axis < 3; ++axis) {
    if (std::abs(dir[axis]) < 1e-300) {
      if (p0[axis] < lo[axis] || p0[axis] > hi[axis]) return false;
      continue;
    }
    double t0 = (lo[axis] - p0[axis]) / dir[axis];
    double t1 = (hi[axis] - p0[axis]) / dir[axis];
    if (t0 > t1) std::swap(t0, t1);
    tmin = std::max(tmin, t0);
    tmax = std::min(tmax, t1);
    if (tmin > tmax) return false;
  }
  return true;
}

bool boxes_overlap(const Cuboid& a, const Cuboid& b) {
  const Vec3 alo = a.min_corner(), ahi = a.max_corner();
  const Vec3 blo = b.min_corner(), bhi = b.max_corner();
  for (int axis = 0; axis < 3; ++axis) {
    if (ahi[axis] < blo[axis] || bhi[axis] < alo[axis]) return false;
  }
  return true;
}

}  // namespace searchplan

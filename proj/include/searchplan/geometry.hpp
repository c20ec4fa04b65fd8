#ifndef SEARCHPLAN_GEOMETRY_HPP
#define SEARCHPLAN_GEOMETRY_HPP

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace searchplan {

using Vec3 = Eigen::Vector3d;

/// Plane alpha.x = b with outward unit normal. Points with alpha.x < b lie
/// in the negative half-space (the inside, for cuboid faces).
struct Plane {
  Vec3 normal{Vec3::Zero()};
  double offset{0.0};
};

/// Signed side of p relative to the plane: normal.p - offset.
/// Negative means negative half-space, positive means positive half-space.
inline double halfspace_side(const Plane& plane, const Vec3& p) {
  return plane.normal.dot(p) - plane.offset;
}

/// Canonical face order used everywhere: +x, -x, +y, -y, +z, -z.
enum FaceIndex : int {
  kFacePosX = 0,
  kFaceNegX = 1,
  kFacePosY = 2,
  kFaceNegY = 3,
  kFacePosZ = 4,
  kFaceNegZ = 5,
};

constexpr int kCuboidFaceCount = 6;

/// Axis-aligned rectangular cuboid, stored both as center/dims box and as
/// the intersection of six outward-normal half-spaces.
class Cuboid {
 public:
  Cuboid() = default;
  Cuboid(const Vec3& center, const Vec3& dims);

  static Cuboid from_min_max(const Vec3& lo, const Vec3& hi);

  const Vec3& center() const { return center_; }
  const Vec3& dims() const { return dims_; }
  const std::array<Plane, kCuboidFaceCount>& planes() const { return planes_; }

  Vec3 min_corner() const { return center_ - 0.5 * dims_; }
  Vec3 max_corner() const { return center_ + 0.5 * dims_; }
  std::array<Vec3, 8> corners() const;

 private:
  Vec3 center_{Vec3::Zero()};
  Vec3 dims_{Vec3::Ones()};
  std::array<Plane, kCuboidFaceCount> planes_{};
};

/// One rectangular face of a cuboid. origin is a corner, u_axis/v_axis are
/// orthonormal in-plane directions, extents are the side lengths along them.
struct Face {
  int index{0};  // position in the canonical face order of the owner
  Vec3 origin{Vec3::Zero()};
  Vec3 u_axis{Vec3::UnitX()};
  Vec3 v_axis{Vec3::UnitY()};
  double extent_u{0.0};
  double extent_v{0.0};
  Vec3 outward_normal{Vec3::UnitZ()};

  Vec3 center() const {
    return origin + 0.5 * extent_u * u_axis + 0.5 * extent_v * v_axis;
  }
};

enum class ObjectKind { obstacle, object_of_interest, goal };

/// Union of simple cuboids (a compound object).
struct CompoundObject {
  std::vector<Cuboid> parts;
  ObjectKind kind{ObjectKind::obstacle};
};

/// True iff p lies inside the closed cuboid (all six half-space tests <= 0).
bool contains(const Cuboid& c, const Vec3& p);

/// The six faces in canonical order, with outward normals.
std::array<Face, kCuboidFaceCount> faces(const Cuboid& c);

/// True iff the closed segment p0->p1 intersects the closed cuboid.
bool segment_intersects(const Cuboid& c, const Vec3& p0, const Vec3& p1);

/// True iff the two closed axis-aligned boxes overlap (positive volume or
/// touching counts as overlap).
bool boxes_overlap(const Cuboid& a, const Cuboid& b);

}  // namespace searchplan

#endif  // SEARCHPLAN_GEOMETRY_HPP

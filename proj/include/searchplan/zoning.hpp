#ifndef SEARCHPLAN_ZONING_HPP
#define SEARCHPLAN_ZONING_HPP

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "searchplan/geometry.hpp"
#include "searchplan/sensing.hpp"

namespace searchplan {

/// One distance band around an object: near side at d_near from the face,
/// depth meters thick, carrying one detection probability.
struct ZoneSpec {
  int index{0};
  double d_near{0.0};
  double depth{0.0};
  double pd{0.0};
  std::optional<double> cell_side_override;
};

/// One cuboid of a zone: covers one grid cell of one object face, with a
/// concentric interior cube the agent must enter to count the cell searched.
struct SearchCell {
  Cuboid box;
  Cuboid cube;
  int face_index{0};
  int row{0};
  int col{0};
  int zone_index{0};
  double side_u{0.0};   // grid cell side along the face u axis
  double side_v{0.0};   // grid cell side along the face v axis
  double depth{0.0};
  double d_near{0.0};   // object face to the cell's near side
  Vec3 face_normal{Vec3::UnitX()};

  /// Face-aligned dimensions [side_u, side_v, depth].
  Vec3 sigma() const { return Vec3(side_u, side_v, depth); }
};

struct Zone {
  ZoneSpec spec;
  std::vector<SearchCell> cells;
  int object_index{0};
  /// Pairs of cell indices on different faces whose cuboids overlap in
  /// space. Reported, not merged: visitation constraints stay per cell.
  std::vector<std::pair<int, int>> overlapping_cells;
};

struct GridCell {
  int row{0};
  int col{0};
  Vec3 center{Vec3::Zero()};  // on the face plane
  double side_u{0.0};
  double side_v{0.0};
};

/// Partition [breakpoints_0, breakpoints_N] into N zone bands. Zone i spans
/// [b_i, b_{i+1}); its default pd is the detection probability at the far
/// edge (the infimum over the band). Overrides, when nonempty, must have
/// exactly N entries.
std::vector<ZoneSpec> quantize_detection(
    const SensorModel& s, const std::vector<double>& breakpoints,
    const std::vector<double>& pd_overrides = {},
    const std::vector<double>& cell_side_overrides = {});

/// Tile a face with ceil(extent/cell_side) cells per axis, shrinking cell
/// sides so the tiling is exact (cells never exceed cell_side).
std::vector<GridCell> face_grid(const Face& face, double cell_side);

/// Build the zone band around one object cuboid for the given faces.
/// Every cell's interior cube is validated by coverage_margin_check.
Zone build_zone(const Cuboid& object, const std::set<int>& faces_to_search,
                const ZoneSpec& spec, const SensorModel& s,
                double cube_fraction);

/// True iff the footprint from the worst-case waypoint inside the interior
/// cube still encloses the grid cell: r(d_inner) >= grid side + 2h, with
/// d_inner the object-face distance of the cube's near face and h the
/// cube's half side.
bool coverage_margin_check(const SearchCell& cell, const SensorModel& s);

}  // namespace searchplan

#endif  // SEARCHPLAN_ZONING_HPP

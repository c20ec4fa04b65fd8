#include "searchplan/zoning.hpp"

#include <algorithm>
#include <cmath>

#include "searchplan/error.hpp"

namespace searchplan {

std::vector<ZoneSpec> quantize_detection(
    const SensorModel& s, const std::vector<double>& breakpoints,
    const std::vector<double>& pd_overrides,
    const std::vector<double>& cell_side_overrides) {
  if (breakpoints.size() < 2) {
    throw Error("zone_breakpoints", "need at least two breakpoints");
  }
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i] > breakpoints[i - 1])) {
      throw Error("zone_breakpoints", "breakpoints must be strictly increasing");
    }
  }
  if (breakpoints.front() < s.d_min) {
    throw Error("zone_breakpoints", "first breakpoint below sensor d_min");
  }
  if (breakpoints.back() > s.d_max) {
    throw Error("zone_breakpoints", "last breakpoint beyond sensor d_max");
  }
  const std::size_t n = breakpoints.size() - 1;
  if (!pd_overrides.empty() && pd_overrides.size() != n) {
    throw Error("zone_overrides", "pd_overrides must have one entry per zone");
  }
  if (!cell_side_overrides.empty() && cell_side_overrides.size() != n) {
    throw Error("zone_overrides",
                "cell_side_overrides must have one entry per zone");
  }
  std::vector<ZoneSpec> specs;
  specs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ZoneSpec spec;
    spec.index = static_cast<int>(i);
    spec.d_near = breakpoints[i];
    spec.depth = breakpoints[i + 1] - breakpoints[i];
    spec.pd = pd_overrides.empty() ? detection_prob(breakpoints[i + 1], s)
                                   : pd_overrides[i];
    if (spec.pd < 0.0 || spec.pd > 1.0) {
      throw Error("zone_overrides", "pd override outside [0,1]");
    }
    if (!cell_side_overrides.empty()) {
      if (!(cell_side_overrides[i] > 0.0)) {
        throw Error("zone_overrides", "cell side override must be positive");
      }
      spec.cell_side_override = cell_side_overrides[i];
    }
    specs.push_back(spec);
  }
  return specs;
}

std::vector<GridCell> face_grid(const Face& face, double cell_side) {
  if (!(cell_side > 0.0)) {
    throw Error("zone_cell_side", "cell side must be positive");
  }
  const int rows = std::max(1, static_cast<int>(std::ceil(
                                   face.extent_u / cell_side - 1e-12)));
  const int cols = std::max(1, static_cast<int>(std::ceil(
                                   face.extent_v / cell_side - 1e-12)));
  const double side_u = face.extent_u / rows;
  const double side_v = face.extent_v / cols;
  std::vector<GridCell> cells;
  cells.reserve(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      GridCell cell;
      cell.row = r;
      cell.col = c;
      cell.side_u = side_u;
      cell.side_v = side_v;
      cell.center = face.origin + (r + 0.5) * side_u * face.u_axis +
                    (c + 0.5) * side_v * face.v_axis;
      cells.push_back(cell);
    }
  }
  return cells;
}

bool coverage_margin_check(const SearchCell& cell, const SensorModel& s) {
  const double h = 0.5 * cell.cube.dims().minCoeff();
  const double d_inner = cell.d_near + 0.5 * cell.depth - h;
  if (d_inner < 0.0) return false;
  const double r = footprint_side(d_inner, s);
  return r >= std::max(cell.side_u, cell.side_v) + 2.0 * h;
}

Zone build_zone(const Cuboid& object, const std::set<int>& faces_to_search,
                const ZoneSpec& spec, const SensorModel& s,
                double cube_fraction) {
  if (faces_to_search.empty()) {
    throw Error("zone_faces", "faces_to_search must be nonempty");
  }
  if (!(spec.d_near > 0.0) || !(spec.depth > 0.0)) {
    throw Error("zone_spec", "zone d_near and depth must be positive");
  }
  if (!(cube_fraction > 0.0 && cube_fraction <= 1.0)) {
    throw Error("zone_spec", "cube_fraction must be in (0,1]");
  }
  const auto object_faces = faces(object);
  const double cell_side =
      spec.cell_side_override.value_or(footprint_side(spec.d_near, s));

  Zone zone;
  zone.spec = spec;
  for (int f : faces_to_search) {
    if (f < 0 || f >= kCuboidFaceCount) {
      throw Error("zone_faces", "face index out of range");
    }
    if (f == kFaceNegZ) {
      throw Error("zone_faces", "the ground face is not searchable");
    }
    const Face& face = object_faces[f];
    for (const GridCell& gc : face_grid(face, cell_side)) {
      SearchCell cell;
      cell.face_index = f;
      cell.row = gc.row;
      cell.col = gc.col;
      cell.zone_index = spec.index;
      cell.side_u = gc.side_u;
      cell.side_v = gc.side_v;
      cell.depth = spec.depth;
      cell.d_near = spec.d_near;
      cell.face_normal = face.outward_normal;

      const Vec3 box_center =
          gc.center + (spec.d_near + 0.5 * spec.depth) * face.outward_normal;
      Vec3 box_dims = gc.side_u * face.u_axis.cwiseAbs() +
                      gc.side_v * face.v_axis.cwiseAbs() +
                      spec.depth * face.outward_normal.cwiseAbs();
      cell.box = Cuboid(box_center, box_dims);

      const double cube_side = cube_fraction * box_dims.minCoeff();
      cell.cube = Cuboid(box_center, Vec3::Constant(cube_side));

      if (!coverage_margin_check(cell, s)) {
        throw Error("coverage_margin",
                    "interior cube footprint cannot cover its grid cell");
      }
      zone.cells.push_back(std::move(cell));
    }
  }
  for (std::size_t a = 0; a < zone.cells.size(); ++a) {
    for (std::size_t b = a + 1; b < zone.cells.size(); ++b) {
      if (zone.cells[a].face_index != zone.cells[b].face_index &&
          boxes_overlap(zone.cells[a].box, zone.cells[b].box)) {
        zone.overlapping_cells.emplace_back(static_cast<int>(a),
                                            static_cast<int>(b));
      }
    }
  }
  return zone;
}

}  // namespace searchplan

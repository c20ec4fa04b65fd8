#include <doctest.h>

#include <cmath>

#include "searchplan/error.hpp"
#include "searchplan/zoning.hpp"

using namespace searchplan;

namespace {
constexpr double kDeg = 3.14159265358979323846 / 180.0;
const SensorModel paper_sensor{60.0 * kDeg, 17.0, 93.0};
const std::vector<double> paper_breakpoints{17.0, 27.0, 53.0, 93.0};
const Cuboid paper_building(Vec3(0, 0, 30), Vec3(60, 60, 60));
const std::set<int> side_faces{kFacePosX, kFaceNegX, kFacePosY, kFaceNegY};
}  // namespace

TEST_CASE("quantize_detection on the paper breakpoints") {
  const auto specs = quantize_detection(paper_sensor, paper_breakpoints);
  REQUIRE(specs.size() == 3);
  CHECK(specs[0].depth == doctest::Approx(10.0));
  CHECK(specs[1].depth == doctest::Approx(26.0));
  CHECK(specs[2].depth == doctest::Approx(40.0));
  CHECK(specs[0].d_near == doctest::Approx(17.0));
  CHECK(specs[1].d_near == doctest::Approx(27.0));
  CHECK(specs[2].d_near == doctest::Approx(53.0));
  // Default pd: far-edge infimum of the detection probability.
  CHECK(specs[0].pd == doctest::Approx(detection_prob(27.0, paper_sensor)));
  CHECK(specs[0].pd == doctest::Approx(1.0 - 10.0 / 76.0).epsilon(1e-12));
  CHECK(specs[1].pd == doctest::Approx(1.0 - 36.0 / 76.0).epsilon(1e-12));
  CHECK(specs[2].pd == doctest::Approx(0.0));

  const auto with_overrides = quantize_detection(
      paper_sensor, paper_breakpoints, {0.95, 0.75, 0.25}, {20.0, 30.0, 60.0});
  CHECK(with_overrides[0].pd == doctest::Approx(0.95));
  CHECK(with_overrides[1].pd == doctest::Approx(0.75));
  CHECK(with_overrides[2].pd == doctest::Approx(0.25));
  CHECK(with_overrides[1].cell_side_override.value() == doctest::Approx(30.0));
}

TEST_CASE("quantize_detection rejects bad breakpoints") {
  CHECK_THROWS_AS(quantize_detection(paper_sensor, {17.0, 17.0, 53.0}), Error);
  CHECK_THROWS_AS(quantize_detection(paper_sensor, {10.0, 27.0}), Error);
  CHECK_THROWS_AS(quantize_detection(paper_sensor, {17.0, 94.0}), Error);
  CHECK_THROWS_AS(quantize_detection(paper_sensor, {17.0}), Error);
  CHECK_THROWS_AS(
      quantize_detection(paper_sensor, paper_breakpoints, {0.5, 0.5}), Error);
}

TEST_CASE("face_grid tiling") {
  const Face face = faces(paper_building)[kFacePosX];
  CHECK(face_grid(face, 20.0).size() == 9);
  CHECK(face_grid(face, 30.0).size() == 4);
  CHECK(face_grid(face, 60.0).size() == 1);

  // Shrink-to-tile: a 60 m extent with 25 m cells gives 3 cells of 20 m.
  const auto grid = face_grid(face, 25.0);
  REQUIRE(grid.size() == 9);
  for (const auto& cell : grid) {
    CHECK(cell.side_u == doctest::Approx(20.0));
    CHECK(cell.side_v == doctest::Approx(20.0));
    CHECK(cell.side_u <= 25.0);
  }
}

TEST_CASE("build_zone reproduces the paper zone structure") {
  const auto specs = quantize_detection(
      paper_sensor, paper_breakpoints, {0.95, 0.75, 0.25}, {20.0, 30.0, 60.0});

  const Zone z1 = build_zone(paper_building, side_faces, specs[0], paper_sensor, 0.2);
  CHECK(z1.cells.size() == 36);
  for (const SearchCell& c : z1.cells) {
    CHECK(c.sigma().isApprox(Vec3(20, 20, 10), 1e-12));
    CHECK(coverage_margin_check(c, paper_sensor));
  }

  const Zone z2 = build_zone(paper_building, side_faces, specs[1], paper_sensor, 0.2);
  CHECK(z2.cells.size() == 16);
  for (const SearchCell& c : z2.cells) {
    CHECK(c.sigma().isApprox(Vec3(30, 30, 26), 1e-12));
  }

  const Zone z3 = build_zone(paper_building, side_faces, specs[2], paper_sensor, 0.2);
  CHECK(z3.cells.size() == 4);
  for (const SearchCell& c : z3.cells) {
    CHECK(c.sigma().isApprox(Vec3(60, 60, 40), 1e-12));
  }
}

TEST_CASE("build_zone single face and interior cube placement") {
  const auto specs = quantize_detection(
      paper_sensor, paper_breakpoints, {0.95, 0.75, 0.25}, {20.0, 30.0, 60.0});
  const Zone z2 = build_zone(paper_building, {kFacePosX}, specs[1], paper_sensor, 0.2);
  REQUIRE(z2.cells.size() == 4);

  for (const SearchCell& c : z2.cells) {
    // Concentric, strictly inside.
    CHECK(c.cube.center().isApprox(c.box.center(), 1e-12));
    CHECK((c.cube.dims().array() < c.box.dims().array()).all());
    CHECK(c.cube.dims().x() == doctest::Approx(c.cube.dims().y()));
    CHECK(c.cube.dims().x() == doctest::Approx(0.2 * 26.0));
    // Near side of the cell sits d_near off the object face (+x at x=30).
    CHECK(c.box.min_corner().x() == doctest::Approx(30.0 + 27.0));
    CHECK(c.box.max_corner().x() == doctest::Approx(30.0 + 53.0));
  }

  // cube_fraction = 1 degenerates to the largest inscribed cube; the
  // footprint can no longer cover the cell from inside it.
  CHECK_THROWS_AS(
      build_zone(paper_building, {kFacePosX}, specs[1], paper_sensor, 1.0),
      Error);
}

TEST_CASE("coverage_margin_check arithmetic") {
  const auto specs = quantize_detection(
      paper_sensor, paper_breakpoints, {0.95, 0.75, 0.25}, {20.0, 30.0, 60.0});
  const Zone z1 = build_zone(paper_building, {kFacePosY}, specs[0], paper_sensor, 0.2);
  for (const SearchCell& c : z1.cells) {
    // h = 1, cube near face at 17 + 5 - 1 = 21 m from the object face.
    const double h = 0.5 * c.cube.dims().minCoeff();
    CHECK(h == doctest::Approx(1.0));
    const double r = footprint_side(c.d_near + 0.5 * c.depth - h, paper_sensor);
    CHECK(r >= 20.0 + 2.0 * h);
    CHECK(coverage_margin_check(c, paper_sensor));
  }

  // A point waypoint (tiny cube) at the cell center only needs
  // r(d_center) >= grid side.
  SearchCell point_cell = z1.cells[0];
  point_cell.cube = Cuboid(point_cell.box.center(), Vec3::Constant(1e-9));
  CHECK(coverage_margin_check(point_cell, paper_sensor));

  // An oversized cube pushes the waypoint too close to the face and too far
  // off-center: the check must fail.
  SearchCell fat_cell = z1.cells[0];
  fat_cell.cube = Cuboid(fat_cell.box.center(), Vec3::Constant(0.9 * 10.0));
  CHECK_FALSE(coverage_margin_check(fat_cell, paper_sensor));
}

TEST_CASE("zone invariants: counts, containment, tiling") {
  const auto specs = quantize_detection(paper_sensor, {20.0, 35.0, 60.0});
  const Cuboid object(Vec3(10, 10, 25), Vec3(50, 30, 50));

  for (const ZoneSpec& spec : specs) {
    const Zone zone =
        build_zone(object, {kFacePosX, kFacePosY, kFacePosZ}, spec, paper_sensor, 0.15);
    // Expected cell count from the tiling formula, face by face.
    std::size_t expected = 0;
    const double side = spec.cell_side_override.value_or(
        footprint_side(spec.d_near, paper_sensor));
    for (int f : {kFacePosX, kFacePosY, kFacePosZ}) {
      const Face& face = faces(object)[f];
      expected += static_cast<std::size_t>(std::ceil(face.extent_u / side - 1e-12)) *
                  static_cast<std::size_t>(std::ceil(face.extent_v / side - 1e-12));
    }
    CHECK(zone.cells.size() == expected);

    for (const SearchCell& c : zone.cells) {
      CHECK(c.cube.center().isApprox(c.box.center(), 1e-9));
      CHECK(contains(c.box, c.cube.min_corner()));
      CHECK(contains(c.box, c.cube.max_corner()));
      CHECK(coverage_margin_check(c, paper_sensor));
    }
  }
}

TEST_CASE("ground face is not searchable") {
  const auto specs = quantize_detection(paper_sensor, {20.0, 30.0});
  CHECK_THROWS_AS(
      build_zone(paper_building, {kFaceNegZ}, specs[0], paper_sensor, 0.2),
      Error);
}

TEST_CASE("cells of different faces never overlap on a convex cuboid") {
  const auto specs = quantize_detection(
      paper_sensor, paper_breakpoints, {0.95, 0.75, 0.25}, {20.0, 30.0, 60.0});
  // Lateral extents never exceed the face span, so outward extrusions of
  // different faces of the same cuboid stay disjoint; the overlap report is
  // only populated for rotated or compound geometry.
  for (const ZoneSpec& spec : specs) {
    const Zone z = build_zone(paper_building, side_faces, spec, paper_sensor, 0.2);
    CHECK(z.overlapping_cells.empty());
  }
}

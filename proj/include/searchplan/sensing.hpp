#ifndef SEARCHPLAN_SENSING_HPP
#define SEARCHPLAN_SENSING_HPP

namespace searchplan {

/// Camera model: square field-of-view of angle fov_rad, useful working
/// distances (d_min, d_max) for person detection.
struct SensorModel {
  double fov_rad{0.0};
  double d_min{0.0};
  double d_max{0.0};
};

void validate(const SensorModel& s);  // throws std::invalid_argument

/// Side length r(d) = 2 d tan(fov/2) of the square footprint projected on a
/// surface at distance d. Throws on negative d.
double footprint_side(double d, const SensorModel& s);

/// Probability of detecting a person in a frame taken at distance d:
/// 0 for d <= d_min, max(0, 1 - (d - d_min)/(d_max - d_min)) beyond.
double detection_prob(double d, const SensorModel& s);

/// Search confidence q(d) = detection_prob(d) * footprint area r(d)^2.
double search_confidence(double d, const SensorModel& s);

}  // namespace searchplan

#endif  // SEARCHPLAN_SENSING_HPP

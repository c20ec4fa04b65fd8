#include "searchplan/sensing.hpp"

#include <cmath>
#include <stdexcept>

namespace searchplan {

void validate(const SensorModel& s) {
  const double pi = 3.14159265358979323846;
  if (!(s.fov_rad > 0.0 && s.fov_rad < pi)) {
    throw std::invalid_argument("SensorModel: fov must be in (0, pi)");
  }
  if (!(s.d_min >= 0.0 && s.d_min < s.d_max)) {
    throw std::invalid_argument("SensorModel: need 0 <= d_min < d_max");
  }
}

double footprint_side(double d, const SensorModel& s) {
  if (d < 0.0) throw std::invalid_argument("footprint_side: negative distance");
  return 2.0 * d * std::tan(0.5 * s.fov_rad);
}

double detection_prob(double d, const SensorModel& s) {
  if (d <= s.d_min) return 0.0;
  return std::max(0.0, 1.0 - (d - s.d_min) / (s.d_max - s.d_min));
}

double search_confidence(double d, const SensorModel& s) {
  const double r = footprint_side(d, s);
  return detection_prob(d, s) * r * r;
}

}  // namespace searchplan

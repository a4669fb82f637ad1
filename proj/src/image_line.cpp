#include "plcalib/image_line.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "plcalib/errors.hpp"

namespace plcalib {

namespace {
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
}

ImageLine make_line(double a, double b, double c) {
  const double norm = std::hypot(a, b);
  if (norm == 0.0) {
    throw Error("image line has no direction: a and b are both zero");
  }
  a /= norm;
  b /= norm;
  c /= norm;
  const bool flip = (a < -1e-12) || (std::abs(a) <= 1e-12 && b < 0.0);
  if (flip) {
    a = -a;
    b = -b;
    c = -c;
  }
  return ImageLine{a, b, c};
}

double signed_distance(const ImageLine& line, const Eigen::Vector2d& p) {
  return line.a * p.x() + line.b * p.y() + line.c;
}

double line_direction_deg(const ImageLine& line) {
  // The direction vector is (-b, a); fold the heading into [0, 180).
  double deg = std::atan2(line.a, -line.b) * kRadToDeg;
  if (deg < 0.0) deg += 180.0;
  if (deg >= 180.0) deg -= 180.0;
  return deg;
}

double line_angle_deg(const ImageLine& p, const ImageLine& q) {
  const double dot = std::clamp(std::abs(p.a * q.a + p.b * q.b), 0.0, 1.0);
  return std::acos(dot) * kRadToDeg;
}

}  // namespace plcalib

#pragma once

#include <Eigen/Dense>

namespace plcalib {

// Homogeneous image line a*u + b*v + c = 0 in pixel coordinates, stored
// normalized: a^2 + b^2 = 1 and (a, b) lexicographically positive (a > 0, or
// a vanishes within 1e-12 and b > 0). The fixed convention makes lines from
// different code paths directly comparable and keeps report bytes stable.
struct ImageLine {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

// Normalizes raw coefficients into the convention above.
// Throws Error when (a, b) is the zero vector.
ImageLine make_line(double a, double b, double c);

// Positive on the (a, b) side of the line; |.| is the point-line distance.
double signed_distance(const ImageLine& line, const Eigen::Vector2d& p);

// Direction of travel along the line, folded into [0, 180) degrees.
double line_direction_deg(const ImageLine& line);

// Acute angle between two lines in [0, 90] degrees.
double line_angle_deg(const ImageLine& p, const ImageLine& q);

}  // namespace plcalib

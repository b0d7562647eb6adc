#pragma once

// Single hyperbolic triangle: angles, area, vertex scaling of lengths and the
// analytic derivatives of angles and area with respect to the conformal
// factors at the three corners.
//
// Corners are numbered 0, 1, 2. Lengths are stored by opposite corner, so
// lengths[c] is the edge that does not touch corner c, and angles[c] is the
// inner angle at corner c. The edge joining corners c and d is therefore
// lengths[3 - c - d].

#include <array>

namespace hypflow {

inline constexpr double kPi = 3.14159265358979323846;

struct TriLengths {
  std::array<double, 3> opposite{};

  // Named constructor in the usual (l_ij, l_ik, l_jk) order for corners i, j, k.
  static TriLengths from_edges(double l_ij, double l_ik, double l_jk) {
    return TriLengths{{l_jk, l_ik, l_ij}};
  }

  double operator[](int corner) const { return opposite[corner]; }
  double between(int c, int d) const { return opposite[3 - c - d]; }

  // All three strict triangle inequalities hold.
  bool admissible() const;

  // min over corners of (sum of the two adjacent edges - opposite edge).
  // Positive iff admissible.
  double min_slack() const;

  bool positive_finite() const;
};

struct TriAngles {
  std::array<double, 3> at{};
  bool extended = false;  // true when produced by the constant extension

  double operator[](int corner) const { return at[corner]; }
  double sum() const { return at[0] + at[1] + at[2]; }
};

// Inner angles by the hyperbolic law of cosines (evaluated in half-angle
// form). Throws InadmissibleTriangle if the lengths are not admissible.
TriAngles tri_angles(const TriLengths& l);

// tri_angles for admissible input; otherwise the angle opposite the longest
// edge is pi and the other two are 0. Ties for the longest edge go to the
// smallest corner index. Throws Error on non-positive or non-finite lengths.
TriAngles extended_angles(const TriLengths& l);

// Hyperbolic area pi - (sum of angles).
double tri_area(const TriAngles& a);

// Length after vertex scaling: sinh(l'/2) = sinh(d/2) * exp(u_a + u_b).
// Throws ConformalOverflow when the result is not a positive finite double.
double scaled_length(double d, double u_a, double u_b);

// d(angle at corner c) / d(u at corner d), c != d. Symmetric in (c, d).
// Throws InadmissibleTriangle if (a_c + a_d - a_e) is within 1e-12 of pi.
double dangle_du_offdiag(const TriLengths& l, const TriAngles& a, int c, int d);

// d(angle at corner c) / d(u at corner c). Strictly negative.
double dangle_du_diag(const TriLengths& l, int c);

// d(Area) / d(u at corner c).
double darea_du(const TriLengths& l, const TriAngles& a, int c);

// Max over the three corner pairs of
//   | 2 sin((a_c + a_d - a_e)/2) cosh(l_cd/2)
//     - (sinh^2(l_de/2) + sinh^2(l_ce/2) - sinh^2(l_cd/2)) / (sinh(l_de/2) sinh(l_ce/2)) |.
double half_angle_identity_check(const TriLengths& l, const TriAngles& a);

}  // namespace hypflow

#include "hypflow/hyp_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hypflow/error.hpp"

namespace hypflow {

namespace {

std::string describe(const TriLengths& l) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << l[0] << ", " << l[1] << ", " << l[2] << ")";
  return os.str();
}

double sinh_half_sq(double len) {
  const double s = std::sinh(0.5 * len);
  return s * s;
}

}  // namespace

bool TriLengths::positive_finite() const {
  for (double x : opposite) {
    if (!(x > 0.0) || !std::isfinite(x)) return false;
  }
  return true;
}

bool TriLengths::admissible() const {
  const auto& l = opposite;
  return l[1] + l[2] > l[0] && l[0] + l[2] > l[1] && l[0] + l[1] > l[2];
}

double TriLengths::min_slack() const {
  const auto& l = opposite;
  return std::min({l[1] + l[2] - l[0], l[0] + l[2] - l[1], l[0] + l[1] - l[2]});
}

TriAngles tri_angles(const TriLengths& l) {
  if (!l.positive_finite() || !l.admissible()) {
    throw InadmissibleTriangle("inadmissible hyperbolic triangle " + describe(l));
  }
  // tan(a/2) = sqrt(sinh(s-b) sinh(s-c) / (sinh(s) sinh(s-a))); the
  // differences s-x are formed from the lengths directly.
  const double s = 0.5 * (l[0] + l[1] + l[2]);
  const double sh_s = std::sinh(s);
  std::array<double, 3> sh_excess{};
  for (int c = 0; c < 3; ++c) {
    sh_excess[c] = std::sinh(0.5 * (l[(c + 1) % 3] + l[(c + 2) % 3] - l[c]));
  }
  TriAngles a;
  for (int c = 0; c < 3; ++c) {
    const double num = std::sqrt(sh_excess[(c + 1) % 3]) * std::sqrt(sh_excess[(c + 2) % 3]);
    const double den = std::sqrt(sh_s) * std::sqrt(sh_excess[c]);
    a.at[c] = 2.0 * std::atan2(num, den);
  }
  return a;
}

TriAngles extended_angles(const TriLengths& l) {
  if (!l.positive_finite()) {
    throw Error("triangle lengths must be positive and finite " + describe(l));
  }
  if (l.admissible()) return tri_angles(l);
  int longest = 0;
  for (int c = 1; c < 3; ++c) {
    if (l[c] > l[longest]) longest = c;
  }
  TriAngles a;
  a.at[longest] = kPi;
  a.extended = true;
  return a;
}

double tri_area(const TriAngles& a) { return kPi - a.sum(); }

double scaled_length(double d, double u_a, double u_b) {
  const double result = 2.0 * std::asinh(std::sinh(0.5 * d) * std::exp(u_a + u_b));
  if (!(result > 0.0) || !std::isfinite(result)) {
    std::ostringstream os;
    os.precision(17);
    os << "vertex scaling of length " << d << " by u = (" << u_a << ", " << u_b
       << ") leaves the representable range";
    throw ConformalOverflow(os.str());
  }
  return result;
}

double dangle_du_offdiag(const TriLengths& l, const TriAngles& a, int c, int d) {
  const int e = 3 - c - d;
  const double x = a[c] + a[d] - a[e];
  if (std::abs(x - kPi) < 1e-12) {
    throw InadmissibleTriangle("angle derivative pole in triangle " + describe(l));
  }
  const double cosh_half_sq = 1.0 + sinh_half_sq(l[e]);
  return std::tan(0.5 * x) / cosh_half_sq;
}

double dangle_du_diag(const TriLengths& l, int c) {
  const TriAngles a = tri_angles(l);
  const double opp = l[c];
  const double adj1 = l[(c + 1) % 3];
  const double adj2 = l[(c + 2) % 3];
  const double ch1 = std::cosh(adj1);
  const double ch2 = std::cosh(adj2);
  const double s_sin = std::sinh(adj1) * std::sinh(adj2) * std::sin(a[c]);
  if (!(s_sin > 0.0)) {
    throw InadmissibleTriangle("degenerate triangle " + describe(l));
  }
  const double sh_opp = std::sinh(opp);
  // Numerator rewritten as a sum of positive terms; cosh(x) - 1 = 2 sinh^2(x/2).
  const double num = s_sin * s_sin + sh_opp * sh_opp + 2.0 * sinh_half_sq(opp) * (ch1 + ch2);
  return -2.0 * num / (s_sin * (1.0 + ch1) * (1.0 + ch2));
}

double darea_du(const TriLengths& l, const TriAngles& a, int c) {
  const int i = (c + 1) % 3;
  const int j = (c + 2) % 3;
  // cosh(x) - 1 = 2 sinh^2(x/2)
  return dangle_du_offdiag(l, a, i, c) * 2.0 * sinh_half_sq(l.between(i, c)) +
         dangle_du_offdiag(l, a, j, c) * 2.0 * sinh_half_sq(l.between(j, c));
}

double half_angle_identity_check(const TriLengths& l, const TriAngles& a) {
  double worst = 0.0;
  for (int c = 0; c < 3; ++c) {
    const int d = (c + 1) % 3;
    const int e = 3 - c - d;
    const double l_cd = l.between(c, d);
    const double sh_de = std::sinh(0.5 * l.between(d, e));
    const double sh_ce = std::sinh(0.5 * l.between(c, e));
    const double sh_cd = std::sinh(0.5 * l_cd);
    const double lhs = 2.0 * std::sin(0.5 * (a[c] + a[d] - a[e])) * std::cosh(0.5 * l_cd);
    const double rhs = (sh_de * sh_de + sh_ce * sh_ce - sh_cd * sh_cd) / (sh_de * sh_ce);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace hypflow

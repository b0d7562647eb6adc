#include <doctest.h>

#include "support.hpp"

using namespace hypflow;
using testing::Gen;

namespace {

// Reference values from tests/oracle/kernel_oracle.py (40-digit arithmetic).
constexpr double kEquilateralAngle = 0.91879787217802736904;
constexpr double kEquilateralArea = 0.38519903705571113135;
constexpr double kScaledLn2 = 1.8217888580681214048;
constexpr double kEquilateralOffdiag = 0.38905599638844551814;
constexpr double kEquilateralDarea = 0.42257755499462836561;
constexpr double kSampleDiag = -1.9789612310146233913;
constexpr double kSampleOffdiag = 0.96269319834555775508;
constexpr double kSampleDarea = 0.60187545465824364731;

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("equilateral triangle matches reference values") {
  const auto l = TriLengths::from_edges(1, 1, 1);
  const auto a = tri_angles(l);
  for (int c = 0; c < 3; ++c) CHECK(a[c] == doctest::Approx(kEquilateralAngle).epsilon(1e-15));
  CHECK(a[0] == a[1]);
  CHECK(a[1] == a[2]);
  CHECK(std::acos(std::cosh(1.0) / (std::cosh(1.0) + 1.0)) == doctest::Approx(a[0]).epsilon(1e-14));
  CHECK(tri_area(a) == doctest::Approx(kEquilateralArea).epsilon(1e-14));
  CHECK(dangle_du_offdiag(l, a, 0, 1) == doctest::Approx(kEquilateralOffdiag).epsilon(1e-14));
  CHECK(darea_du(l, a, 2) == doctest::Approx(kEquilateralDarea).epsilon(1e-14));
  // Substitution forms.
  const double ch = std::cosh(0.5);
  CHECK(dangle_du_offdiag(l, a, 0, 1) == doctest::Approx(std::tan(a[0] / 2) / (ch * ch)).epsilon(1e-14));
  CHECK(darea_du(l, a, 0) ==
        doctest::Approx(2 * std::tan(a[0] / 2) / (ch * ch) * (std::cosh(1.0) - 1)).epsilon(1e-14));
  CHECK(half_angle_identity_check(l, a) < 1e-14);
}

TEST_CASE("sample triangle derivatives match reference values") {
  const auto l = TriLengths::from_edges(0.8, 1.1, 1.3);
  const auto a = tri_angles(l);
  CHECK(rel(dangle_du_diag(l, 0), kSampleDiag) < 1e-13);
  CHECK(rel(dangle_du_offdiag(l, a, 0, 1), kSampleOffdiag) < 1e-13);
  CHECK(rel(darea_du(l, a, 0), kSampleDarea) < 1e-13);
}

TEST_CASE("inadmissible triangles") {
  const auto bad = TriLengths::from_edges(0.5, 0.7, 1.3);
  CHECK_FALSE(bad.admissible());
  CHECK(bad.min_slack() < 0);
  CHECK_THROWS_AS(tri_angles(bad), InadmissibleTriangle);

  const auto ext = extended_angles(bad);
  CHECK(ext.extended);
  // 1.3 is l_jk, opposite corner 0.
  CHECK(ext[0] == kPi);
  CHECK(ext[1] == 0.0);
  CHECK(ext[2] == 0.0);
  CHECK(tri_area(ext) == 0.0);

  const auto good = TriLengths::from_edges(1, 1, 1);
  const auto e2 = extended_angles(good);
  CHECK_FALSE(e2.extended);
  CHECK(e2.at == tri_angles(good).at);

  // Degenerate equality is inadmissible (strict inequalities).
  CHECK_FALSE(TriLengths::from_edges(1, 1, 2).admissible());
  CHECK_THROWS_AS(extended_angles(TriLengths{{1.0, -1.0, 1.0}}), Error);
  CHECK_THROWS_AS(extended_angles(TriLengths{{1.0, NAN, 1.0}}), Error);
}

TEST_CASE("extended angle goes opposite the strictly longest edge") {
  // An inadmissible triangle has one edge at least the sum of the other two,
  // so with positive lengths the longest edge is unique.
  CHECK(extended_angles(TriLengths{{3.0, 1.0, 7.0}})[2] == kPi);
  CHECK(extended_angles(TriLengths{{0.5, 2.0, 1.0}})[1] == kPi);
  CHECK(extended_angles(TriLengths{{2.0, 1.0, 1.0}})[0] == kPi);
}

TEST_CASE("extended angles are continuous at the degeneracy boundary") {
  // l_jk grows to l_ij + l_ik: the angle at i must approach pi.
  const double l_ij = 0.9, l_ik = 1.4;
  double prev = 0.0;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-6, 1e-8, 1e-10}) {
    const auto a = tri_angles(TriLengths::from_edges(l_ij, l_ik, l_ij + l_ik - eps));
    CHECK(a[0] > prev);
    prev = a[0];
    CHECK(a[1] >= 0.0);
    CHECK(a[2] >= 0.0);
  }
  CHECK(prev == doctest::Approx(kPi).epsilon(1e-4));
  const auto ext = extended_angles(TriLengths::from_edges(l_ij, l_ik, l_ij + l_ik + 1e-10));
  CHECK(std::abs(ext[0] - prev) < 1e-4);
}

TEST_CASE("scaled_length") {
  CHECK(scaled_length(1, 0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(scaled_length(1, std::log(2.0), 0) == doctest::Approx(kScaledLn2).epsilon(1e-15));
  Gen g(11);
  for (int k = 0; k < 100; ++k) {
    const double d = g.uniform(0.05, 4), t = g.uniform(-3, 3);
    CHECK(scaled_length(d, t, -t) == doctest::Approx(d).epsilon(1e-12));
    CHECK(scaled_length(d, t + 0.01, 0) > scaled_length(d, t, 0));
  }
  CHECK_THROWS_AS(scaled_length(1, 400, 400), ConformalOverflow);
  CHECK_THROWS_AS(scaled_length(1, -800, -800), ConformalOverflow);
}

TEST_CASE("random admissible triangles: hyperbolicity and symmetry") {
  Gen g(2024);
  for (int k = 0; k < 1000; ++k) {
    const auto l = g.triangle();
    const auto a = tri_angles(l);
    for (int c = 0; c < 3; ++c) {
      CHECK(a[c] > 0.0);
      CHECK(a[c] < kPi);
    }
    CHECK(a.sum() < kPi);
    CHECK(tri_area(a) > 0.0);
    for (int c = 0; c < 3; ++c) {
      const int d = (c + 1) % 3;
      CHECK(dangle_du_offdiag(l, a, c, d) == dangle_du_offdiag(l, a, d, c));
      CHECK(dangle_du_diag(l, c) < 0.0);
    }
    CHECK(half_angle_identity_check(l, a) <= 1e-10);
  }
}

TEST_CASE("diagonal derivative equals minus the other derivatives of the corner") {
  Gen g(5);
  for (int k = 0; k < 300; ++k) {
    const auto l = g.triangle();
    const auto a = tri_angles(l);
    for (int c = 0; c < 3; ++c) {
      const int p = (c + 1) % 3, q = (c + 2) % 3;
      // Angle sum changes by -dArea, so row sums of the angle derivatives vanish
      // after adding dArea: d a_c/d u_c = -(d a_p/d u_c + d a_q/d u_c + d Area/d u_c).
      const double expect = -(dangle_du_offdiag(l, a, p, c) + dangle_du_offdiag(l, a, q, c) + darea_du(l, a, c));
      CHECK(dangle_du_diag(l, c) == doctest::Approx(expect).epsilon(1e-9));
    }
  }
}

TEST_CASE("half-angle identity survives vertex scaling") {
  Gen g(9);
  for (int k = 0; k < 200; ++k) {
    const auto l = g.triangle();
    const auto s = testing::scale_triangle(l, {g.uniform(-0.5, 0.5), g.uniform(-0.5, 0.5), g.uniform(-0.5, 0.5)});
    if (!s.admissible() || s.min_slack() < 1e-3) continue;
    CHECK(half_angle_identity_check(s, tri_angles(s)) <= 1e-10);
  }
}

TEST_CASE("analytic derivatives agree with central differences") {
  Gen g(77);
  const double h = 1e-5;
  double worst = 0.0;
  for (int k = 0; k < 300; ++k) {
    const auto l = g.triangle();
    const auto a = tri_angles(l);
    for (int c = 0; c < 3; ++c) {
      std::array<double, 3> up{}, dn{};
      up[c] = h;
      dn[c] = -h;
      const auto ap = tri_angles(testing::scale_triangle(l, up));
      const auto am = tri_angles(testing::scale_triangle(l, dn));
      std::array<double, 3> fd{};
      for (int r = 0; r < 3; ++r) fd[r] = (ap[r] - am[r]) / (2 * h);
      const double fd_area = (tri_area(ap) - tri_area(am)) / (2 * h);
      std::array<double, 3> an{};
      for (int r = 0; r < 3; ++r) an[r] = r == c ? dangle_du_diag(l, c) : dangle_du_offdiag(l, a, r, c);
      const double an_area = darea_du(l, a, c);
      double scale = std::abs(an_area), diff = std::abs(an_area - fd_area);
      for (int r = 0; r < 3; ++r) {
        scale = std::max(scale, std::abs(an[r]));
        diff = std::max(diff, std::abs(an[r] - fd[r]));
      }
      worst = std::max(worst, diff / scale);
    }
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("tan pole guard") {
  // Corrupted angles that put (a_c + a_d - a_e) at pi.
  const auto l = TriLengths::from_edges(1, 1, 1);
  TriAngles a;
  a.at = {kPi / 2, kPi / 2, 0.0};
  CHECK_THROWS_AS(dangle_du_offdiag(l, a, 0, 1), InadmissibleTriangle);
}

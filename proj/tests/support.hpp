#pragma once

// Generators and finite-difference helpers shared by the test binaries.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "hypflow/curvature.hpp"
#include "hypflow/fixtures.hpp"
#include "hypflow/flows.hpp"
#include "hypflow/hyp_kernel.hpp"
#include "hypflow/phm_io.hpp"
#include "hypflow/surface.hpp"

namespace testing {

using namespace hypflow;

inline std::string data_path(const std::string& name) { return std::string(HYPFLOW_TEST_DATA) + "/" + name; }

inline MetricSurface genus2_fixture() { return load_phm(data_path("genus2.phm")); }

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int index(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  // Admissible triangle with lengths in [0.1, 3] and triangle-inequality slack
  // at least 2% of the longest side.
  TriLengths triangle() {
    while (true) {
      TriLengths l{{uniform(0.1, 3.0), uniform(0.1, 3.0), uniform(0.1, 3.0)}};
      const double longest = std::max({l[0], l[1], l[2]});
      if (l.min_slack() > 0.02 * longest) return l;
    }
  }

  std::vector<double> vec(int n, double spread) {
    std::vector<double> v(n);
    for (double& x : v) x = uniform(-spread, spread);
    return v;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Angle at `corner` after scaling the triangle's corners by u.
inline TriLengths scale_triangle(const TriLengths& l, const std::array<double, 3>& u) {
  TriLengths out;
  for (int c = 0; c < 3; ++c) out.opposite[c] = scaled_length(l[c], u[(c + 1) % 3], u[(c + 2) % 3]);
  return out;
}

inline double max_abs(const std::vector<double>& v) {
  double r = 0.0;
  for (double x : v) r = std::max(r, std::abs(x));
  return r;
}

inline double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

// A Delaunay state drawn from the standard fixtures: random perturbed lengths,
// made Delaunay, then moved by random conformal factors with surgery.
inline MetricSurface random_delaunay_state(Gen& g, int which) {
  MarkedSurface surf;
  switch (which % 5) {
    case 0:
      surf = fixtures::octahedron();
      break;
    case 1:
      surf = fixtures::torus_grid(4, 5);
      break;
    case 2:
      surf = fixtures::genus2(4);
      break;
    case 3:
      surf = fixtures::genus2(5);
      break;
    default:
      surf = fixtures::torus_grid(6, 6);
      break;
  }
  // Small meshes occasionally need a flip that would create a multi-edge;
  // those draws are discarded.
  while (true) {
    MetricSurface s = fixtures::with_lengths(surf, g.uniform(0.4, 2.0), 0.3, g.engine()());
    try {
      make_delaunay(s.surface, s.metric);
      const auto u = g.vec(s.surface.vertex_count(), 0.3);
      rescale_with_surgery(s.surface, s.metric, u);
      return s;
    } catch (const DelaunayFailure&) {
    }
  }
}

// Central differences of K with respect to u on the current triangulation.
inline std::vector<std::vector<double>> fd_jacobian(const MetricSurface& s, double h) {
  const int n = s.surface.vertex_count();
  std::vector<std::vector<double>> J(n, std::vector<double>(n));
  for (int j = 0; j < n; ++j) {
    PHMetric plus = s.metric, minus = s.metric;
    auto u = s.metric.u;
    u[j] += h;
    apply_conformal_factor(s.surface, plus, u);
    u[j] -= 2 * h;
    apply_conformal_factor(s.surface, minus, u);
    const auto Kp = curvature(s.surface, plus);
    const auto Km = curvature(s.surface, minus);
    for (int i = 0; i < n; ++i) J[i][j] = (Kp[i] - Km[i]) / (2 * h);
  }
  return J;
}

// max |L - FD| / max |L| over all entries.
inline double jacobian_fd_error(const MetricSurface& s, double h = 1e-5) {
  const auto fd = fd_jacobian(s, h);
  const Eigen::MatrixXd L = Eigen::MatrixXd(jacobian(s.surface, s.metric).matrix());
  double diff = 0.0, scale = 0.0;
  for (int i = 0; i < L.rows(); ++i) {
    for (int j = 0; j < L.cols(); ++j) {
      diff = std::max(diff, std::abs(L(i, j) - fd[i][j]));
      scale = std::max(scale, std::abs(L(i, j)));
    }
  }
  return diff / scale;
}

// Line integral of sum_i (F_i - target_i w_i^alpha) du_i around the closed
// polygon through `nodes`: each side is cut into `sub` pieces and every piece
// is integrated with two-point Gauss-Legendre. The state follows the path
// with surgery.
inline double loop_integral(MetricSurface s, const std::vector<std::vector<double>>& nodes, int sub,
                            const std::vector<double>& target, double alpha) {
  const int n = s.surface.vertex_count();
  const double offset = 0.5 / std::sqrt(3.0);
  double total = 0.0;
  std::vector<double> u(n);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const auto& a = nodes[k];
    const auto& b = nodes[(k + 1) % nodes.size()];
    for (int p = 0; p < sub; ++p) {
      for (double q : {0.5 - offset, 0.5 + offset}) {
        const double t = (p + q) / sub;
        for (int i = 0; i < n; ++i) u[i] = a[i] + t * (b[i] - a[i]);
        rescale_with_surgery(s.surface, s.metric, u);
        const auto K = curvature(s.surface, s.metric);
        double dot = 0.0;
        for (int i = 0; i < n; ++i) dot += (K[i] - target[i] * std::exp(alpha * u[i])) * (b[i] - a[i]);
        total += 0.5 * dot / sub;
      }
    }
  }
  return total;
}

}  // namespace testing

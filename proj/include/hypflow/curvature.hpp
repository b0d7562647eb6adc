#pragma once

// Vertex curvatures of a PH metric, the Jacobian of curvature with respect to
// the conformal factors, the discrete alpha-Laplacian, and trajectory energy.

#include <span>
#include <vector>

#include <Eigen/Sparse>

#include "hypflow/surface.hpp"

namespace hypflow {

struct ConformalState {
  std::vector<double> u;

  std::vector<double> w() const;
  // w_i^alpha = exp(alpha * u_i)
  std::vector<double> w_pow(double alpha) const;
};

struct CurvatureReport {
  std::vector<double> K;
  std::vector<double> R_alpha;
  bool extended = false;
};

// K_i = 2 pi - (sum of inner angles at i). Throws InadmissibleTriangle.
std::vector<double> curvature(const MarkedSurface& surf, const PHMetric& m);

std::vector<double> curvature_from_angles(const MarkedSurface& surf, std::span<const TriAngles> angles);

// Same, with constant-extended angles on inadmissible faces.
CurvatureReport extended_curvature(const MarkedSurface& surf, const PHMetric& m);

// R_i = K_i / exp(alpha * u_i).
std::vector<double> alpha_curvature(std::span<const double> K, std::span<const double> u, double alpha);

// Both curvatures for the metric's own cumulative factor m.u.
CurvatureReport curvature_report(const MarkedSurface& surf, const PHMetric& m, double alpha);

double total_area(const MarkedSurface& surf, const PHMetric& m);

// | sum K - (2 pi chi + total area) |
double gauss_bonnet_residual(const MarkedSurface& surf, const PHMetric& m, std::span<const double> K);

struct JacobianL {
  std::vector<double> A;          // per vertex
  std::vector<double> B;          // per edge id
  std::vector<EdgeKey> endpoints;  // per edge id
  // A_i recomputed as sum_j B_ij (cosh l_ij - 1); should match A.
  std::vector<double> A_from_B;

  int size() const { return static_cast<int>(A.size()); }
  // L_ii = A_i + sum_j B_ij, L_ij = -B_ij.
  Eigen::SparseMatrix<double> matrix() const;
  // L f without forming the matrix.
  std::vector<double> apply(std::span<const double> f) const;
};

// dK/du on the current triangulation. Faces are visited in ascending order.
JacobianL jacobian(const MarkedSurface& surf, const PHMetric& m);
JacobianL jacobian(const MarkedSurface& surf, std::span<const double> length, std::span<const TriAngles> angles);

// (Delta_alpha f)_i = sum_j (B_ij / w_i^alpha)(f_j - f_i) - (A_i / w_i^alpha) f_i
std::vector<double> alpha_laplacian_apply(const JacobianL& L, std::span<const double> u, double alpha,
                                          std::span<const double> f);

// Same operator as -diag(w^-alpha) * L.matrix() * f.
std::vector<double> alpha_laplacian_matrix_apply(const JacobianL& L, std::span<const double> u, double alpha,
                                                 std::span<const double> f);

// Trapezoid increment of the line integral of sum_i (F_i - target_i w_i^alpha) du_i.
double energy_increment(std::span<const double> F_prev, std::span<const double> F_curr,
                        std::span<const double> u_prev, std::span<const double> u_curr,
                        std::span<const double> target, double alpha);

}  // namespace hypflow

#include "hypflow/curvature.hpp"

#include <cmath>

namespace hypflow {

std::vector<double> ConformalState::w() const { return w_pow(1.0); }

std::vector<double> ConformalState::w_pow(double alpha) const {
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::exp(alpha * u[i]);
  return out;
}

std::vector<double> curvature_from_angles(const MarkedSurface& surf, std::span<const TriAngles> angles) {
  std::vector<double> K(surf.vertex_count(), 2.0 * kPi);
  for (int f = 0; f < surf.face_count(); ++f) {
    const Face& t = surf.face(f);
    for (int c = 0; c < 3; ++c) K[t[c]] -= angles[f][c];
  }
  return K;
}

std::vector<double> curvature(const MarkedSurface& surf, const PHMetric& m) {
  return curvature_from_angles(surf, face_angles(surf, m.length));
}

CurvatureReport extended_curvature(const MarkedSurface& surf, const PHMetric& m) {
  CurvatureReport r;
  r.K.assign(surf.vertex_count(), 2.0 * kPi);
  for (int f = 0; f < surf.face_count(); ++f) {
    const TriAngles a = extended_angles(face_lengths(surf, m, f));
    r.extended = r.extended || a.extended;
    const Face& t = surf.face(f);
    for (int c = 0; c < 3; ++c) r.K[t[c]] -= a[c];
  }
  r.R_alpha = r.K;
  return r;
}

std::vector<double> alpha_curvature(std::span<const double> K, std::span<const double> u, double alpha) {
  std::vector<double> R(K.begin(), K.end());
  if (alpha == 0.0) return R;
  for (std::size_t i = 0; i < R.size(); ++i) R[i] = K[i] / std::exp(alpha * u[i]);
  return R;
}

CurvatureReport curvature_report(const MarkedSurface& surf, const PHMetric& m, double alpha) {
  CurvatureReport r;
  r.K = curvature(surf, m);
  r.R_alpha = alpha_curvature(r.K, m.u, alpha);
  return r;
}

double total_area(const MarkedSurface& surf, const PHMetric& m) {
  double area = 0.0;
  for (int f = 0; f < surf.face_count(); ++f) area += tri_area(tri_angles(face_lengths(surf, m, f)));
  return area;
}

double gauss_bonnet_residual(const MarkedSurface& surf, const PHMetric& m, std::span<const double> K) {
  double sum = 0.0;
  for (double k : K) sum += k;
  return std::abs(sum - (2.0 * kPi * euler_characteristic(surf) + total_area(surf, m)));
}

JacobianL jacobian(const MarkedSurface& surf, const PHMetric& m) {
  return jacobian(surf, m.length, face_angles(surf, m.length));
}

JacobianL jacobian(const MarkedSurface& surf, std::span<const double> length, std::span<const TriAngles> angles) {
  const int n = surf.vertex_count();
  JacobianL J;
  J.A.assign(n, 0.0);
  J.A_from_B.assign(n, 0.0);
  J.B.assign(surf.edge_count(), 0.0);
  J.endpoints.resize(surf.edge_count());
  for (int e = 0; e < surf.edge_count(); ++e) J.endpoints[e] = surf.edge(e).key;

  for (int f = 0; f < surf.face_count(); ++f) {
    const TriLengths l = face_lengths(surf, length, f);
    const TriAngles& a = angles[f];
    const Face& t = surf.face(f);
    const auto& fe = surf.face_edges(f);
    for (int c = 0; c < 3; ++c) {
      // Edge opposite corner c joins the other two corners.
      const int p = (c + 1) % 3;
      const int q = (c + 2) % 3;
      J.B[fe[c]] += dangle_du_offdiag(l, a, p, q);
      J.A[t[c]] += darea_du(l, a, c);
    }
  }
  for (int e = 0; e < surf.edge_count(); ++e) {
    const double s = std::sinh(0.5 * length[e]);
    const double cosh_minus_one = 2.0 * s * s;
    J.A_from_B[J.endpoints[e].a] += J.B[e] * cosh_minus_one;
    J.A_from_B[J.endpoints[e].b] += J.B[e] * cosh_minus_one;
  }
  return J;
}

Eigen::SparseMatrix<double> JacobianL::matrix() const {
  const int n = size();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(n + 4 * B.size());
  std::vector<double> diag(A);
  for (std::size_t e = 0; e < B.size(); ++e) {
    const auto [a, b] = endpoints[e];
    diag[a] += B[e];
    diag[b] += B[e];
    trip.emplace_back(a, b, -B[e]);
    trip.emplace_back(b, a, -B[e]);
  }
  for (int i = 0; i < n; ++i) trip.emplace_back(i, i, diag[i]);
  Eigen::SparseMatrix<double> L(n, n);
  L.setFromTriplets(trip.begin(), trip.end());
  return L;
}

std::vector<double> JacobianL::apply(std::span<const double> f) const {
  if (static_cast<int>(f.size()) != size()) throw Error("vector size does not match the Jacobian");
  std::vector<double> out(size());
  for (int i = 0; i < size(); ++i) out[i] = A[i] * f[i];
  for (std::size_t e = 0; e < B.size(); ++e) {
    const auto [a, b] = endpoints[e];
    out[a] += B[e] * (f[a] - f[b]);
    out[b] += B[e] * (f[b] - f[a]);
  }
  return out;
}

namespace {

void check_sizes(const JacobianL& L, std::span<const double> u, std::span<const double> f) {
  if (static_cast<int>(u.size()) != L.size() || static_cast<int>(f.size()) != L.size()) {
    throw Error("alpha-Laplacian: dimension mismatch (" + std::to_string(L.size()) + " vertices, " +
                std::to_string(u.size()) + " factors, " + std::to_string(f.size()) + " values)");
  }
}

}  // namespace

std::vector<double> alpha_laplacian_apply(const JacobianL& L, std::span<const double> u, double alpha,
                                          std::span<const double> f) {
  check_sizes(L, u, f);
  const int n = L.size();
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = -L.A[i] * f[i];
  for (std::size_t e = 0; e < L.B.size(); ++e) {
    const auto [a, b] = L.endpoints[e];
    out[a] += L.B[e] * (f[b] - f[a]);
    out[b] += L.B[e] * (f[a] - f[b]);
  }
  for (int i = 0; i < n; ++i) out[i] /= std::exp(alpha * u[i]);
  return out;
}

std::vector<double> alpha_laplacian_matrix_apply(const JacobianL& L, std::span<const double> u, double alpha,
                                                 std::span<const double> f) {
  check_sizes(L, u, f);
  const int n = L.size();
  Eigen::Map<const Eigen::VectorXd> fv(f.data(), n);
  Eigen::VectorXd winv(n);
  for (int i = 0; i < n; ++i) winv[i] = std::exp(-alpha * u[i]);
  const Eigen::VectorXd r = -(winv.asDiagonal() * (L.matrix() * fv));
  return {r.data(), r.data() + n};
}

double energy_increment(std::span<const double> F_prev, std::span<const double> F_curr,
                        std::span<const double> u_prev, std::span<const double> u_curr,
                        std::span<const double> target, double alpha) {
  double sum = 0.0;
  for (std::size_t i = 0; i < u_prev.size(); ++i) {
    const double du = u_curr[i] - u_prev[i];
    if (du == 0.0) continue;
    const double g0 = F_prev[i] - target[i] * std::exp(alpha * u_prev[i]);
    const double g1 = F_curr[i] - target[i] * std::exp(alpha * u_curr[i]);
    sum += 0.5 * (g0 + g1) * du;
  }
  return sum;
}

}  // namespace hypflow

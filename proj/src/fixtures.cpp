#include "hypflow/fixtures.hpp"

#include <random>

namespace hypflow::fixtures {

MarkedSurface tetrahedron() { return MarkedSurface::from_faces(4, {{0, 1, 2}, {0, 3, 1}, {1, 3, 2}, {0, 2, 3}}); }

MarkedSurface octahedron() {
  // 0 = +x, 1 = +y, 2 = -x, 3 = -y, 4 = +z, 5 = -z
  std::vector<Face> faces;
  for (int k = 0; k < 4; ++k) {
    const int a = k;
    const int b = (k + 1) % 4;
    faces.push_back({4, a, b});
    faces.push_back({5, b, a});
  }
  return MarkedSurface::from_faces(6, std::move(faces));
}

namespace {

void append_torus(std::vector<Face>& faces, int m, int n, int offset) {
  auto id = [&](int i, int j) { return offset + (i % m) + m * (j % n); };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      faces.push_back({a, b, c});
      faces.push_back({a, c, d});
    }
  }
}

}  // namespace

MarkedSurface torus_grid(int m, int n) {
  if (m < 3 || n < 3) throw SurfaceError("torus grid needs at least 3 x 3 cells");
  std::vector<Face> faces;
  append_torus(faces, m, n, 0);
  return MarkedSurface::from_faces(m * n, std::move(faces));
}

MarkedSurface genus2(int m) {
  if (m < 4) throw SurfaceError("genus-2 fixture needs m >= 4");
  const int half = m * m;
  std::vector<Face> faces;
  append_torus(faces, m, m, 0);
  append_torus(faces, m, m, half);
  // Face (a0, a1, a2) is the first face of each torus; drop both.
  const Face hole_a = faces[0];
  const Face hole_b = faces[2 * half];
  faces.erase(faces.begin() + 2 * half);
  faces.erase(faces.begin());
  // The second torus is reversed so the tube can be oriented consistently.
  for (std::size_t f = 2 * half - 1; f < faces.size(); ++f) std::swap(faces[f][1], faces[f][2]);
  const auto [a0, a1, a2] = hole_a;
  const auto [b0, b1, b2] = hole_b;
  faces.push_back({a0, a1, b1});
  faces.push_back({a0, b1, b0});
  faces.push_back({a1, a2, b2});
  faces.push_back({a1, b2, b1});
  faces.push_back({a2, a0, b0});
  faces.push_back({a2, b0, b2});
  return MarkedSurface::from_faces(2 * half, std::move(faces));
}

MetricSurface with_lengths(MarkedSurface surf, double base, double perturb, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> len(surf.edge_count());
  for (double& l : len) l = base * (1.0 + perturb * unit(rng));
  PHMetric m = PHMetric::from_lengths(std::move(len), surf.vertex_count());
  return MetricSurface{std::move(surf), std::move(m)};
}

}  // namespace hypflow::fixtures

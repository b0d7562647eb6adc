#pragma once

// Standard triangulations used by tests and the `generate` command.

#include <cstdint>

#include "hypflow/surface.hpp"

namespace hypflow::fixtures {

MarkedSurface tetrahedron();
MarkedSurface octahedron();

// m x n periodic grid, each cell split along one diagonal. Needs m, n >= 3.
MarkedSurface torus_grid(int m, int n);

// Two m x m tori, each with one face removed, joined by a triangulated
// prism tube. Needs m >= 4.
MarkedSurface genus2(int m = 5);

// Every edge gets base * (1 + perturb * U(-1, 1)), deterministic in seed.
MetricSurface with_lengths(MarkedSurface surf, double base = 1.0, double perturb = 0.0, std::uint64_t seed = 0);

}  // namespace hypflow::fixtures

#pragma once

// Closed triangulated marked surfaces carrying a piecewise hyperbolic metric:
// adjacency, validation, Delaunay predicate, edge flips and Delaunay
// re-triangulation, and vertex scaling with surgery along a path of
// conformal factors.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hypflow/error.hpp"
#include "hypflow/hyp_kernel.hpp"

namespace hypflow {

// Weights in [-kDelaunayTol, 0) count as Delaunay.
inline constexpr double kDelaunayTol = 1e-12;

using Face = std::array<int, 3>;

// Unordered vertex pair, stored with a < b.
struct EdgeKey {
  int a = -1;
  int b = -1;
  static EdgeKey of(int x, int y) { return x < y ? EdgeKey{x, y} : EdgeKey{y, x}; }
  friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
};

struct Edge {
  EdgeKey key;
  std::array<int, 2> faces{-1, -1};
  std::uint64_t serial = 0;  // bumped every time the slot is rebuilt by a flip
};

class MarkedSurface {
 public:
  // Builds edges and adjacency from oriented faces. Throws SurfaceError on any
  // combinatorial defect (see combinatorial_issues).
  static MarkedSurface from_faces(int vertex_count, std::vector<Face> faces);

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int face_count() const { return static_cast<int>(faces_.size()); }

  const std::vector<Face>& faces() const { return faces_; }
  const Face& face(int f) const { return faces_[f]; }
  // face_edges(f)[c] is the edge opposite corner c of face f.
  const std::array<int, 3>& face_edges(int f) const { return face_edges_[f]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[e]; }

  std::optional<int> find_edge(int a, int b) const;
  // Corner index of vertex v in face f, or -1.
  int corner_of(int f, int v) const;
  std::vector<std::vector<int>> vertex_faces() const;

 private:
  friend struct FlipAccess;

  static std::uint64_t pack(int a, int b);

  int vertex_count_ = 0;
  std::vector<Face> faces_;
  std::vector<std::array<int, 3>> face_edges_;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, int> edge_index_;
  std::uint64_t next_serial_ = 0;
};

// Empty iff the faces describe a connected, closed, consistently oriented
// 2-manifold on exactly vertex_count vertices.
std::vector<std::string> combinatorial_issues(int vertex_count, std::span<const Face> faces);

int euler_characteristic(const MarkedSurface& surf);

// Edge lengths of the current triangulation plus the vertex-scaling epoch.
// Invariant: length[e] == scaled_length(base_length[e], u - epoch_u at the
// endpoints of e). A flip starts a new epoch (base_length = length,
// epoch_u = u).
struct PHMetric {
  std::vector<double> length;       // per edge id
  std::vector<double> base_length;  // per edge id
  std::vector<double> epoch_u;      // per vertex
  std::vector<double> u;            // cumulative conformal factor, u(0) = 0

  static PHMetric from_lengths(std::vector<double> lengths, int vertex_count);
};

// A surface together with its metric; the unit that flows and solvers own.
struct MetricSurface {
  MarkedSurface surface;
  PHMetric metric;
};

TriLengths face_lengths(const MarkedSurface& surf, std::span<const double> length, int f);
inline TriLengths face_lengths(const MarkedSurface& surf, const PHMetric& m, int f) {
  return face_lengths(surf, m.length, f);
}

struct ValidationReport {
  bool valid = false;
  int euler_characteristic = 0;
  int vertices = 0;
  int edges = 0;
  int faces = 0;
  double min_slack = 0.0;
  int min_slack_face = -1;
  std::vector<double> face_slack;
  int delaunay_edges = 0;  // counted only when every face is admissible
  std::vector<std::string> errors;
};

ValidationReport validate(const MarkedSurface& surf, const PHMetric& m);

// (angles at i, j in both incident faces) - (the two angles opposite e).
// Non-negative iff e is Delaunay.
double delaunay_weight(const MarkedSurface& surf, const PHMetric& m, int e);

bool is_delaunay(const MarkedSurface& surf, const PHMetric& m, double tol = kDelaunayTol);

// Edges with weight < -tol, paired with their weights.
std::vector<std::pair<int, double>> nondelaunay_edges(const MarkedSurface& surf, const PHMetric& m,
                                                      double tol = kDelaunayTol);

// Length of the other diagonal of the quadrilateral around e, evaluated by
// the cosine law at one endpoint of e (side 0: the first endpoint in the
// orientation of edge(e).faces[0]; side 1: the other). Throws
// InadmissibleTriangle if the flip would produce a degenerate triangle.
double diagonal_length(const MarkedSurface& surf, const PHMetric& m, int e, int side = 0);

struct FlipEvent {
  EdgeKey old_edge;
  EdgeKey new_edge;
  double time = 0.0;
  double pre_weight = 0.0;
  // Largest change of total angle at the four quad vertices.
  double max_angle_change = 0.0;
};

// Replaces the two faces at e by the two faces at the other diagonal and
// starts a new scaling epoch. Throws FlipRefused (surface untouched) when
// the flip would create a self-loop, a multi-edge, or a degenerate face.
FlipEvent flip_edge(MarkedSurface& surf, PHMetric& m, int e);

class DelaunayFailure : public Error {
 public:
  DelaunayFailure(const std::string& what, MetricSurface state)
      : Error(what), state_(std::move(state)) {}
  const MetricSurface& state() const { return state_; }

 private:
  MetricSurface state_;
};

// Flips edges with weight < -tol, most negative first, until none remain.
// Throws DelaunayFailure after 100 * |E| flips or when refused flips leave
// non-Delaunay edges behind.
std::vector<FlipEvent> make_delaunay(MarkedSurface& surf, PHMetric& m, double tol = kDelaunayTol);

// Lengths of the current epoch scaled to cumulative factor u (no flips).
std::vector<double> scaled_lengths(const MarkedSurface& surf, const PHMetric& m, std::span<const double> u);

// Inner angles of every face. Throws InadmissibleTriangle.
std::vector<TriAngles> face_angles(const MarkedSurface& surf, std::span<const double> length);

// delaunay_weight for every edge from precomputed face angles.
std::vector<double> delaunay_weights(const MarkedSurface& surf, std::span<const TriAngles> angles);

// Vertex scaling of the current epoch to cumulative factor u, without flips.
void apply_conformal_factor(const MarkedSurface& surf, PHMetric& m, std::span<const double> u);

// Starts a new epoch at the current lengths.
void rebase(PHMetric& m);

struct SurgeryOptions {
  double tol = kDelaunayTol;
  // Longest sup-norm stretch of the path checked in one piece.
  double max_substep = 0.05;
  // When set, receives the largest sup-norm change of vertex angle sums
  // across the re-triangulations performed (0 if none).
  double* angle_jump = nullptr;
};

// Moves the cumulative factor from m.u to u along the straight segment,
// flipping at the points where the triangulation stops being Delaunay, so
// the metric stays in the discrete conformal class of the starting one.
// Requires a Delaunay starting state. Throws InadmissibleTriangle if a face
// degenerates before any edge turns non-Delaunay.
std::vector<FlipEvent> rescale_with_surgery(MarkedSurface& surf, PHMetric& m, std::span<const double> u,
                                            const SurgeryOptions& opt = {});

// Sum of inner angles at every vertex. Throws on inadmissible faces.
std::vector<double> vertex_angle_sums(const MarkedSurface& surf, const PHMetric& m);

}  // namespace hypflow

#include "hypflow/surface.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace hypflow {

namespace {

std::string face_string(const Face& f) {
  std::ostringstream os;
  os << "(" << f[0] << " " << f[1] << " " << f[2] << ")";
  return os.str();
}

std::string edge_string(EdgeKey k) {
  return "{" + std::to_string(k.a) + ", " + std::to_string(k.b) + "}";
}

}  // namespace

// ---------------------------------------------------------------------------
// Combinatorics

std::uint64_t MarkedSurface::pack(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

std::vector<std::string> combinatorial_issues(int vertex_count, std::span<const Face> faces) {
  std::vector<std::string> issues;
  if (vertex_count <= 0) issues.push_back("surface has no vertices");
  if (faces.empty()) issues.push_back("surface has no faces");
  if (!issues.empty()) return issues;

  bool indices_ok = true;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const Face& t = faces[f];
    for (int v : t) {
      if (v < 0 || v >= vertex_count) {
        issues.push_back("face " + std::to_string(f) + " " + face_string(t) + " has vertex index out of range");
        indices_ok = false;
        break;
      }
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      issues.push_back("face " + std::to_string(f) + " " + face_string(t) + " repeats a vertex");
      indices_ok = false;
    }
  }
  if (!indices_ok) return issues;

  // Directed edge usage: a closed oriented manifold uses each directed edge
  // exactly once and its reverse exactly once.
  std::map<std::pair<int, int>, int> directed;
  for (const Face& t : faces) {
    for (int c = 0; c < 3; ++c) ++directed[{t[c], t[(c + 1) % 3]}];
  }
  for (const auto& [de, count] : directed) {
    const auto [a, b] = de;
    if (count > 1) {
      issues.push_back("edge " + edge_string(EdgeKey::of(a, b)) +
                       " is used twice in the same direction (non-manifold or inconsistent orientation)");
    }
    if (!directed.contains({b, a})) {
      issues.push_back("edge " + edge_string(EdgeKey::of(a, b)) + " is a boundary edge");
    }
  }
  if (!issues.empty()) return issues;

  // Vertex links must be single cycles.
  std::vector<std::map<int, int>> link(vertex_count);
  for (const Face& t : faces) {
    for (int c = 0; c < 3; ++c) link[t[c]][t[(c + 1) % 3]] = t[(c + 2) % 3];
  }
  for (int v = 0; v < vertex_count; ++v) {
    if (link[v].empty()) {
      issues.push_back("vertex " + std::to_string(v) + " is not used by any face");
      continue;
    }
    const int start = link[v].begin()->first;
    int cur = start;
    std::size_t steps = 0;
    do {
      auto it = link[v].find(cur);
      if (it == link[v].end()) break;
      cur = it->second;
      ++steps;
    } while (cur != start && steps <= link[v].size());
    if (cur != start || steps != link[v].size()) {
      issues.push_back("vertex " + std::to_string(v) + " is non-manifold (link is not a single cycle)");
    }
  }
  if (!issues.empty()) return issues;

  // Connectivity over shared vertices.
  std::vector<int> parent(vertex_count);
  for (int v = 0; v < vertex_count; ++v) parent[v] = v;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Face& t : faces) {
    parent[find(t[1])] = find(t[0]);
    parent[find(t[2])] = find(t[0]);
  }
  const int root = find(0);
  for (int v = 1; v < vertex_count; ++v) {
    if (find(v) != root) {
      issues.push_back("surface is not connected (vertex " + std::to_string(v) + ")");
      break;
    }
  }
  return issues;
}

MarkedSurface MarkedSurface::from_faces(int vertex_count, std::vector<Face> faces) {
  const auto issues = combinatorial_issues(vertex_count, faces);
  if (!issues.empty()) {
    std::string msg = "invalid surface: " + issues.front();
    if (issues.size() > 1) msg += " (and " + std::to_string(issues.size() - 1) + " more)";
    throw SurfaceError(msg);
  }

  MarkedSurface s;
  s.vertex_count_ = vertex_count;
  s.faces_ = std::move(faces);
  s.face_edges_.assign(s.faces_.size(), {-1, -1, -1});

  // Edge ids in lexicographic order of their vertex pairs.
  std::set<std::pair<int, int>> keys;
  for (const Face& t : s.faces_) {
    for (int c = 0; c < 3; ++c) {
      const EdgeKey k = EdgeKey::of(t[c], t[(c + 1) % 3]);
      keys.insert({k.a, k.b});
    }
  }
  for (const auto& [a, b] : keys) {
    Edge e;
    e.key = {a, b};
    e.serial = s.next_serial_++;
    s.edge_index_.emplace(pack(a, b), static_cast<int>(s.edges_.size()));
    s.edges_.push_back(e);
  }
  for (int f = 0; f < s.face_count(); ++f) {
    const Face& t = s.faces_[f];
    for (int c = 0; c < 3; ++c) {
      const int e = s.edge_index_.at(pack(t[(c + 1) % 3], t[(c + 2) % 3]));
      s.face_edges_[f][c] = e;
      auto& slots = s.edges_[e].faces;
      (slots[0] < 0 ? slots[0] : slots[1]) = f;
    }
  }
  return s;
}

std::optional<int> MarkedSurface::find_edge(int a, int b) const {
  auto it = edge_index_.find(pack(a, b));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

int MarkedSurface::corner_of(int f, int v) const {
  const Face& t = faces_[f];
  for (int c = 0; c < 3; ++c) {
    if (t[c] == v) return c;
  }
  return -1;
}

std::vector<std::vector<int>> MarkedSurface::vertex_faces() const {
  std::vector<std::vector<int>> out(vertex_count_);
  for (int f = 0; f < face_count(); ++f) {
    for (int v : faces_[f]) out[v].push_back(f);
  }
  return out;
}

int euler_characteristic(const MarkedSurface& surf) {
  return surf.vertex_count() - surf.edge_count() + surf.face_count();
}

// ---------------------------------------------------------------------------
// Metric

PHMetric PHMetric::from_lengths(std::vector<double> lengths, int vertex_count) {
  PHMetric m;
  m.base_length = lengths;
  m.length = std::move(lengths);
  m.epoch_u.assign(vertex_count, 0.0);
  m.u.assign(vertex_count, 0.0);
  return m;
}

TriLengths face_lengths(const MarkedSurface& surf, std::span<const double> length, int f) {
  const auto& fe = surf.face_edges(f);
  return TriLengths{{length[fe[0]], length[fe[1]], length[fe[2]]}};
}

ValidationReport validate(const MarkedSurface& surf, const PHMetric& m) {
  ValidationReport r;
  r.vertices = surf.vertex_count();
  r.edges = surf.edge_count();
  r.faces = surf.face_count();
  r.euler_characteristic = euler_characteristic(surf);

  if (static_cast<int>(m.length.size()) != surf.edge_count()) {
    r.errors.push_back("metric has " + std::to_string(m.length.size()) + " lengths for " +
                       std::to_string(surf.edge_count()) + " edges");
    return r;
  }
  if (r.euler_characteristic > 2 || r.euler_characteristic % 2 != 0) {
    r.errors.push_back("Euler characteristic " + std::to_string(r.euler_characteristic) +
                       " is not that of a closed orientable surface");
  }
  for (int e = 0; e < surf.edge_count(); ++e) {
    const double len = m.length[e];
    if (!(len > 0.0) || !std::isfinite(len)) {
      r.errors.push_back("edge " + edge_string(surf.edge(e).key) + " has non-positive or non-finite length");
    }
  }
  if (!r.errors.empty()) return r;

  r.face_slack.resize(surf.face_count());
  r.min_slack = INFINITY;
  for (int f = 0; f < surf.face_count(); ++f) {
    const double slack = face_lengths(surf, m, f).min_slack();
    r.face_slack[f] = slack;
    if (slack < r.min_slack) {
      r.min_slack = slack;
      r.min_slack_face = f;
    }
    if (!(slack > 0.0)) {
      std::ostringstream os;
      os.precision(17);
      os << "face " << f << " " << face_string(surf.face(f)) << " violates the triangle inequality (slack "
         << slack << ")";
      r.errors.push_back(os.str());
    }
  }
  if (r.errors.empty()) {
    for (int e = 0; e < surf.edge_count(); ++e) {
      if (delaunay_weight(surf, m, e) >= -kDelaunayTol) ++r.delaunay_edges;
    }
  }
  r.valid = r.errors.empty();
  return r;
}

// ---------------------------------------------------------------------------
// Quadrilateral around an edge

namespace {

// Edge e = {i, j} with faces f0 = (i, j, k) and f1 = (j, i, l) in cyclic order.
struct Quad {
  int e;
  int f0, f1;
  int i, j, k, l;
  int ci0, cj0, ck0;  // corners of i, j, k in f0
  int ci1, cj1, cl1;  // corners of i, j, l in f1
};

Quad quad_of(const MarkedSurface& surf, int e) {
  const Edge& ed = surf.edge(e);
  Quad q{};
  q.e = e;
  q.f0 = ed.faces[0];
  q.f1 = ed.faces[1];
  const Face& t0 = surf.face(q.f0);
  int ca = surf.corner_of(q.f0, ed.key.a);
  int cb = surf.corner_of(q.f0, ed.key.b);
  // Orient so that i -> j in f0.
  if ((ca + 1) % 3 == cb) {
    q.i = ed.key.a;
    q.j = ed.key.b;
  } else {
    q.i = ed.key.b;
    q.j = ed.key.a;
  }
  q.ci0 = surf.corner_of(q.f0, q.i);
  q.cj0 = surf.corner_of(q.f0, q.j);
  q.ck0 = 3 - q.ci0 - q.cj0;
  q.k = t0[q.ck0];
  q.ci1 = surf.corner_of(q.f1, q.i);
  q.cj1 = surf.corner_of(q.f1, q.j);
  q.cl1 = 3 - q.ci1 - q.cj1;
  q.l = surf.face(q.f1)[q.cl1];
  return q;
}

double weight_from_angles(const Quad& q, const TriAngles& a0, const TriAngles& a1) {
  return (a0[q.ci0] + a0[q.cj0] + a1[q.ci1] + a1[q.cj1]) - (a0[q.ck0] + a1[q.cl1]);
}

// sinh^2(d/2) for the third side of a triangle with sides a, b enclosing angle
// theta:  sinh^2((a-b)/2) + sinh(a) sinh(b) sin^2(theta/2).
double opposite_side(double a, double b, double theta) {
  const double sh = std::sinh(0.5 * (a - b));
  const double st = std::sin(0.5 * theta);
  const double val = sh * sh + std::sinh(a) * std::sinh(b) * st * st;
  return 2.0 * std::asinh(std::sqrt(val));
}

struct Diagonal {
  double from_i;
  double from_j;
  double theta_i;
  double theta_j;
};

Diagonal quad_diagonal(const MarkedSurface& surf, const PHMetric& m, const Quad& q) {
  const TriLengths l0 = face_lengths(surf, m, q.f0);
  const TriLengths l1 = face_lengths(surf, m, q.f1);
  const TriAngles a0 = tri_angles(l0);
  const TriAngles a1 = tri_angles(l1);
  Diagonal d{};
  d.theta_i = a0[q.ci0] + a1[q.ci1];
  d.theta_j = a0[q.cj0] + a1[q.cj1];
  // At i: sides i-k (in f0, opposite j) and i-l (in f1, opposite j).
  d.from_i = opposite_side(l0[q.cj0], l1[q.cj1], d.theta_i);
  d.from_j = opposite_side(l0[q.ci0], l1[q.ci1], d.theta_j);
  return d;
}

}  // namespace

double delaunay_weight(const MarkedSurface& surf, const PHMetric& m, int e) {
  const Quad q = quad_of(surf, e);
  return weight_from_angles(q, tri_angles(face_lengths(surf, m, q.f0)), tri_angles(face_lengths(surf, m, q.f1)));
}

std::vector<TriAngles> face_angles(const MarkedSurface& surf, std::span<const double> length) {
  std::vector<TriAngles> angles(surf.face_count());
  for (int f = 0; f < surf.face_count(); ++f) angles[f] = tri_angles(face_lengths(surf, length, f));
  return angles;
}

std::vector<double> delaunay_weights(const MarkedSurface& surf, std::span<const TriAngles> angles) {
  std::vector<double> w(surf.edge_count());
  for (int e = 0; e < surf.edge_count(); ++e) {
    const Quad q = quad_of(surf, e);
    w[e] = weight_from_angles(q, angles[q.f0], angles[q.f1]);
  }
  return w;
}

namespace {

std::vector<double> edge_weights(const MarkedSurface& surf, std::span<const double> length) {
  return delaunay_weights(surf, face_angles(surf, length));
}

}  // namespace

bool is_delaunay(const MarkedSurface& surf, const PHMetric& m, double tol) {
  for (double w : edge_weights(surf, m.length)) {
    if (w < -tol) return false;
  }
  return true;
}

std::vector<std::pair<int, double>> nondelaunay_edges(const MarkedSurface& surf, const PHMetric& m, double tol) {
  std::vector<std::pair<int, double>> out;
  const auto w = edge_weights(surf, m.length);
  for (int e = 0; e < surf.edge_count(); ++e) {
    if (w[e] < -tol) out.emplace_back(e, w[e]);
  }
  return out;
}

double diagonal_length(const MarkedSurface& surf, const PHMetric& m, int e, int side) {
  const Quad q = quad_of(surf, e);
  const Diagonal d = quad_diagonal(surf, m, q);
  if (!(d.theta_i < kPi) || !(d.theta_j < kPi)) {
    throw InadmissibleTriangle("flip of edge " + edge_string(surf.edge(e).key) +
                               " produces degenerate triangle (quadrilateral is not convex)");
  }
  return side == 0 ? d.from_i : d.from_j;
}

// ---------------------------------------------------------------------------
// Flips

struct FlipAccess {
  static void flip(MarkedSurface& s, const Quad& q) {
    const int e = q.e;
    const int e_ik = s.face_edges_[q.f0][q.cj0];
    const int e_jk = s.face_edges_[q.f0][q.ci0];
    const int e_il = s.face_edges_[q.f1][q.cj1];
    const int e_jl = s.face_edges_[q.f1][q.ci1];

    s.faces_[q.f0] = {q.k, q.i, q.l};
    s.face_edges_[q.f0] = {e_il, e, e_ik};
    s.faces_[q.f1] = {q.l, q.j, q.k};
    s.face_edges_[q.f1] = {e_jk, e, e_jl};

    auto move_face = [&](int edge, int from, int to) {
      auto& slots = s.edges_[edge].faces;
      (slots[0] == from ? slots[0] : slots[1]) = to;
    };
    move_face(e_il, q.f1, q.f0);
    move_face(e_jk, q.f0, q.f1);

    s.edge_index_.erase(MarkedSurface::pack(q.i, q.j));
    s.edge_index_.emplace(MarkedSurface::pack(q.k, q.l), e);
    Edge& ed = s.edges_[e];
    ed.key = EdgeKey::of(q.k, q.l);
    ed.faces = {q.f0, q.f1};
    ed.serial = s.next_serial_++;
  }
};

FlipEvent flip_edge(MarkedSurface& surf, PHMetric& m, int e) {
  const Quad q = quad_of(surf, e);
  const EdgeKey old_key = surf.edge(e).key;
  if (q.f0 == q.f1) {
    throw FlipRefused("edge " + edge_string(old_key) + " is incident to a single face twice");
  }
  if (q.k == q.l) {
    throw FlipRefused("flip of edge " + edge_string(old_key) + " would create a self-loop");
  }
  if (surf.find_edge(q.k, q.l)) {
    throw FlipRefused("flip of edge " + edge_string(old_key) + " would duplicate existing edge " +
                      edge_string(EdgeKey::of(q.k, q.l)));
  }

  const TriLengths l0 = face_lengths(surf, m, q.f0);
  const TriLengths l1 = face_lengths(surf, m, q.f1);
  const TriAngles a0 = tri_angles(l0);
  const TriAngles a1 = tri_angles(l1);
  const double weight = weight_from_angles(q, a0, a1);

  double diag = 0.0;
  try {
    diag = diagonal_length(surf, m, e, 0);
  } catch (const InadmissibleTriangle& ex) {
    throw FlipRefused(ex.what());
  }
  // New faces (k, i, l) and (l, j, k), lengths by opposite corner.
  const double l_ik = l0[q.cj0], l_jk = l0[q.ci0];
  const double l_il = l1[q.cj1], l_jl = l1[q.ci1];
  const TriLengths n0{{l_il, diag, l_ik}};
  const TriLengths n1{{l_jk, diag, l_jl}};
  if (!n0.admissible() || !n1.admissible()) {
    throw FlipRefused("flip of edge " + edge_string(old_key) + " produces degenerate triangle");
  }
  const TriAngles b0 = tri_angles(n0);
  const TriAngles b1 = tri_angles(n1);

  // Total angle change at the quad vertices; only the two faces change.
  const double d_i = (b0[1]) - (a0[q.ci0] + a1[q.ci1]);
  const double d_j = (b1[1]) - (a0[q.cj0] + a1[q.cj1]);
  const double d_k = (b0[0] + b1[2]) - a0[q.ck0];
  const double d_l = (b0[2] + b1[0]) - a1[q.cl1];

  FlipAccess::flip(surf, q);
  m.length[e] = diag;
  rebase(m);

  FlipEvent ev;
  ev.old_edge = old_key;
  ev.new_edge = EdgeKey::of(q.k, q.l);
  ev.pre_weight = weight;
  ev.max_angle_change = std::max({std::abs(d_i), std::abs(d_j), std::abs(d_k), std::abs(d_l)});
  return ev;
}

std::vector<FlipEvent> make_delaunay(MarkedSurface& surf, PHMetric& m, double tol) {
  std::vector<FlipEvent> log;
  const std::size_t cap = 100 * static_cast<std::size_t>(surf.edge_count());

  std::set<std::pair<double, int>> work;
  {
    const auto w = edge_weights(surf, m.length);
    for (int e = 0; e < surf.edge_count(); ++e) {
      if (w[e] < -tol) work.insert({w[e], e});
    }
  }
  std::set<int> refused;
  std::string last_refusal;
  while (!work.empty()) {
    const int e = work.begin()->second;
    work.erase(work.begin());
    if (delaunay_weight(surf, m, e) >= -tol) continue;
    const Quad q = quad_of(surf, e);
    const std::array<int, 4> rim{surf.face_edges(q.f0)[q.ci0], surf.face_edges(q.f0)[q.cj0],
                                 surf.face_edges(q.f1)[q.ci1], surf.face_edges(q.f1)[q.cj1]};
    try {
      log.push_back(flip_edge(surf, m, e));
    } catch (const FlipRefused& ex) {
      refused.insert(e);
      last_refusal = ex.what();
      continue;
    }
    if (log.size() > cap) {
      throw DelaunayFailure("make_delaunay exceeded " + std::to_string(cap) + " flips", MetricSurface{surf, m});
    }
    for (int r : rim) {
      const double w = delaunay_weight(surf, m, r);
      if (w < -tol) work.insert({w, r});
    }
    // A flip can make previously refused edges flippable.
    for (int r : refused) {
      const double w = delaunay_weight(surf, m, r);
      if (w < -tol) work.insert({w, r});
    }
    refused.clear();
  }
  if (!refused.empty()) {
    throw DelaunayFailure("non-Delaunay edges remain after refused flips: " + last_refusal,
                          MetricSurface{surf, m});
  }
  return log;
}

// ---------------------------------------------------------------------------
// Vertex scaling

namespace {

void scale_into(const MarkedSurface& surf, const PHMetric& m, std::span<const double> u, std::vector<double>& out) {
  out.resize(surf.edge_count());
  for (int e = 0; e < surf.edge_count(); ++e) {
    const EdgeKey k = surf.edge(e).key;
    out[e] = scaled_length(m.base_length[e], u[k.a] - m.epoch_u[k.a], u[k.b] - m.epoch_u[k.b]);
  }
}

enum class PathState { ok, nondelaunay, inadmissible };

PathState assess(const MarkedSurface& surf, std::span<const double> length, double tol) {
  for (int f = 0; f < surf.face_count(); ++f) {
    if (!face_lengths(surf, length, f).admissible()) return PathState::inadmissible;
  }
  for (double w : edge_weights(surf, length)) {
    if (w < -tol) return PathState::nondelaunay;
  }
  return PathState::ok;
}

}  // namespace

std::vector<double> scaled_lengths(const MarkedSurface& surf, const PHMetric& m, std::span<const double> u) {
  std::vector<double> out;
  scale_into(surf, m, u, out);
  return out;
}

void apply_conformal_factor(const MarkedSurface& surf, PHMetric& m, std::span<const double> u) {
  if (static_cast<int>(u.size()) != surf.vertex_count()) {
    throw Error("conformal factor has " + std::to_string(u.size()) + " entries for " +
                std::to_string(surf.vertex_count()) + " vertices");
  }
  scale_into(surf, m, u, m.length);
  m.u.assign(u.begin(), u.end());
}

void rebase(PHMetric& m) {
  m.base_length = m.length;
  m.epoch_u = m.u;
}

std::vector<FlipEvent> rescale_with_surgery(MarkedSurface& surf, PHMetric& m, std::span<const double> u,
                                            const SurgeryOptions& opt) {
  const int n = surf.vertex_count();
  if (static_cast<int>(u.size()) != n) {
    throw Error("conformal factor has " + std::to_string(u.size()) + " entries for " + std::to_string(n) +
                " vertices");
  }
  const std::vector<double> start = m.u;
  double span = 0.0;
  for (int v = 0; v < n; ++v) span = std::max(span, std::abs(u[v] - start[v]));

  std::vector<double> point(n);
  std::vector<double> lengths;
  auto at = [&](double s) -> PathState {
    for (int v = 0; v < n; ++v) point[v] = start[v] + s * (u[v] - start[v]);
    scale_into(surf, m, point, lengths);
    return assess(surf, lengths, opt.tol);
  };

  std::vector<FlipEvent> log;
  if (opt.angle_jump) *opt.angle_jump = 0.0;
  const int pieces = std::max(1, static_cast<int>(std::ceil(span / opt.max_substep)));
  const std::size_t crossing_cap = 100 * static_cast<std::size_t>(surf.edge_count()) + 100;
  std::size_t crossings = 0;
  double s_done = 0.0;
  for (int p = 1; p <= pieces; ++p) {
    const double s_end = (p == pieces) ? 1.0 : static_cast<double>(p) / pieces;
    while (true) {
      const PathState end_state = at(s_end);
      if (end_state == PathState::ok) {
        s_done = s_end;
        break;
      }
      // First point past s_done where the current triangulation fails.
      double lo = s_done;
      double hi = s_end;
      while (hi - lo > 1e-15 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (at(mid) == PathState::ok) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      if (at(hi) == PathState::inadmissible) {
        std::ostringstream os;
        os << "a face degenerates at path parameter " << hi << " before any edge turns non-Delaunay";
        throw InadmissibleTriangle(os.str());
      }
      m.length = lengths;
      m.u = point;
      std::vector<double> before;
      if (opt.angle_jump) before = vertex_angle_sums(surf, m);
      auto flips = make_delaunay(surf, m, opt.tol);
      if (opt.angle_jump && !flips.empty()) {
        const auto after = vertex_angle_sums(surf, m);
        for (int v = 0; v < n; ++v) *opt.angle_jump = std::max(*opt.angle_jump, std::abs(after[v] - before[v]));
      }
      if (flips.empty()) {
        // Bisection landed within tolerance of the boundary; nothing to flip.
        rebase(m);
      }
      log.insert(log.end(), flips.begin(), flips.end());
      s_done = hi;
      if (++crossings > crossing_cap) {
        throw DelaunayFailure("too many Delaunay crossings along the scaling path", MetricSurface{surf, m});
      }
    }
  }
  scale_into(surf, m, u, m.length);
  m.u.assign(u.begin(), u.end());
  return log;
}

std::vector<double> vertex_angle_sums(const MarkedSurface& surf, const PHMetric& m) {
  std::vector<double> sums(surf.vertex_count(), 0.0);
  for (int f = 0; f < surf.face_count(); ++f) {
    const TriAngles a = tri_angles(face_lengths(surf, m, f));
    const Face& t = surf.face(f);
    for (int c = 0; c < 3; ++c) sums[t[c]] += a[c];
  }
  return sums;
}

}  // namespace hypflow

#include "hypflow/phm_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace hypflow {

namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

int to_int(const std::string& s, int line, const char* what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(line, std::string("expected integer ") + what + ", got '" + s + "'");
  }
  return v;
}

double to_double(const std::string& s, int line, const char* what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(line, std::string("expected number ") + what + ", got '" + s + "'");
  }
  return v;
}

std::string pair_string(int a, int b) { return "{" + std::to_string(a) + ", " + std::to_string(b) + "}"; }

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

}  // namespace

PhmData parse_phm_data(std::istream& in) {
  PhmData d;
  std::string line;
  int lineno = 0;
  bool header = false;
  bool have_v = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto tok = tokens(line);
    if (tok.empty()) continue;
    if (!header) {
      if (tok.size() != 2 || tok[0] != "phm" || tok[1] != "1") throw ParseError(lineno, "expected header 'phm 1'");
      header = true;
      continue;
    }
    const std::string& kind = tok[0];
    if (kind == "v") {
      if (tok.size() != 2) throw ParseError(lineno, "expected 'v <N>'");
      if (have_v) throw ParseError(lineno, "duplicate 'v' record");
      d.vertex_count = to_int(tok[1], lineno, "vertex count");
      if (d.vertex_count <= 0) throw ParseError(lineno, "vertex count must be positive");
      have_v = true;
    } else if (kind == "f") {
      if (!have_v) throw ParseError(lineno, "'f' record before 'v'");
      if (tok.size() != 4) throw ParseError(lineno, "expected 'f <i> <j> <k>'");
      Face f{};
      for (int c = 0; c < 3; ++c) {
        f[c] = to_int(tok[c + 1], lineno, "vertex index");
        if (f[c] < 0 || f[c] >= d.vertex_count) {
          throw ParseError(lineno, "vertex index " + tok[c + 1] + " out of range [0, " +
                                       std::to_string(d.vertex_count) + ")");
        }
      }
      d.faces.push_back(f);
      d.face_lines.push_back(lineno);
    } else if (kind == "e") {
      if (!have_v) throw ParseError(lineno, "'e' record before 'v'");
      if (tok.size() != 4) throw ParseError(lineno, "expected 'e <i> <j> <length>'");
      const int a = to_int(tok[1], lineno, "vertex index");
      const int b = to_int(tok[2], lineno, "vertex index");
      if (a < 0 || a >= d.vertex_count || b < 0 || b >= d.vertex_count) {
        throw ParseError(lineno, "edge " + pair_string(a, b) + " has a vertex index out of range");
      }
      if (a == b) throw ParseError(lineno, "edge " + pair_string(a, b) + " is a loop");
      const double len = to_double(tok[3], lineno, "length");
      if (!(len > 0.0) || !std::isfinite(len)) {
        throw ParseError(lineno, "edge " + pair_string(a, b) + " has non-positive or non-finite length");
      }
      const auto key = std::minmax(a, b);
      if (!d.lengths.emplace(std::pair{key.first, key.second}, len).second) {
        throw ParseError(lineno, "duplicate length record for edge " + pair_string(key.first, key.second));
      }
      d.length_lines[{key.first, key.second}] = lineno;
    } else {
      throw ParseError(lineno, "unknown record '" + kind + "'");
    }
  }
  if (!header) throw ParseError(lineno, "missing header 'phm 1'");
  if (!have_v) throw ParseError(lineno, "missing 'v' record");
  return d;
}

MetricSurface build_metric_surface(const PhmData& data) {
  MarkedSurface surf = MarkedSurface::from_faces(data.vertex_count, data.faces);
  std::vector<double> len(surf.edge_count(), 0.0);
  for (int e = 0; e < surf.edge_count(); ++e) {
    const EdgeKey k = surf.edge(e).key;
    const auto it = data.lengths.find({k.a, k.b});
    if (it == data.lengths.end()) {
      int line = 0;
      const int f = surf.edge(e).faces[0];
      if (f >= 0 && f < static_cast<int>(data.face_lines.size())) line = data.face_lines[f];
      throw ParseError(line, "missing length record for edge " + pair_string(k.a, k.b) + " of this face");
    }
    len[e] = it->second;
  }
  for (const auto& [key, value] : data.lengths) {
    if (!surf.find_edge(key.first, key.second)) {
      const auto line = data.length_lines.find(key);
      throw ParseError(line == data.length_lines.end() ? 0 : line->second,
                       "length record for " + pair_string(key.first, key.second) + ", which is not an edge");
    }
  }
  PHMetric m = PHMetric::from_lengths(std::move(len), surf.vertex_count());
  return MetricSurface{std::move(surf), std::move(m)};
}

MetricSurface read_phm(std::istream& in) { return build_metric_surface(parse_phm_data(in)); }

MetricSurface load_phm(const std::string& path) {
  auto in = open_in(path);
  return read_phm(in);
}

void write_phm(std::ostream& out, const MetricSurface& s) {
  const auto& surf = s.surface;
  out << "phm 1\n";
  out << "v " << surf.vertex_count() << "\n";
  for (const Face& f : surf.faces()) out << "f " << f[0] << " " << f[1] << " " << f[2] << "\n";
  const auto old = out.precision(17);
  for (int e = 0; e < surf.edge_count(); ++e) {
    const EdgeKey k = surf.edge(e).key;
    out << "e " << k.a << " " << k.b << " " << s.metric.length[e] << "\n";
  }
  out.precision(old);
}

void save_phm(const std::string& path, const MetricSurface& s) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_phm(out, s);
  if (!out) throw Error("error while writing " + path);
}

std::vector<double> read_vertex_values(std::istream& in, int vertex_count, double default_value) {
  std::vector<double> v(vertex_count, default_value);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto tok = tokens(line);
    if (tok.empty()) continue;
    if (tok.size() != 3 || tok[0] != "t") throw ParseError(lineno, "expected 't <i> <value>'");
    const int i = to_int(tok[1], lineno, "vertex index");
    if (i < 0 || i >= vertex_count) {
      throw ParseError(lineno, "vertex index " + tok[1] + " out of range [0, " + std::to_string(vertex_count) + ")");
    }
    const double x = to_double(tok[2], lineno, "value");
    if (!std::isfinite(x)) throw ParseError(lineno, "value must be finite");
    v[i] = x;
  }
  return v;
}

std::vector<double> load_vertex_values(const std::string& path, int vertex_count, double default_value) {
  auto in = open_in(path);
  return read_vertex_values(in, vertex_count, default_value);
}

void write_vertex_values(std::ostream& out, const std::vector<double>& values) {
  const auto old = out.precision(17);
  for (std::size_t i = 0; i < values.size(); ++i) out << "t " << i << " " << values[i] << "\n";
  out.precision(old);
}

}  // namespace hypflow

#pragma once

// Text formats: `.phm` surfaces with edge lengths, `t <i> <value>` per-vertex
// value files, and JSON-lines step logs.

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hypflow/surface.hpp"

namespace hypflow {

// Contents of a .phm file before any combinatorial checking.
struct PhmData {
  int vertex_count = 0;
  std::vector<Face> faces;
  std::map<std::pair<int, int>, double> lengths;  // keyed by (min, max)
  std::vector<int> face_lines;
  std::map<std::pair<int, int>, int> length_lines;
};

// Syntax-level parse. Throws ParseError with the offending line.
PhmData parse_phm_data(std::istream& in);

// Builds the surface and attaches lengths. Throws SurfaceError on combinatorial
// defects, ParseError naming the edge when a length record is missing or refers
// to a pair that is not an edge.
MetricSurface build_metric_surface(const PhmData& data);

MetricSurface read_phm(std::istream& in);
MetricSurface load_phm(const std::string& path);

// Current faces and lengths, 17 significant digits.
void write_phm(std::ostream& out, const MetricSurface& s);
void save_phm(const std::string& path, const MetricSurface& s);

// `t <i> <value>` records; vertices not listed get default_value.
std::vector<double> read_vertex_values(std::istream& in, int vertex_count, double default_value);
std::vector<double> load_vertex_values(const std::string& path, int vertex_count, double default_value);
void write_vertex_values(std::ostream& out, const std::vector<double>& values);

}  // namespace hypflow

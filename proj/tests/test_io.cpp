#include <doctest.h>

#include <sstream>

#include "support.hpp"

using namespace hypflow;
using testing::Gen;

namespace {

const char* kTetra = R"(phm 1
# unit tetrahedron
v 4
f 0 1 2
f 0 3 1
f 1 3 2
f 0 2 3
e 0 1 1.0
e 0 2 1.0
e 0 3 1.0
e 1 2 1.0
e 1 3 1.0
e 2 3 1.0
)";

std::string parse_error(const std::string& text) {
  std::istringstream in(text);
  try {
    read_phm(in);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto p = s.find(from);
  REQUIRE(p != std::string::npos);
  return s.replace(p, from.size(), to);
}

}  // namespace

TEST_CASE("reads a tetrahedron") {
  std::istringstream in(kTetra);
  const auto s = read_phm(in);
  CHECK(s.surface.vertex_count() == 4);
  CHECK(s.surface.face_count() == 4);
  CHECK(s.surface.edge_count() == 6);
  for (double l : s.metric.length) CHECK(l == 1.0);
  CHECK(s.metric.u == std::vector<double>(4, 0.0));
}

TEST_CASE("write then read reproduces the surface") {
  Gen g(17);
  for (int k = 0; k < 10; ++k) {
    const auto s = testing::random_delaunay_state(g, k);
    std::stringstream buf;
    write_phm(buf, s);
    const auto r = read_phm(buf);
    CHECK(r.surface.faces() == s.surface.faces());
    REQUIRE(r.surface.edge_count() == s.surface.edge_count());
    for (int e = 0; e < s.surface.edge_count(); ++e) {
      const auto key = s.surface.edge(e).key;
      CHECK(r.metric.length[*r.surface.find_edge(key.a, key.b)] == s.metric.length[e]);
    }
  }
}

TEST_CASE("parse errors carry line numbers") {
  CHECK(parse_error("v 4\n").find("line 1: expected header") == 0);
  CHECK(parse_error("phm 1\n").find("missing 'v'") != std::string::npos);
  CHECK(parse_error(replace(kTetra, "f 1 3 2", "f 1 3 x")).find("line 6:") == 0);
  CHECK(parse_error(replace(kTetra, "f 1 3 2", "f 1 3 9")).find("line 6: vertex index 9 out of range") == 0);
  CHECK(parse_error(replace(kTetra, "e 2 3 1.0", "e 2 3 -1.0")).find("line 13:") == 0);
  CHECK(parse_error(replace(kTetra, "e 2 3 1.0", "e 2 3 1.0\nq 1")).find("line 14: unknown record") == 0);
  CHECK(parse_error(replace(kTetra, "e 2 3 1.0", "e 2 3 1.0\ne 3 2 1.0")).find(
            "line 14: duplicate length record for edge {2, 3}") == 0);
}

TEST_CASE("missing length records name the edge") {
  const auto missing = parse_error(replace(kTetra, "e 1 3 1.0\n", ""));
  CHECK(missing.find("missing length record for edge {1, 3}") != std::string::npos);
  // The first face using {1, 3} is on line 5.
  CHECK(missing.find("line 5:") == 0);

  CHECK(parse_error(replace(kTetra, "f 0 2 3\n", "")).find("boundary") != std::string::npos);
}

TEST_CASE("vertex value files") {
  std::istringstream in("# targets\nt 0 -1.5\nt 3 2\n");
  const auto v = read_vertex_values(in, 4, 0.25);
  CHECK(v == std::vector<double>{-1.5, 0.25, 0.25, 2.0});

  std::istringstream bad("t 4 1\n");
  CHECK_THROWS_WITH_AS(read_vertex_values(bad, 4, 0.0), "line 1: vertex index 4 out of range [0, 4)", ParseError);
  std::istringstream worse("t 0 1\nx 1 1\n");
  CHECK_THROWS_AS(read_vertex_values(worse, 4, 0.0), ParseError);

  const std::vector<double> values{0.1, -1.0 / 3.0, 1e-17};
  std::stringstream buf;
  write_vertex_values(buf, values);
  CHECK(read_vertex_values(buf, 3, 9.0) == values);
}

TEST_CASE("files on disk") {
  CHECK_THROWS_AS(load_phm("/nonexistent/file.phm"), Error);
  const auto s = testing::genus2_fixture();
  CHECK(s.surface.vertex_count() == 50);
}

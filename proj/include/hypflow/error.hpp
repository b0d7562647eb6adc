#pragma once

#include <stdexcept>
#include <string>

namespace hypflow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A triangle whose lengths violate a strict triangle inequality, or a face
// that would become one.
class InadmissibleTriangle : public Error {
 public:
  using Error::Error;
};

// Conformal factor pushed a length outside the representable double range.
class ConformalOverflow : public Error {
 public:
  using Error::Error;
};

// Combinatorial defect of a triangulated surface (boundary, non-manifold,
// repeated vertex, inconsistent orientation, bad index).
class SurfaceError : public Error {
 public:
  using Error::Error;
};

// An edge flip that cannot be performed without mutating into an invalid
// triangulation. The surface is left untouched.
class FlipRefused : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace hypflow

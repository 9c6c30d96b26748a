#pragma once

#include <stdexcept>
#include <string>

namespace clsig {

// Error raised for anything a caller (or CLI user) can trigger with bad input:
// malformed files, invalid flags, contract violations on data. The CLI maps
// this family to exit code 2.
class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// A quadrature sample sits at a point where the naive signature is undefined
// (some coordinate at angle 0) and no resolution strategy was authorized.
class unresolved_degeneracy : public input_error {
 public:
  explicit unresolved_degeneracy(const std::string& what) : input_error(what) {}
};

// Arithmetic left the supported range (exact angle denominators, grid sizes).
class overflow_error : public std::runtime_error {
 public:
  explicit overflow_error(const std::string& what) : std::runtime_error(what) {}
};

// Writes `content` to `path` atomically: a temp file in the same directory is
// written, flushed, then renamed over the target. On any failure the target is
// left untouched and no temp file remains.
void atomic_write_file(const std::string& path, const std::string& content);

}  // namespace clsig

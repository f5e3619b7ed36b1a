#pragma once

#include <stdexcept>
#include <string>

namespace weylzeta {

// Bad label / bad CLI or spec-file input.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};

// Evaluation request sits on (or numerically too close to) a pole.
struct PoleError : std::runtime_error {
  explicit PoleError(const std::string& m) : std::runtime_error(m) {}
};

// Argument outside the documented accuracy range.
struct RangeError : std::runtime_error {
  explicit RangeError(const std::string& m) : std::runtime_error(m) {}
};

// Contour residue failed to converge under node doubling, or the
// radius-halving diagnostic disagreed.
struct ResidueError : std::runtime_error {
  explicit ResidueError(const std::string& m) : std::runtime_error(m) {}
};

struct QuadratureError : std::runtime_error {
  explicit QuadratureError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace weylzeta

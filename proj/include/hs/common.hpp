#pragma once

#include <stdexcept>
#include <string>

namespace hs {

// Comparison tolerances used across the library.
namespace tol {
inline constexpr double coord = 1e-12;        // breakpoint coordinates
inline constexpr double value = 1e-10;        // function values
inline constexpr double slope_floor = 1e-12;  // minimum invertible slope
inline constexpr double event_time = 1e-12;   // grouping of simultaneous events
inline constexpr double metric_zero = 1e-7;   // zero detection for optimized distances
inline constexpr double alpha_gap = 1e-9;     // enforced gap below 1 for variable alpha
}  // namespace tol

struct NotMonotone : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotInvertible : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct Unbounded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DominanceViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InconsistentU : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OutOfHorizon : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hs

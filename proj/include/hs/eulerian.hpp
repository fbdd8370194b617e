#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hs/alpha.hpp"
#include "hs/piecewise.hpp"

namespace hs {

struct Violation {
  std::string invariant;
  std::string location;
  double magnitude = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<Violation> warnings;

  bool valid() const { return violations.empty(); }
  std::string str() const;
};

/// Eulerian state (u, mu, nu) with its dissipation function.
struct EulerianY {
  PwLinear u;   // identity coefficient 0
  Measure mu;   // energy measure
  Measure nu;   // dominating dummy measure
  AlphaFn alpha;
};

/// Equivalence-class representative (u, mu) with alpha; nu is quotiented out.
struct EulerianZ {
  PwLinear u;
  Measure mu;
  AlphaFn alpha;
};

struct ValidateOptions {
  bool check_alpha = true;  // admissibility of alpha itself
};

ValidationReport validate_eulerian(const EulerianY& y, ValidateOptions opts = {});
ValidationReport validate_eulerian_z(const EulerianZ& z, ValidateOptions opts = {});

struct RadonNikodym {
  PwConstant cell_ratio;                          // d mu / d nu on density cells
  std::vector<std::pair<double, double>> atom_ratio;  // (position, ratio)
};

/// Cell-wise and atom-wise ratio of mu against nu on the given grid
/// refinement. Zero where both vanish; throws DominanceViolation if mu
/// exceeds nu anywhere.
RadonNikodym radon_nikodym(const Measure& mu, const Measure& nu, const Grid& grid);

}  // namespace hs

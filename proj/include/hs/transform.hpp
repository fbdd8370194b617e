#pragma once

#include <optional>
#include <string>

#include "hs/eulerian.hpp"
#include "hs/lagrangian.hpp"

namespace hs {

/// Eulerian -> Lagrangian map. y is the generalized inverse of
/// x + nu((-inf,x)); atoms of nu open up flat cells whose length equals the
/// atom mass. The output satisfies y + H = id exactly.
LagrangianX to_lagrangian(const EulerianY& y);

/// Variant that skips input validation (used for raw driver scenarios).
LagrangianX to_lagrangian_unchecked(const EulerianY& y);

/// Lagrangian -> Eulerian map: u(y(xi)) = U(xi), mu and nu are the
/// push-forwards of V_xi dxi and H_xi dxi through y. Throws InconsistentU if
/// U varies on a flat cell of y.
EulerianY to_eulerian(const LagrangianX& x);
EulerianY to_eulerian_unchecked(const LagrangianX& x);

/// If some group member f with x_b = x_a o f exists (within value tolerance),
/// return it. The single candidate tested is (y_a+H_a)^{-1} o (y_b+H_b); any
/// true relabelling must equal it. `diagnostic`, when given, receives a short
/// reason for failure.
std::optional<Relabelling> is_relabelling_of(const LagrangianX& x_a,
                                             const LagrangianX& x_b,
                                             std::string* diagnostic = nullptr);

}  // namespace hs

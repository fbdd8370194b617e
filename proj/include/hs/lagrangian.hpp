#pragma once

#include <utility>

#include "hs/alpha.hpp"
#include "hs/eulerian.hpp"
#include "hs/piecewise.hpp"

namespace hs {

/// Lagrangian state: characteristic position y (identity coefficient 1),
/// velocity U, cumulative dominating energy H, and cumulative retained
/// energy V, all on one shared grid, together with alpha.
struct LagrangianX {
  PwLinear y;
  PwLinear U;
  PwLinear H;
  PwLinear V;
  AlphaFn alpha;

  /// Re-represent all four components on their common refinement.
  static LagrangianX on_shared_grid(PwLinear y, PwLinear U, PwLinear H,
                                    PwLinear V, AlphaFn alpha);

  const Grid& grid() const { return y.grid(); }
  /// Limit of V at +infinity (total retained energy).
  double v_infinity() const { return V.bounded_right_tail(); }
};

/// Increasing reparameterization of the label line: identity coefficient 1,
/// strictly positive slopes, bounded offset with slope-one tails.
struct Relabelling {
  PwLinear f;

  static Relabelling identity();
  static Relabelling from(PwLinear f);

  Relabelling inverse() const { return Relabelling{invert(f)}; }
  /// Membership violations against the relabelling group (empty if member).
  std::vector<std::string> group_violations() const;
};

ValidationReport validate_lagrangian(const LagrangianX& x);

/// Component-wise composition with f; alpha is untouched.
LagrangianX relabel(const LagrangianX& x, const Relabelling& f);

/// Canonical representative with y + H = id, together with the relabelling
/// (y+H)^{-1} that produces it.
std::pair<LagrangianX, Relabelling> pi_normalize(const LagrangianX& x);

/// sup-norm comparison of two states:
/// |y|_inf + |U|_inf + |H|_inf + (1/4)|V|_inf + |alpha|_inf of differences.
double lag_comparison_norm(const LagrangianX& a, const LagrangianX& b);

}  // namespace hs

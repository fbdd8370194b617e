#include "hs/transform.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace hs {

namespace {

LagrangianX build_lagrangian(const EulerianY& y0) {
  // Positions where anything can happen: breakpoints of u and of both
  // densities, plus every atom.
  std::vector<double> events;
  auto push_all = [&events](const std::vector<double>& v) {
    events.insert(events.end(), v.begin(), v.end());
  };
  push_all(y0.u.grid().points());
  push_all(y0.mu.density().grid.points());
  push_all(y0.nu.density().grid.points());
  for (const Atom& a : y0.mu.atoms()) events.push_back(a.x);
  for (const Atom& a : y0.nu.atoms()) events.push_back(a.x);
  std::sort(events.begin(), events.end());
  std::vector<double> xs;
  for (double x : events) {
    if (xs.empty() || x - xs.back() > tol::coord) xs.push_back(x);
  }

  std::vector<double> xi_pts;    // label grid
  std::vector<double> y_vals;    // full y values at labels
  std::vector<double> u_vals;    // velocity at labels
  std::vector<double> v_slopes;  // V_xi per interior cell, aligned with xi gaps

  for (std::size_t i = 0; i < xs.size(); ++i) {
    double x = xs[i];
    double xi_left = x + y0.nu.cumulative_left(x);
    double atom_nu = y0.nu.cumulative_right(x) - y0.nu.cumulative_left(x);

    if (i > 0 && !xi_pts.empty()) {
      // Sloped stretch from the previous event to this one.
      double rho_nu = y0.nu.density().at(0.5 * (xs[i - 1] + x));
      double rho_mu = y0.mu.density().at(0.5 * (xs[i - 1] + x));
      v_slopes.push_back(rho_mu / (1.0 + rho_nu));
    }
    xi_pts.push_back(xi_left);
    y_vals.push_back(x);
    u_vals.push_back(y0.u.eval(x));
    if (atom_nu > tol::coord) {
      // Atoms of nu open a flat cell of length equal to the atom mass.
      double atom_mu = y0.mu.cumulative_right(x) - y0.mu.cumulative_left(x);
      v_slopes.push_back(atom_mu / atom_nu);
      xi_pts.push_back(xi_left + atom_nu);
      y_vals.push_back(x);
      u_vals.push_back(y0.u.eval(x));
    }
  }

  if (xi_pts.empty()) {
    // No energy anywhere: y = id, H = V = 0, u constant.
    return LagrangianX{PwLinear::identity(),
                       PwLinear::constant(y0.u.eval(0.0)),
                       PwLinear::constant(0.0), PwLinear::constant(0.0),
                       y0.alpha};
  }

  Grid grid(xi_pts);
  PwLinear y = PwLinear::from_values(1, grid, y_vals);
  PwLinear u = PwLinear::from_values(0, grid, u_vals);
  std::vector<double> h_vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) h_vals[i] = grid[i] - y_vals[i];
  PwLinear h = PwLinear::from_values(0, grid, h_vals);
  std::vector<double> vv(grid.size(), 0.0);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    vv[i] = vv[i - 1] + v_slopes[i - 1] * (grid[i] - grid[i - 1]);
  }
  PwLinear v = PwLinear::from_values(0, grid, vv);
  return LagrangianX{std::move(y), std::move(u), std::move(h), std::move(v),
                     y0.alpha};
}

}  // namespace

LagrangianX to_lagrangian(const EulerianY& y) {
  ValidationReport rep = validate_eulerian(y);
  if (!rep.valid()) {
    throw InvalidInput("state outside the admissible Eulerian set:\n" + rep.str());
  }
  LagrangianX x = build_lagrangian(y);
  ValidationReport out = validate_lagrangian(x);
  if (!out.valid()) {
    throw InvalidInput("mapped state failed Lagrangian validation:\n" + out.str());
  }
  return x;
}

LagrangianX to_lagrangian_unchecked(const EulerianY& y) {
  return build_lagrangian(y);
}

namespace {

EulerianY build_eulerian(const LagrangianX& x) {
  const Grid& g = x.grid();
  double mass = x.v_infinity() - x.V.bounded_left_tail();
  double span = g.empty() ? 1.0 : g.back() - g.front();
  std::vector<double> xs;
  std::vector<double> us;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double xi = x.y.value_at(i);
    double ui = x.U.value_at(i);
    if (!xs.empty() && xi - xs.back() <= 1e-13 * (1.0 + std::abs(xi))) {
      // The velocity spread a resolvable cell of this width can carry is
      // bounded through the quadratic slope identity; widths below one ulp
      // of the position are indistinguishable from that resolution.
      double width = std::max({xi - xs.back(), 0.0, 2.3e-16 * (1.0 + std::abs(xi))});
      double allowance =
          tol::value + 2.0 * std::sqrt(width * (1.0 + mass) * (1.0 + span));
      if (std::abs(ui - us.back()) > allowance) {
        throw InconsistentU("velocity varies across a collapsed cell");
      }
      continue;
    }
    xs.push_back(xi);
    us.push_back(ui);
  }
  PwLinear u = xs.empty() ? PwLinear::constant(x.U.bounded_eval(0.0))
                          : PwLinear::from_values(0, Grid(xs), us);
  Measure mu = pushforward(x.y, x.V.derivative());
  Measure nu = pushforward(x.y, x.H.derivative());
  return EulerianY{std::move(u), std::move(mu), std::move(nu), x.alpha};
}

}  // namespace

EulerianY to_eulerian(const LagrangianX& x) {
  ValidationReport rep = validate_lagrangian(x);
  if (!rep.valid()) {
    throw InvalidInput("state outside the admissible Lagrangian set:\n" + rep.str());
  }
  EulerianY y = build_eulerian(x);
  ValidationReport out = validate_eulerian(y);
  if (!out.valid()) {
    throw InvalidInput("mapped state failed Eulerian validation:\n" + out.str());
  }
  return y;
}

EulerianY to_eulerian_unchecked(const LagrangianX& x) {
  return build_eulerian(x);
}

std::optional<Relabelling> is_relabelling_of(const LagrangianX& x_a,
                                             const LagrangianX& x_b,
                                             std::string* diagnostic) {
  auto fail = [&](const std::string& why) -> std::optional<Relabelling> {
    if (diagnostic) *diagnostic = why;
    return std::nullopt;
  };
  if (alpha_sup_diff(x_a.alpha, x_b.alpha) > tol::value) {
    return fail("alpha functions differ");
  }
  PwLinear sum_a = x_a.y + x_a.H;
  PwLinear sum_b = x_b.y + x_b.H;
  PwLinear inv_a;
  try {
    inv_a = invert(sum_a);
  } catch (const NotInvertible&) {
    return fail("y + H is not invertible; no candidate exists");
  }
  Relabelling cand{compose(inv_a, sum_b)};
  std::vector<std::string> group = cand.group_violations();
  if (!group.empty()) {
    return fail("candidate map leaves the relabelling group: " + group.front());
  }
  struct Check {
    const char* name;
    const PwLinear& a;
    const PwLinear& b;
  };
  const Check checks[] = {{"y", x_a.y, x_b.y},
                          {"U", x_a.U, x_b.U},
                          {"H", x_a.H, x_b.H},
                          {"V", x_a.V, x_b.V}};
  for (const Check& c : checks) {
    double err = sup_norm_diff(compose(c.a, cand.f), c.b);
    if (err > tol::value) {
      return fail(std::string("component ") + c.name +
                  " does not match under the candidate relabelling (sup error " +
                  std::to_string(err) + ")");
    }
  }
  if (diagnostic) diagnostic->clear();
  return cand;
}

}  // namespace hs

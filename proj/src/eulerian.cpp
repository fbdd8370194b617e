#include "hs/eulerian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hs {

std::string ValidationReport::str() const {
  std::ostringstream os;
  for (const Violation& v : violations) {
    os << "violation: " << v.invariant << " at " << v.location
       << " (magnitude " << v.magnitude << ")\n";
  }
  for (const Violation& v : warnings) {
    os << "warning: " << v.invariant << " at " << v.location << " (magnitude "
       << v.magnitude << ")\n";
  }
  return os.str();
}

namespace {

std::string cell_label(const Grid& g, std::size_t i) {
  std::ostringstream os;
  if (g.empty()) {
    os << "(-inf, inf)";
  } else if (i == 0) {
    os << "(-inf, " << g.front() << ")";
  } else if (i == g.size()) {
    os << "(" << g.back() << ", inf)";
  } else {
    os << "(" << g[i - 1] << ", " << g[i] << ")";
  }
  return os.str();
}

std::string point_label(double x) {
  std::ostringstream os;
  os << "x = " << x;
  return os.str();
}

// Densities blow up like the inverse square of a vanishing characteristic
// slope while their rounding drift grows with the square of that blow-up,
// so equality checks need a band quadratic in the magnitudes involved.
double density_band(double a, double b) {
  double scale = 1.0 + std::abs(a) + std::abs(b);
  return tol::value * scale * scale;
}

bool density_close(double a, double b) {
  return std::abs(a - b) <= density_band(a, b);
}

bool density_leq(double a, double b) {
  return a <= b + density_band(a, b);
}

}  // namespace

ValidationReport validate_eulerian(const EulerianY& y, ValidateOptions opts) {
  ValidationReport rep;

  if (opts.check_alpha) {
    for (const std::string& msg : y.alpha.admissibility_violations()) {
      rep.violations.push_back({"alpha admissibility: " + msg, "alpha", 0.0});
    }
  }
  if (y.u.identity_coefficient() != 0) {
    rep.violations.push_back({"u must be bounded", "u", 0.0});
    return rep;
  }

  Grid g = common_refinement(
      {&y.u.grid(), &y.mu.density().grid, &y.nu.density().grid});
  PwConstant rho_mu = y.mu.density().refined(g);
  PwConstant rho_nu = y.nu.density().refined(g);
  PwConstant ux = y.u.derivative().refined(g);

  // mu <= nu, checked on densities and atoms separately.
  for (std::size_t i = 0; i <= g.size(); ++i) {
    if (!density_leq(rho_mu.cells[i], rho_nu.cells[i])) {
      rep.violations.push_back({"mu <= nu (density)", cell_label(g, i),
                                rho_mu.cells[i] - rho_nu.cells[i]});
    }
  }
  for (const Atom& a : y.mu.atoms()) {
    double nu_mass = y.nu.cumulative_right(a.x) - y.nu.cumulative_left(a.x);
    if (a.mass > nu_mass + tol::value) {
      rep.violations.push_back(
          {"mu <= nu (atom)", point_label(a.x), a.mass - nu_mass});
    }
  }

  // Absolutely continuous part of mu is exactly u_x^2 dx.
  for (std::size_t i = 0; i <= g.size(); ++i) {
    double want = ux.cells[i] * ux.cells[i];
    if (!density_close(rho_mu.cells[i], want)) {
      rep.violations.push_back({"mu_ac = u_x^2 dx", cell_label(g, i),
                                std::abs(rho_mu.cells[i] - want)});
    }
  }
  // mu_ac <= nu_ac, reported independently of mu <= nu.
  for (std::size_t i = 0; i <= g.size(); ++i) {
    if (!density_leq(rho_mu.cells[i], rho_nu.cells[i])) {
      rep.violations.push_back({"mu_ac <= nu_ac", cell_label(g, i),
                                rho_mu.cells[i] - rho_nu.cells[i]});
    }
  }

  if (!std::isfinite(y.mu.total_mass()) || !std::isfinite(y.nu.total_mass())) {
    rep.violations.push_back({"finite total mass", "measures", 0.0});
  }

  if (y.alpha.is_one()) {
    if (!y.mu.atoms().empty()) {
      rep.violations.push_back({"fully dissipative state admits no atoms in mu",
                                point_label(y.mu.atoms().front().x),
                                y.mu.atoms().front().mass});
    }
    for (std::size_t i = 0; i <= g.size(); ++i) {
      if (!density_close(rho_nu.cells[i], rho_mu.cells[i])) {
        rep.violations.push_back({"nu_ac = mu when alpha is one",
                                  cell_label(g, i),
                                  std::abs(rho_nu.cells[i] - rho_mu.cells[i])});
      }
    }
  } else {
    // d mu / d nu > 0 wherever nu > 0.
    for (std::size_t i = 0; i <= g.size(); ++i) {
      if (rho_nu.cells[i] > tol::value && rho_mu.cells[i] <= 0.0) {
        rep.violations.push_back(
            {"dmu/dnu > 0 on nu-support (density)", cell_label(g, i), 0.0});
      }
    }
    for (const Atom& a : y.nu.atoms()) {
      double mu_mass = y.mu.cumulative_right(a.x) - y.mu.cumulative_left(a.x);
      if (mu_mass <= 0.0) {
        rep.violations.push_back(
            {"dmu/dnu > 0 on nu-support (atom)", point_label(a.x), a.mass});
      }
    }
    // Density ratio is one wherever u_x < 0.
    for (std::size_t i = 0; i <= g.size(); ++i) {
      if (ux.cells[i] < 0.0 &&
          !density_close(rho_mu.cells[i], rho_nu.cells[i])) {
        rep.violations.push_back({"dmu_ac/dnu_ac = 1 where u_x < 0",
                                  cell_label(g, i),
                                  std::abs(rho_mu.cells[i] - rho_nu.cells[i])});
      }
    }
  }

  return rep;
}

ValidationReport validate_eulerian_z(const EulerianZ& z, ValidateOptions opts) {
  ValidationReport rep;
  if (opts.check_alpha) {
    for (const std::string& msg : z.alpha.admissibility_violations()) {
      rep.violations.push_back({"alpha admissibility: " + msg, "alpha", 0.0});
    }
  }
  if (z.u.identity_coefficient() != 0) {
    rep.violations.push_back({"u must be bounded", "u", 0.0});
    return rep;
  }
  Grid g = common_refinement(z.u.grid(), z.mu.density().grid);
  PwConstant rho_mu = z.mu.density().refined(g);
  PwConstant ux = z.u.derivative().refined(g);
  for (std::size_t i = 0; i <= g.size(); ++i) {
    double want = ux.cells[i] * ux.cells[i];
    if (!density_close(rho_mu.cells[i], want)) {
      rep.violations.push_back({"mu_ac = u_x^2 dx", cell_label(g, i),
                                std::abs(rho_mu.cells[i] - want)});
    }
  }
  if (z.alpha.is_one() && !z.mu.atoms().empty()) {
    rep.violations.push_back({"fully dissipative state admits no atoms in mu",
                              point_label(z.mu.atoms().front().x),
                              z.mu.atoms().front().mass});
  }
  return rep;
}

RadonNikodym radon_nikodym(const Measure& mu, const Measure& nu,
                           const Grid& grid) {
  Grid g = common_refinement(
      {&grid, &mu.density().grid, &nu.density().grid});
  PwConstant rho_mu = mu.density().refined(g);
  PwConstant rho_nu = nu.density().refined(g);
  std::vector<double> ratio(g.size() + 1, 0.0);
  for (std::size_t i = 0; i <= g.size(); ++i) {
    double m = rho_mu.cells[i], n = rho_nu.cells[i];
    if (m > n + tol::value) {
      throw DominanceViolation("mu density exceeds nu density");
    }
    ratio[i] = (n > 0.0) ? m / n : 0.0;
  }
  std::vector<std::pair<double, double>> atom_ratio;
  for (const Atom& a : mu.atoms()) {
    double nu_mass = nu.cumulative_right(a.x) - nu.cumulative_left(a.x);
    if (a.mass > nu_mass + tol::value) {
      throw DominanceViolation("mu atom exceeds nu atom");
    }
    atom_ratio.emplace_back(a.x, a.mass / nu_mass);
  }
  for (const Atom& a : nu.atoms()) {
    double mu_mass = mu.cumulative_right(a.x) - mu.cumulative_left(a.x);
    if (mu_mass == 0.0) atom_ratio.emplace_back(a.x, 0.0);
  }
  std::sort(atom_ratio.begin(), atom_ratio.end());
  return RadonNikodym{PwConstant(std::move(g), std::move(ratio)),
                      std::move(atom_ratio)};
}

}  // namespace hs

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "hs/eulerian.hpp"
#include "hs/lagrangian.hpp"
#include "hs/transform.hpp"

namespace hstest {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int pick(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Strictly increasing abscissae with a minimum gap.
inline std::vector<double> random_knots(Rng& rng, int count, double lo,
                                        double hi, double min_gap = 0.15) {
  std::vector<double> xs;
  for (int i = 0; i < count; ++i) xs.push_back(uniform(rng, lo, hi));
  std::sort(xs.begin(), xs.end());
  std::vector<double> out;
  for (double x : xs) {
    if (out.empty() || x - out.back() >= min_gap) out.push_back(x);
  }
  if (out.size() < 2) out = {lo, hi};
  return out;
}

inline hs::AlphaFn random_alpha(Rng& rng, double max_lip = 2.0,
                                bool allow_one = true) {
  int kind = pick(rng, 0, allow_one ? 4 : 3);
  if (kind == 0 && allow_one) return hs::AlphaFn::one();
  if (kind <= 2) return hs::AlphaFn::constant(uniform(rng, 0.0, 0.95));
  std::vector<double> xs = random_knots(rng, pick(rng, 2, 4), -4.0, 4.0, 0.5);
  std::vector<double> vs;
  double prev = uniform(rng, 0.0, 0.9);
  vs.push_back(prev);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    double gap = xs[i] - xs[i - 1];
    double reach = std::min(0.9, max_lip * gap);
    double v = prev + uniform(rng, -reach, reach);
    v = std::clamp(v, 0.0, 0.9);
    vs.push_back(v);
    prev = v;
  }
  hs::PwLinear f = hs::PwLinear::from_values(0, hs::Grid(xs), vs);
  double lip = hs::AlphaFn::pw(f, 0.0).max_abs_slope();
  return hs::AlphaFn::pw(f, lip);
}

/// Random admissible Eulerian state with bounded knot count and total energy.
inline hs::EulerianY random_eulerian(Rng& rng, int max_knots = 10,
                                     double mass_budget = 4.5,
                                     const hs::AlphaFn* fixed_alpha = nullptr) {
  hs::AlphaFn alpha = fixed_alpha ? *fixed_alpha : random_alpha(rng);
  std::vector<double> xs = random_knots(rng, pick(rng, 3, max_knots), -3.5, 3.5);
  const std::size_t n = xs.size();
  std::vector<double> slopes(n - 1);
  for (double& s : slopes) {
    s = uniform(rng, -0.8, 0.8);
    if (std::abs(s) < 0.1) s = 0.0;
  }
  std::vector<hs::Atom> mu_atoms;
  if (!alpha.is_one()) {
    int na = pick(rng, 0, 3);
    for (int i = 0; i < na; ++i) {
      double pos = uniform(rng, xs.front() - 0.5, xs.back() + 0.5);
      bool clash = false;
      for (const hs::Atom& a : mu_atoms) {
        if (std::abs(a.x - pos) < 0.05) clash = true;
      }
      if (!clash) mu_atoms.push_back({pos, uniform(rng, 0.05, 0.7)});
    }
  }
  double raw_mass = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    raw_mass += slopes[i] * slopes[i] * (xs[i + 1] - xs[i]);
  }
  for (const hs::Atom& a : mu_atoms) raw_mass += a.mass;
  double scale = 1.0;
  if (raw_mass > mass_budget) scale = std::sqrt(mass_budget / raw_mass);
  for (double& s : slopes) s *= scale;
  for (hs::Atom& a : mu_atoms) a.mass *= scale * scale;

  std::vector<double> uvals(n);
  uvals[0] = uniform(rng, -0.5, 0.5);
  for (std::size_t i = 1; i < n; ++i) {
    uvals[i] = uvals[i - 1] + slopes[i - 1] * (xs[i] - xs[i - 1]);
  }
  hs::PwLinear u = hs::PwLinear::from_values(0, hs::Grid(xs), uvals);

  std::vector<double> mu_cells(n + 1, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    mu_cells[i + 1] = slopes[i] * slopes[i];
  }
  hs::Measure mu(hs::PwConstant(hs::Grid(xs), mu_cells), mu_atoms);

  std::vector<double> nu_cells = mu_cells;
  std::vector<hs::Atom> nu_atoms = mu_atoms;
  if (alpha.is_one()) {
    // nu may only add atoms on top of the plain energy density.
    int na = pick(rng, 0, 2);
    for (int i = 0; i < na; ++i) {
      double pos = uniform(rng, xs.front() - 0.5, xs.back() + 0.5);
      bool clash = false;
      for (const hs::Atom& a : nu_atoms) {
        if (std::abs(a.x - pos) < 0.05) clash = true;
      }
      if (!clash) nu_atoms.push_back({pos, uniform(rng, 0.05, 0.7)});
    }
  } else {
    // Extra density only where the slope is positive; extra atom mass only on
    // top of existing atoms.
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (slopes[i] > 0.0) {
        nu_cells[i + 1] += uniform(rng, 0.0, 1.0) * slopes[i] * slopes[i];
      }
    }
    for (hs::Atom& a : nu_atoms) a.mass *= 1.0 + uniform(rng, 0.0, 1.5);
  }
  hs::Measure nu(hs::PwConstant(hs::Grid(xs), nu_cells), nu_atoms);
  return hs::EulerianY{std::move(u), std::move(mu), std::move(nu),
                       std::move(alpha)};
}

inline hs::Relabelling random_relabelling(Rng& rng, double lo, double hi,
                                          int interior = 3) {
  std::vector<double> xs = random_knots(rng, interior + 2, lo, hi, 0.3);
  std::vector<double> vals(xs.size());
  double v = xs.front() + uniform(rng, -0.4, 0.4);
  vals[0] = v;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    v += (xs[i] - xs[i - 1]) * std::exp(uniform(rng, -0.7, 0.7));
    vals[i] = v;
  }
  return hs::Relabelling::from(
      hs::PwLinear::from_values(1, hs::Grid(xs), vals));
}

/// Midpoint quadrature of an arbitrary callable.
inline double quadrature(const std::function<double(double)>& f, double lo,
                         double hi, int n) {
  double total = 0.0;
  double h = (hi - lo) / n;
  for (int i = 0; i < n; ++i) total += f(lo + (i + 0.5) * h);
  return total * h;
}

inline double max_abs_on_grid(const std::function<double(double)>& f, double lo,
                              double hi, int n) {
  double best = 0.0;
  for (int i = 0; i <= n; ++i) {
    best = std::max(best, std::abs(f(lo + (hi - lo) * i / n)));
  }
  return best;
}

}  // namespace hstest

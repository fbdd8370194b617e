#include "hs/golden.hpp"

namespace hs::golden {

namespace {

Measure density_measure(std::vector<double> bps, std::vector<double> interior,
                        std::vector<Atom> atoms = {}) {
  std::vector<double> cells;
  cells.push_back(0.0);
  cells.insert(cells.end(), interior.begin(), interior.end());
  cells.push_back(0.0);
  return Measure(PwConstant(Grid(std::move(bps)), std::move(cells)),
                 std::move(atoms));
}

}  // namespace

EulerianY triangle_initial() {
  PwLinear u = PwLinear::from_values(0, Grid({-1.0, 0.0, 1.0}), {0.0, 1.0, 0.0});
  Measure m = density_measure({-1.0, 1.0}, {1.0});
  return EulerianY{u, m, m, AlphaFn::constant(0.5)};
}

double triangle_u(double x, double t) {
  if (t < 2.0) {
    if (x <= -0.25 * t * t - 1.0) return -0.5 * t;
    if (x <= t) return (2.0 - t + 2.0 * x) / (t + 2.0);
    if (x <= 0.25 * t * t + 1.0) return (-2.0 - t + 2.0 * x) / (t - 2.0);
    return 0.5 * t;
  }
  if (x <= -3.0 / 16.0 * t * t - 0.25 * t - 0.75) return -0.25 - 0.375 * t;
  if (x <= t * t / 16.0 + 0.75 * t + 0.25) {
    return (2.0 - t + 4.0 * x) / (2.0 * (t + 2.0));
  }
  if (x <= 3.0 / 16.0 * t * t + 0.25 * t + 0.75) {
    return (-2.0 - t + 2.0 * x) / (t - 2.0);
  }
  return 0.25 + 0.375 * t;
}

AlphaFn plateau_alpha_const() { return AlphaFn::constant(1.0 / 3.0); }

AlphaFn plateau_alpha_bump() {
  PwLinear f = PwLinear::from_values(0, Grid({-1.0, 0.0, 1.0}),
                                     {1.0 / 3.0, 0.5, 1.0 / 3.0});
  return AlphaFn::pw(f, 1.0 / 6.0);
}

EulerianY plateau_initial(const AlphaFn& alpha) {
  PwLinear u = PwLinear::from_values(0, Grid({-2.0, -1.0, 1.0, 2.0}),
                                     {1.0, 0.0, 0.0, -1.0});
  Measure m = density_measure({-2.0, -1.0, 1.0, 2.0}, {1.0, 0.0, 1.0});
  return EulerianY{u, m, m, alpha};
}

LagrangianX plateau_initial_lagrangian(const AlphaFn& alpha) {
  Grid g({-2.0, 0.0, 2.0, 4.0});
  PwLinear y = PwLinear::from_values(1, g, {-2.0, -1.0, 1.0, 2.0});
  PwLinear u = PwLinear::from_values(0, g, {1.0, 0.0, 0.0, -1.0});
  PwLinear h = PwLinear::from_values(0, g, {0.0, 1.0, 1.0, 2.0});
  return LagrangianX{y, u, h, h, alpha};
}

double plateau_y(double xi, double t) {
  if (t < 2.0) {
    if (xi <= -2.0) return t - 0.25 * t * t + xi;
    if (xi <= 0.0) return -1.0 + 0.125 * (t - 2.0) * (t - 2.0) * xi;
    if (xi <= 2.0) return -1.0 + xi;
    if (xi <= 4.0) return t - 0.25 * t * t + 0.125 * (t - 2.0) * (t - 2.0) * xi;
    return -2.0 - t + 0.25 * t * t + xi;
  }
  if (xi <= -2.0) return 1.0 / 3.0 + 2.0 / 3.0 * t - t * t / 6.0 + xi;
  if (xi <= 0.0) return -1.0 + (t - 2.0) * (t - 2.0) / 12.0 * xi;
  if (xi <= 2.0) return -1.0 + xi;
  if (xi <= 4.0) {
    return 1.0 / 3.0 + 2.0 / 3.0 * t - t * t / 6.0 +
           (t - 2.0) * (t - 2.0) / 12.0 * xi;
  }
  return -7.0 / 3.0 - 2.0 / 3.0 * t + t * t / 6.0 + xi;
}

double plateau_velocity(double xi, double t) {
  if (t < 2.0) {
    if (xi <= -2.0) return 1.0 - 0.5 * t;
    if (xi <= 0.0) return 0.25 * (t - 2.0) * xi;
    if (xi <= 2.0) return 0.0;
    if (xi <= 4.0) return 1.0 - 0.5 * t + 0.25 * (t - 2.0) * xi;
    return -1.0 + 0.5 * t;
  }
  if (xi <= -2.0) return 2.0 / 3.0 - t / 3.0;
  if (xi <= 0.0) return (t - 2.0) / 6.0 * xi;
  if (xi <= 2.0) return 0.0;
  if (xi <= 4.0) return 2.0 / 3.0 - t / 3.0 + (t - 2.0) / 6.0 * xi;
  return -2.0 / 3.0 + t / 3.0;
}

double plateau_energy(double xi, double t) {
  if (t < 2.0) {
    if (xi <= -2.0) return 0.0;
    if (xi <= 0.0) return 1.0 + 0.5 * xi;
    if (xi <= 2.0) return 1.0;
    if (xi <= 4.0) return 0.5 * xi;
    return 2.0;
  }
  if (xi <= -2.0) return 0.0;
  if (xi <= 0.0) return 2.0 / 3.0 + xi / 3.0;
  if (xi <= 2.0) return 2.0 / 3.0;
  if (xi <= 4.0) return xi / 3.0;
  return 4.0 / 3.0;
}

EulerianY mixed_initial() {
  PwLinear u = PwLinear::from_values(0, Grid({0.0, 0.5, 1.0}),
                                     {1.0, 0.5, -0.5});
  Measure m = density_measure({0.0, 0.5, 1.0}, {1.0, 4.0});
  PwLinear af = PwLinear::from_values(0, Grid({13.0 / 16.0, 1.0}), {1.0, 0.5});
  return EulerianY{u, m, m, AlphaFn::pw(af, 8.0 / 3.0)};
}

double mixed_y(double xi, double t) {
  if (t < 1.0) {
    if (xi <= 0.0) return -5.0 / 16.0 * t * t + t + xi;
    if (xi <= 1.0) return -5.0 / 16.0 * t * t + t + 0.125 * (t - 2.0) * (t - 2.0) * xi;
    if (xi <= 3.5) {
      return 0.3 + 0.9 * t - 31.0 / 80.0 * t * t + 0.2 * (t - 1.0) * (t - 1.0) * xi;
    }
    return -2.5 - 0.5 * t + 5.0 / 16.0 * t * t + xi;
  }
  if (t < 2.0) {
    if (xi <= 0.0) return 0.25 + 0.5 * t - t * t / 16.0 + xi;
    if (xi <= 1.0) return 0.25 + 0.5 * t - t * t / 16.0 + 0.125 * (t - 2.0) * (t - 2.0) * xi;
    if (xi <= 3.5) return 0.75 + t * t / 16.0;
    return -2.75 + t * t / 16.0 + xi;
  }
  if (xi <= 0.0) return 0.375 + 0.375 * t - t * t / 32.0 + xi;
  if (xi <= 1.0) return 0.375 + 0.375 * t - t * t / 32.0 + (t - 2.0) * (t - 2.0) / 16.0 * xi;
  if (xi <= 3.5) return 0.625 + 0.125 * t + t * t / 32.0;
  return -2.875 + 0.125 * t + t * t / 32.0 + xi;
}

double mixed_velocity(double xi, double t) {
  if (t < 1.0) {
    if (xi <= 0.0) return 1.0 - 0.625 * t;
    if (xi <= 1.0) return 1.0 - 0.625 * t + 0.25 * (t - 2.0) * xi;
    if (xi <= 3.5) return 0.4 * (t - 1.0) * xi + 0.9 - 0.775 * t;
    return -0.5 + 0.625 * t;
  }
  if (t < 2.0) {
    if (xi <= 0.0) return 0.5 - 0.125 * t;
    if (xi <= 1.0) return 0.5 - 0.125 * t + 0.25 * (t - 2.0) * xi;
    return 0.125 * t;
  }
  if (xi <= 0.0) return 0.375 - t / 16.0;
  if (xi <= 1.0) return 0.375 - t / 16.0 + 0.125 * (t - 2.0) * xi;
  return 0.125 + t / 16.0;
}

double mixed_energy(double xi, double t) {
  if (t < 1.0) {
    if (xi <= 0.0) return 0.0;
    if (xi <= 1.0) return 0.5 * xi;
    if (xi <= 3.5) return -0.3 + 0.8 * xi;
    return 2.5;
  }
  if (t < 2.0) {
    if (xi <= 0.0) return 0.0;
    if (xi <= 1.0) return 0.5 * xi;
    return 0.5;
  }
  if (xi <= 0.0) return 0.0;
  if (xi <= 1.0) return 0.25 * xi;
  return 0.25;
}

LagrangianX mixed_roundtrip_state() {
  Grid g({1.0, 3.5});
  PwLinear y = PwLinear::from_values(1, g, {1.0, 1.0});
  PwLinear u = PwLinear::constant(0.25).refined(g);
  PwLinear h = PwLinear::from_values(0, g, {0.0, 2.5});
  PwLinear v = PwLinear::from_values(0, g, {0.0, 0.25});
  return LagrangianX{y, u, h, v, mixed_initial().alpha};
}

EulerianY dummy_invariance_initial_a() {
  PwLinear u = PwLinear::from_values(0, Grid({-1.0, 0.0, 1.0}),
                                     {1.0, 0.0, 1.0});
  Measure m = density_measure({-1.0, 1.0}, {1.0}, {{-0.5, 1.0}, {0.5, 1.0}});
  return EulerianY{u, m, m, AlphaFn::constant(0.5)};
}

EulerianY dummy_invariance_initial_b() {
  EulerianY a = dummy_invariance_initial_a();
  Measure nu = density_measure({-1.0, 0.0, 1.0}, {1.0, 4.0},
                               {{-0.5, 1.0}, {0.5, 2.0}});
  return EulerianY{a.u, a.mu, nu, a.alpha};
}

LagrangianX dummy_invariance_x0_a() {
  Grid g({-1.0, 0.0, 1.0, 2.0, 3.0, 4.0, 5.0});
  PwLinear y = PwLinear::from_values(
      1, g, {-1.0, -0.5, -0.5, 0.0, 0.5, 0.5, 1.0});
  PwLinear u = PwLinear::from_values(
      0, g, {1.0, 0.5, 0.5, 0.0, 0.5, 0.5, 1.0});
  PwLinear h = PwLinear::from_values(
      0, g, {0.0, 0.5, 1.5, 2.0, 2.5, 3.5, 4.0});
  return LagrangianX{y, u, h, h, AlphaFn::constant(0.5)};
}

LagrangianX dummy_invariance_x0_b() {
  Grid g({-1.0, 0.0, 1.0, 2.0, 4.5, 6.5, 9.0});
  PwLinear y = PwLinear::from_values(
      1, g, {-1.0, -0.5, -0.5, 0.0, 0.5, 0.5, 1.0});
  PwLinear u = PwLinear::from_values(
      0, g, {1.0, 0.5, 0.5, 0.0, 0.5, 0.5, 1.0});
  PwLinear h = PwLinear::from_values(
      0, g, {0.0, 0.5, 1.5, 2.0, 4.0, 6.0, 8.0});
  PwLinear v = PwLinear::from_values(
      0, g, {0.0, 0.5, 1.5, 2.0, 2.5, 3.5, 4.0});
  return LagrangianX{y, u, h, v, AlphaFn::constant(0.5)};
}

double dummy_invariance_energy_a(double xi, double t) {
  if (t < 2.0) {
    if (xi <= -1.0) return 0.0;
    if (xi <= 0.0) return 0.5 + 0.5 * xi;
    if (xi <= 1.0) return 0.5 + xi;
    if (xi <= 3.0) return 1.0 + 0.5 * xi;
    if (xi <= 4.0) return -0.5 + xi;
    if (xi <= 5.0) return 1.5 + 0.5 * xi;
    return 4.0;
  }
  if (xi <= -1.0) return 0.0;
  if (xi <= 0.0) return 0.25 + 0.25 * xi;
  if (xi <= 1.0) return 0.25 + xi;
  if (xi <= 2.0) return 1.0 + 0.25 * xi;
  if (xi <= 3.0) return 0.5 + 0.5 * xi;
  if (xi <= 4.0) return -1.0 + xi;
  if (xi <= 5.0) return 1.0 + 0.5 * xi;
  return 3.5;
}

double dummy_invariance_energy_b(double xi, double t) {
  if (t < 2.0) {
    if (xi <= -1.0) return 0.0;
    if (xi <= 0.0) return 0.5 + 0.5 * xi;
    if (xi <= 1.0) return 0.5 + xi;
    if (xi <= 2.0) return 1.0 + 0.5 * xi;
    if (xi <= 4.5) return 1.6 + 0.2 * xi;
    if (xi <= 6.5) return 0.25 + 0.5 * xi;
    if (xi <= 9.0) return 2.2 + 0.2 * xi;
    return 4.0;
  }
  if (xi <= -1.0) return 0.0;
  if (xi <= 0.0) return 0.25 + 0.25 * xi;
  if (xi <= 1.0) return 0.25 + xi;
  if (xi <= 2.0) return 1.0 + 0.25 * xi;
  if (xi <= 4.5) return 1.1 + 0.2 * xi;
  if (xi <= 6.5) return -0.25 + 0.5 * xi;
  if (xi <= 9.0) return 1.7 + 0.2 * xi;
  return 3.5;
}

double dummy_invariance_u(double x, double t) {
  if (t < 2.0) {
    if (x <= -1.0 + t - 0.5 * t * t) return 1.0 - t;
    if (x <= -0.5 + 0.5 * t - 0.375 * t * t) return (t + 2.0 * x) / (t - 2.0);
    if (x <= -0.5 + 0.5 * t - 0.125 * t * t) return (2.0 - t + 4.0 * x) / (2.0 * t);
    if (x <= 0.0) return 2.0 * x / (t - 2.0);
    if (x <= 0.5 + 0.5 * t + 0.125 * t * t) return 2.0 * x / (t + 2.0);
    if (x <= 0.5 + 0.5 * t + 0.375 * t * t) return (-2.0 - t + 4.0 * x) / (2.0 * t);
    if (x <= 1.0 + t + 0.5 * t * t) return (t + 2.0 * x) / (t + 2.0);
    return 1.0 + t;
  }
  if (x <= -0.75 + 0.75 * t - 7.0 / 16.0 * t * t) return 0.75 - 0.875 * t;
  if (x <= -0.5 + 0.5 * t - 0.375 * t * t) return (t + 2.0 * x) / (t - 2.0);
  if (x <= -0.5 + 0.5 * t - 0.125 * t * t) return (2.0 - t + 4.0 * x) / (2.0 * t);
  if (x <= -0.25 + 0.25 * t - t * t / 16.0) return 2.0 * x / (t - 2.0);
  if (x <= 0.25 + 0.75 * t + t * t / 16.0) {
    return (2.0 - t + 4.0 * x) / (2.0 * (t + 2.0));
  }
  if (x <= 0.25 + 0.75 * t + 5.0 / 16.0 * t * t) {
    return (-2.0 - 3.0 * t + 8.0 * x) / (4.0 * t);
  }
  if (x <= 0.75 + 1.25 * t + 7.0 / 16.0 * t * t) {
    return (2.0 + t + 4.0 * x) / (2.0 * (t + 2.0));
  }
  return 1.25 + 0.875 * t;
}

}  // namespace hs::golden

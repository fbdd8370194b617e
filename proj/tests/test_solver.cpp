#include <doctest.h>

#include <cmath>
#include <limits>

#include "hs/golden.hpp"
#include "hs/solver.hpp"
#include "support.hpp"

using namespace hs;

namespace {

double tau_at(const BreakingSchedule& s, const Grid& g, double xi) {
  return s.tau[g.cell_index(xi)];
}

}  // namespace

TEST_CASE("breaking schedules") {
  SUBCASE("plateau study") {
    LagrangianX x = golden::plateau_initial_lagrangian(golden::plateau_alpha_const());
    BreakingSchedule s = breaking_times(x);
    CHECK(tau_at(s, x.grid(), -1.0) == doctest::Approx(2.0));
    CHECK(tau_at(s, x.grid(), 3.0) == doctest::Approx(2.0));
    CHECK(std::isinf(tau_at(s, x.grid(), -3.0)));
    CHECK(std::isinf(tau_at(s, x.grid(), 1.0)));
    CHECK(std::isinf(tau_at(s, x.grid(), 5.0)));
  }

  SUBCASE("mixed-dissipation study") {
    LagrangianX x = to_lagrangian_unchecked(golden::mixed_initial());
    BreakingSchedule s = breaking_times(x);
    CHECK(tau_at(s, x.grid(), 0.5) == doctest::Approx(2.0));
    CHECK(tau_at(s, x.grid(), 2.0) == doctest::Approx(1.0));
    CHECK(std::isinf(tau_at(s, x.grid(), -1.0)));
    CHECK(std::isinf(tau_at(s, x.grid(), 4.0)));
  }

  SUBCASE("positive velocity slopes never break") {
    Grid g({0.0, 1.0});
    LagrangianX x{PwLinear::from_values(1, g, {0.0, 1.0}),
                  PwLinear::from_values(0, g, {0.0, 1.0}),
                  PwLinear::from_values(0, g, {0.0, 1.0}),
                  PwLinear::from_values(0, g, {0.0, 1.0}),
                  AlphaFn::constant(0.0)};
    BreakingSchedule s = breaking_times(x);
    for (double t : s.tau) CHECK(std::isinf(t));
  }
}

TEST_CASE("evolution of the golden studies") {
  SUBCASE("plateau: energy drop and closed forms") {
    LagrangianX x0 = golden::plateau_initial_lagrangian(golden::plateau_alpha_const());
    Trajectory traj = evolve(x0, 4.0);
    REQUIRE(traj.event_times().size() == 1);
    CHECK(traj.event_times()[0] == doctest::Approx(2.0));
    CHECK(traj.v_infinity(1.0) == doctest::Approx(2.0));
    CHECK(traj.v_infinity(2.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    for (double t : {0.5, 1.0, 2.0, 3.5}) {
      LagrangianX xt = traj.state_at(t);
      for (double xi = -5.0; xi <= 7.0; xi += 0.37) {
        CHECK(xt.y.eval(xi) ==
              doctest::Approx(golden::plateau_y(xi, t)).epsilon(1e-12));
        CHECK(xt.U.eval(xi) ==
              doctest::Approx(golden::plateau_velocity(xi, t)).epsilon(1e-12));
        CHECK(xt.V.eval(xi) ==
              doctest::Approx(golden::plateau_energy(xi, t)).epsilon(1e-12));
      }
    }
  }

  SUBCASE("triangle: reconstructed velocity field") {
    Trajectory traj = evolve(to_lagrangian(golden::triangle_initial()), 3.0);
    EulerianY y3 = to_eulerian_unchecked(traj.state_at(3.0));
    for (double x = -4.0; x <= 6.0; x += 0.31) {
      CHECK(y3.u.eval(x) == doctest::Approx(golden::triangle_u(x, 3.0)).epsilon(1e-12));
    }
  }

  SUBCASE("zero horizon returns the initial state") {
    LagrangianX x0 = golden::plateau_initial_lagrangian(golden::plateau_alpha_const());
    Trajectory traj = evolve(x0, 0.0);
    CHECK(traj.event_times().empty());
    LagrangianX xt = traj.state_at(0.0);
    CHECK(sup_norm_diff(xt.y, x0.y) == 0.0);
    CHECK(sup_norm_diff(xt.V, x0.V) == 0.0);
    CHECK_THROWS_AS(traj.state_at(1.0), OutOfHorizon);
  }

  SUBCASE("dummy-measure pair: both retained energies match their forms") {
    Trajectory ta = evolve(golden::dummy_invariance_x0_a(), 3.0);
    Trajectory tb = evolve(golden::dummy_invariance_x0_b(), 3.0);
    for (double t : {1.0, 2.5}) {
      LagrangianX xa = ta.state_at(t);
      LagrangianX xb = tb.state_at(t);
      for (double xi = -3.0; xi <= 11.0; xi += 0.41) {
        CHECK(xa.V.eval(xi) ==
              doctest::Approx(golden::dummy_invariance_energy_a(xi, t)).epsilon(1e-12));
        CHECK(xb.V.eval(xi) ==
              doctest::Approx(golden::dummy_invariance_energy_b(xi, t)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("state evaluation") {
  LagrangianX x0 = golden::plateau_initial_lagrangian(golden::plateau_alpha_const());
  Trajectory traj = evolve(x0, 3.0);
  CHECK(traj.state_at(1.0).y.eval(-2.0) == doctest::Approx(-1.25).epsilon(1e-14));
  LagrangianX at0 = traj.state_at(0.0);
  CHECK(sup_norm_diff(at0.U, x0.U) == 0.0);

  Trajectory mixed = evolve(to_lagrangian_unchecked(golden::mixed_initial()), 3.0);
  CHECK(mixed.state_at(1.5).U.eval(-1.0) == doctest::Approx(0.3125).epsilon(1e-14));
}

TEST_CASE("Eulerian semigroup") {
  SUBCASE("triangle: atom appears exactly at the breaking time") {
    EulerianY y0 = golden::triangle_initial();
    std::vector<EulerianY> states = evolve_eulerian(y0, {0.0, 2.0, 2.5});
    CHECK(sup_norm_diff(states[0].u, y0.u) <= 1e-13);
    CHECK(cumulative_sup_diff(states[0].mu, y0.mu) <= 1e-13);
    REQUIRE(states[1].mu.atoms().size() == 1);
    CHECK(states[1].mu.atoms()[0].x == doctest::Approx(2.0));
    CHECK(states[1].mu.atoms()[0].mass == doctest::Approx(0.5));
    CHECK(states[2].mu.atoms().empty());
    CHECK(states[1].mu.total_mass() == doctest::Approx(1.5).epsilon(1e-13));
    CHECK(states[2].mu.total_mass() == doctest::Approx(1.5).epsilon(1e-13));
  }

  SUBCASE("mixed-dissipation case: all mass sits in one atom at t = 2") {
    Trajectory traj = evolve(to_lagrangian_unchecked(golden::mixed_initial()), 2.0);
    EulerianY y2 = to_eulerian_unchecked(traj.state_at(2.0));
    CHECK(y2.mu.cumulative_left(1.0) == doctest::Approx(0.0));
    CHECK(y2.mu.cumulative_right(1.0) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(y2.mu.cumulative_left(5.0) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(y2.nu.cumulative_right(1.0) == doctest::Approx(2.5).epsilon(1e-13));
    CHECK(sup_norm_diff(y2.u, PwLinear::constant(0.25)) <= 1e-13);
  }

  SUBCASE("dominating measure mass is conserved") {
    hstest::Rng rng(11001);
    for (int trial = 0; trial < 8; ++trial) {
      EulerianY y0 = hstest::random_eulerian(rng);
      double mass0 = y0.nu.total_mass();
      for (const EulerianY& yt : evolve_eulerian(y0, {0.5, 1.5, 3.0})) {
        CHECK(yt.nu.total_mass() == doctest::Approx(mass0).epsilon(1e-10));
      }
    }
  }

  SUBCASE("evolved states stay admissible") {
    hstest::Rng rng(11002);
    for (int trial = 0; trial < 8; ++trial) {
      EulerianY y0 = hstest::random_eulerian(rng);
      for (const EulerianY& yt : evolve_eulerian(y0, {0.7, 2.1})) {
        ValidationReport rep = validate_eulerian(yt);
        INFO(rep.str());
        CHECK(rep.valid());
      }
    }
  }
}

TEST_CASE("conserved quantities along trajectories") {
  hstest::Rng rng(11003);
  for (int trial = 0; trial < 10; ++trial) {
    LagrangianX x0 = to_lagrangian(hstest::random_eulerian(rng));
    Trajectory traj = evolve(x0, 4.0);
    double vinf_prev = std::numeric_limits<double>::infinity();
    for (double t : {0.0, 0.9, 1.7, 2.6, 4.0}) {
      LagrangianX xt = traj.state_at(t);
      // The conservative identity between the slopes.
      PwConstant yd = xt.y.derivative();
      PwConstant ud = xt.U.derivative();
      PwConstant vd = xt.V.derivative();
      for (std::size_t i = 0; i < yd.cells.size(); ++i) {
        double residual = yd.cells[i] * vd.cells[i] - ud.cells[i] * ud.cells[i];
        CHECK(std::abs(residual) <= 1e-9 * (1.0 + std::abs(vd.cells[i])));
      }
      CHECK(sup_norm_diff(xt.H, x0.H) <= 1e-12);
      double vinf = traj.v_infinity(t);
      CHECK(vinf <= vinf_prev + 1e-12);
      vinf_prev = vinf;
      ValidationReport rep = validate_lagrangian(xt);
      INFO(rep.str());
      CHECK(rep.valid());
    }
  }
}

TEST_CASE("solution operator commutes with relabelling") {
  hstest::Rng rng(11004);
  for (int trial = 0; trial < 6; ++trial) {
    LagrangianX x0 = to_lagrangian(hstest::random_eulerian(rng));
    Relabelling f = hstest::random_relabelling(rng, -5.0, 5.0);
    Trajectory direct = evolve(relabel(x0, f), 2.0);
    Trajectory base = evolve(x0, 2.0);
    for (double t : {1.0, 2.0}) {
      LagrangianX lhs = direct.state_at(t);
      LagrangianX rhs = relabel(base.state_at(t), f);
      CHECK(sup_norm_diff(lhs.y, rhs.y) <= 1e-9);
      CHECK(sup_norm_diff(lhs.U, rhs.U) <= 1e-9);
      CHECK(sup_norm_diff(lhs.H, rhs.H) <= 1e-9);
      CHECK(sup_norm_diff(lhs.V, rhs.V) <= 1e-9);
    }
  }
}

TEST_CASE("integral growth estimates along pairs of trajectories") {
  // Sup and slope differences grow no faster than the time integrals of the
  // coupled quantities; checked by trapezoid sums on a fine time grid.
  hstest::Rng rng(11005);
  for (int trial = 0; trial < 4; ++trial) {
    Trajectory ta = evolve(to_lagrangian(hstest::random_eulerian(rng)), 2.0);
    Trajectory tb = evolve(to_lagrangian(hstest::random_eulerian(rng)), 2.0);
    const int steps = 1000;
    const double horizon = 2.0;
    double int_sup_u = 0.0, int_l1_v = 0.0, int_l2_u_slope = 0.0, int_l2_v = 0.0;
    double prev_sup_u = 0.0, prev_l1_v = 0.0, prev_l2_us = 0.0, prev_l2_v = 0.0;
    LagrangianX a0 = ta.state_at(0.0), b0 = tb.state_at(0.0);
    double sup_y0 = sup_norm_diff(a0.y, b0.y);
    double sup_u0 = sup_norm_diff(a0.U, b0.U);
    double l2_ys0 = l2_norm((a0.y - b0.y).derivative());
    double l2_us0 = l2_norm((a0.U - b0.U).derivative());
    for (int k = 0; k <= steps; ++k) {
      double t = horizon * k / steps;
      LagrangianX at = ta.state_at(t), bt = tb.state_at(t);
      double sup_u = sup_norm_diff(at.U, bt.U);
      PwConstant dv = (at.V - bt.V).derivative();
      double l1_v = l1_norm(dv);
      double l2_v = l2_norm(dv);
      double l2_us = l2_norm((at.U - bt.U).derivative());
      if (k > 0) {
        double h = horizon / steps;
        int_sup_u += 0.5 * h * (prev_sup_u + sup_u);
        int_l1_v += 0.5 * h * (prev_l1_v + l1_v);
        int_l2_u_slope += 0.5 * h * (prev_l2_us + l2_us);
        int_l2_v += 0.5 * h * (prev_l2_v + l2_v);
      }
      prev_sup_u = sup_u;
      prev_l1_v = l1_v;
      prev_l2_us = l2_us;
      prev_l2_v = l2_v;
      if (k == steps || k == steps / 2) {
        LagrangianX aT = at, bT = bt;
        double slack = 1e-8 + 2e-3 * (int_sup_u + int_l1_v + int_l2_v);
        CHECK(sup_norm_diff(aT.y, bT.y) <= sup_y0 + int_sup_u + slack);
        CHECK(sup_norm_diff(aT.U, bT.U) <= sup_u0 + 0.25 * int_l1_v + slack);
        CHECK(l2_norm((aT.y - bT.y).derivative()) <=
              l2_ys0 + int_l2_u_slope + slack);
        CHECK(l2_norm((aT.U - bT.U).derivative()) <=
              l2_us0 + 0.5 * int_l2_v + slack);
      }
    }
  }
}

TEST_CASE("collapsed cells never dissipate or re-break") {
  // An initial atom: flat characteristic cell with retained energy. It fans
  // out immediately and its energy is untouched by later events.
  Grid g({0.0, 1.0, 2.0, 3.0});
  LagrangianX x{PwLinear::from_values(1, g, {0.0, 0.0, 0.5, 1.0}),
                PwLinear::from_values(0, g, {0.0, 0.0, -0.25, 0.0}),
                PwLinear::from_values(0, g, {0.0, 1.0, 1.125, 2.0}),
                PwLinear::from_values(0, g, {0.0, 1.0, 1.125, 1.25}),
                AlphaFn::constant(0.75)};
  ValidationReport rep = validate_lagrangian(x);
  INFO(rep.str());
  REQUIRE(rep.valid());
  BreakingSchedule s0 = breaking_times(x);
  CHECK(s0.tau[1] == 0.0);  // the atom cell carries the degenerate marker
  Trajectory traj = evolve(x, 6.0);
  REQUIRE_FALSE(traj.event_times().empty());
  for (double t : {0.5, 3.0, 6.0}) {
    LagrangianX xt = traj.state_at(t);
    // The atom's energy is still there (no dissipation at the marker cell).
    PwConstant vd = xt.V.derivative();
    CHECK(vd.cells[1] == doctest::Approx(1.0));
    // The fan has positive width for positive times.
    CHECK(xt.y.eval(1.0) - xt.y.eval(0.0) > 0.0);
  }
  // Cells that broke re-enter with flat slopes and never break again.
  double te = traj.event_times().front();
  BreakingSchedule after = breaking_times(traj.state_at(te));
  for (double tau : after.tau) {
    CHECK((tau == 0.0 || std::isinf(tau)));
  }
}

TEST_CASE("states sampled arbitrarily close to breaking stay admissible") {
  // Densities scale like the inverse square of the vanishing slope; the
  // Eulerian image must survive validation all the way into the collapse.
  LagrangianX x0 = golden::plateau_initial_lagrangian(golden::plateau_alpha_const());
  Trajectory traj = evolve(x0, 3.0);
  for (double eps : {1e-2, 1e-4, 1e-6, 1e-8, 1e-10}) {
    LagrangianX xt = traj.state_at(2.0 - eps);
    ValidationReport lag = validate_lagrangian(xt);
    INFO("eps=" << eps << "\n" << lag.str());
    CHECK(lag.valid());
    EulerianY yt = to_eulerian(xt);
    CHECK(yt.nu.total_mass() == doctest::Approx(2.0).epsilon(1e-9));
  }
}

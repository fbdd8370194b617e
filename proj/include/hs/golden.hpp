#pragma once

#include "hs/eulerian.hpp"
#include "hs/lagrangian.hpp"

namespace hs::golden {

// --- Breaking triangle: one collapse at (t, x) = (2, 2) with half loss. ---
EulerianY triangle_initial();
double triangle_u(double x, double t);

// --- Two-plateau profile: simultaneous collapses at t = 2 on two runs. ---
AlphaFn plateau_alpha_const();     // constant 1/3
AlphaFn plateau_alpha_bump();      // non-constant, same values where it matters
EulerianY plateau_initial(const AlphaFn& alpha);
LagrangianX plateau_initial_lagrangian(const AlphaFn& alpha);
double plateau_y(double xi, double t);
double plateau_velocity(double xi, double t);
double plateau_energy(double xi, double t);

// --- Mixed-dissipation profile: full loss at t = 1, half loss at t = 2.
//     Its alpha leaves the admissible class on purpose. ---
EulerianY mixed_initial();
double mixed_y(double xi, double t);
double mixed_velocity(double xi, double t);
double mixed_energy(double xi, double t);
/// Round-trip image of the t = 2 state through Eulerian coordinates.
LagrangianX mixed_roundtrip_state();

// --- Dummy-measure invariance: two dominating measures, one solution. ---
EulerianY dummy_invariance_initial_a();
EulerianY dummy_invariance_initial_b();
LagrangianX dummy_invariance_x0_a();
LagrangianX dummy_invariance_x0_b();
double dummy_invariance_energy_a(double xi, double t);
double dummy_invariance_energy_b(double xi, double t);
double dummy_invariance_u(double x, double t);

}  // namespace hs::golden

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hs/eulerian.hpp"
#include "hs/lagrangian.hpp"

namespace hs {

struct InvalidNuCandidate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Per-cell membership in the comparison sets of a state pair. Remaining
/// breaking times are measured from the states' own time origin.
struct SegmentClassification {
  struct Cell {
    bool a_A;           // no future breaking for the first state
    bool a_B;           // no future breaking for the second state
    bool common_break;  // both break at the same future time
    double tau_A;       // remaining breaking time (inf if none)
    double tau_B;
  };

  Grid grid;                // common refinement of both state grids
  std::vector<Cell> cells;  // grid.size() + 1

  bool in_a_ab(std::size_t i) const { return cells[i].a_A && cells[i].a_B; }
  bool in_b(std::size_t i) const { return cells[i].common_break; }
  bool in_omega_c(std::size_t i) const { return !in_a_ab(i) && !in_b(i); }
};

SegmentClassification classify_segments(const LagrangianX& a,
                                        const LagrangianX& b);

/// Time-monotone dominating envelope of |V_{A,xi} - V_{B,xi}|, assembled
/// piecewise linearly on a refinement that isolates all sign changes.
struct GFunction {
  struct Seg {
    double a, b;    // cell bounds
    double va, vb;  // endpoint values (linear inside, jumps allowed at joints)
  };
  std::vector<Seg> segs;
  double norm1 = 0.0;
  double norm2 = 0.0;

  double eval(double x) const;
};

GFunction compute_G(const LagrangianX& a, const LagrangianX& b);
/// Simplified envelope for constant alpha (piecewise constant in the label).
GFunction compute_G_constant_alpha(const LagrangianX& a, const LagrangianX& b);

enum class DVariant { General, ConstantAlpha };

struct MetricOptions {
  bool include_alpha_term = true;
};

struct MetricReport {
  double total = 0.0;
  // The eight summands.
  double sup_y = 0.0;
  double sup_U = 0.0;
  double l2_y_slope = 0.0;
  double l2_U_slope = 0.0;
  double sup_H = 0.0;
  double g_l1_term = 0.0;  // (1/4) |G|_1
  double g_l2_term = 0.0;  // (1/2) |G|_2
  double alpha_term = 0.0;
  // Pair constants.
  double m_pair = 0.0;  // max of sup |V| over both states
  double c_pair = 0.0;  // growth rate of the pair
  double r_rate = 0.0;  // chained-metric growth rate
};

MetricReport semi_metric_D(const LagrangianX& a, const LagrangianX& b,
                           DVariant variant = DVariant::General,
                           MetricOptions opts = {});

struct LipschitzConstants {
  double growth_rate;          // rate for the direct comparison
  double chained_growth_rate;  // rate for the chained metric
};

/// Rates as functions of the energy bound M and the alpha Lipschitz bound L.
LipschitzConstants lipschitz_constants(double m, double l);

/// Growth exponent when both alphas are constants.
inline constexpr double kConstantAlphaRate = 1.5;

struct OptimizerBudget {
  int interior_knots = 4;
  int max_evaluations = 320;
  int restarts = 0;
  std::uint32_t seed = 1234;
};

/// Certified lower/upper bounds on an infimum; `witness` names what achieved
/// the upper bound.
struct DistanceBracket {
  double lower = 0.0;
  double upper = 0.0;
  std::string witness;
};

/// Relabelling infimum of D(a, b o f) + D(a o g, b): the upper bound comes
/// from a simplex search over monotone piecewise-linear reparameterizations
/// seeded by the identity and the canonical candidate; the lower bound is
/// (2/5) of the comparison norm when both states are normalized.
DistanceBracket j_bracket(const LagrangianX& a, const LagrangianX& b,
                          const OptimizerBudget& budget = {},
                          MetricOptions opts = {});

/// Chained metric bracket: both states are normalized first; the single-link
/// chain bounds the infimum from above.
DistanceBracket dhat_bracket(const LagrangianX& a, const LagrangianX& b,
                             const OptimizerBudget& budget = {},
                             MetricOptions opts = {});

enum class W1InfRule { Max, Sum };

/// Bounded Lipschitz norm of a finite signed measure: sup of the integral of
/// a test function with value and slope bounds, solved exactly on an
/// adaptively refined knot set.
double bounded_lipschitz(const SignedMeasure& m, W1InfRule rule = W1InfRule::Max);

/// Distance between Eulerian states through their Lagrangian images.
DistanceBracket euler_distance(const EulerianY& a, const EulerianY& b,
                               const OptimizerBudget& budget = {},
                               MetricOptions opts = {});

/// Quotient distance over the dummy-measure families. Each family always
/// contains the canonical choice nu = mu; the lower bound inverts the normed
/// comparison inequality.
DistanceBracket euler_quotient_bracket(const EulerianZ& a, const EulerianZ& b,
                                       const std::vector<Measure>& nu_family_a,
                                       const std::vector<Measure>& nu_family_b,
                                       const OptimizerBudget& budget = {},
                                       MetricOptions opts = {},
                                       W1InfRule rule = W1InfRule::Max);

/// All-pairs chained relaxation of a symmetric zero-diagonal nonnegative
/// table: shortest chains with at most `chain_cap` links.
std::vector<std::vector<double>> quotient_metric(
    const std::vector<std::vector<double>>& f, int chain_cap);

}  // namespace hs

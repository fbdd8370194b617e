#pragma once

#include <string>
#include <vector>

#include "hs/piecewise.hpp"

namespace hs {

/// Energy-loss fraction as a function of position. Admissible choices are
/// the constant one, constants in [0,1], and Lipschitz functions with values
/// in [0, 1). The piecewise variant carries a declared Lipschitz bound.
class AlphaFn {
 public:
  enum class Kind { ConstantOne, Constant, Pw };

  AlphaFn() : kind_(Kind::ConstantOne) {}

  static AlphaFn one();
  static AlphaFn constant(double a);
  static AlphaFn pw(PwLinear f, double lipschitz);

  Kind kind() const { return kind_; }
  /// True for the fully dissipative branch (constant one).
  bool is_one() const;
  bool is_constant() const { return kind_ != Kind::Pw; }
  double constant_value() const;
  const PwLinear& piecewise() const { return fn_; }
  double declared_lipschitz() const { return lip_; }

  double eval(double x) const;
  /// Largest cell slope magnitude (0 for constants).
  double max_abs_slope() const;

  /// Admissibility violations against the allowed class (empty if admissible).
  std::vector<std::string> admissibility_violations() const;

 private:
  Kind kind_;
  double c_ = 1.0;
  PwLinear fn_;
  double lip_ = 0.0;
};

/// sup |alpha_A - alpha_B| over R, exact on the union grid.
double alpha_sup_diff(const AlphaFn& a, const AlphaFn& b);

/// Shared Lipschitz bound of a pair: cell-wise maximum of |alpha'| on the
/// refined grid, then its sup. Dominates both individual bounds.
double alpha_pair_lipschitz(const AlphaFn& a, const AlphaFn& b);

}  // namespace hs

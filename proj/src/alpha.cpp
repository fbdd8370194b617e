#include "hs/alpha.hpp"

#include <algorithm>
#include <cmath>

namespace hs {

AlphaFn AlphaFn::one() {
  AlphaFn a;
  a.kind_ = Kind::ConstantOne;
  a.c_ = 1.0;
  return a;
}

AlphaFn AlphaFn::constant(double value) {
  AlphaFn a;
  a.kind_ = Kind::Constant;
  a.c_ = value;
  return a;
}

AlphaFn AlphaFn::pw(PwLinear f, double lipschitz) {
  if (f.identity_coefficient() != 0) {
    throw InvalidInput("alpha function must be bounded");
  }
  AlphaFn a;
  a.kind_ = Kind::Pw;
  a.fn_ = std::move(f);
  a.lip_ = lipschitz;
  return a;
}

bool AlphaFn::is_one() const {
  return kind_ == Kind::ConstantOne || (kind_ == Kind::Constant && c_ == 1.0);
}

double AlphaFn::constant_value() const {
  if (kind_ == Kind::Pw) throw InvalidInput("alpha is not constant");
  return c_;
}

double AlphaFn::eval(double x) const {
  if (kind_ == Kind::Pw) return fn_.eval(x);
  return c_;
}

double AlphaFn::max_abs_slope() const {
  if (kind_ != Kind::Pw) return 0.0;
  PwConstant d = fn_.derivative();
  double best = 0.0;
  for (double s : d.cells) best = std::max(best, std::abs(s));
  return best;
}

std::vector<std::string> AlphaFn::admissibility_violations() const {
  std::vector<std::string> out;
  switch (kind_) {
    case Kind::ConstantOne:
      break;
    case Kind::Constant:
      if (c_ < 0.0 || c_ > 1.0) out.push_back("constant alpha outside [0,1]");
      break;
    case Kind::Pw: {
      for (double v : fn_.bounded_values()) {
        if (v < 0.0) {
          out.push_back("alpha value below 0");
          break;
        }
      }
      for (double v : fn_.bounded_values()) {
        if (v >= 1.0 - tol::alpha_gap) {
          out.push_back("alpha value reaches 1 outside the constant-one case");
          break;
        }
      }
      if (lip_ < max_abs_slope() - tol::value) {
        out.push_back("declared Lipschitz bound below actual slope");
      }
      break;
    }
  }
  return out;
}

double alpha_sup_diff(const AlphaFn& a, const AlphaFn& b) {
  if (a.is_constant() && b.is_constant()) {
    return std::abs(a.constant_value() - b.constant_value());
  }
  std::vector<double> probes{0.0};
  if (a.kind() == AlphaFn::Kind::Pw) {
    const auto& p = a.piecewise().grid().points();
    probes.insert(probes.end(), p.begin(), p.end());
  }
  if (b.kind() == AlphaFn::Kind::Pw) {
    const auto& p = b.piecewise().grid().points();
    probes.insert(probes.end(), p.begin(), p.end());
  }
  // Tail values matter too; probe beyond the joint hull.
  double lo = *std::min_element(probes.begin(), probes.end()) - 1.0;
  double hi = *std::max_element(probes.begin(), probes.end()) + 1.0;
  probes.push_back(lo);
  probes.push_back(hi);
  double best = 0.0;
  for (double x : probes) best = std::max(best, std::abs(a.eval(x) - b.eval(x)));
  return best;
}

double alpha_pair_lipschitz(const AlphaFn& a, const AlphaFn& b) {
  return std::max(a.max_abs_slope(), b.max_abs_slope());
}

}  // namespace hs

#include "hs/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hs {

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

}  // namespace

LagrangianX LagrangianX::on_shared_grid(PwLinear y, PwLinear U, PwLinear H,
                                        PwLinear V, AlphaFn alpha) {
  if (y.identity_coefficient() != 1) {
    throw InvalidInput("characteristic map needs identity coefficient 1");
  }
  Grid g = common_refinement({&y.grid(), &U.grid(), &H.grid(), &V.grid()});
  return LagrangianX{y.refined(g), U.refined(g), H.refined(g), V.refined(g),
                     std::move(alpha)};
}

Relabelling Relabelling::identity() { return Relabelling{PwLinear::identity()}; }

Relabelling Relabelling::from(PwLinear f) {
  if (f.identity_coefficient() != 1) {
    throw InvalidInput("relabelling must map onto R");
  }
  return Relabelling{std::move(f)};
}

std::vector<std::string> Relabelling::group_violations() const {
  std::vector<std::string> out;
  if (f.identity_coefficient() != 1) {
    out.push_back("not onto R");
    return out;
  }
  PwConstant d = f.derivative();
  for (double s : d.cells) {
    if (s <= tol::slope_floor) {
      out.push_back("slope not strictly positive");
      break;
    }
  }
  return out;
}

ValidationReport validate_lagrangian(const LagrangianX& x) {
  ValidationReport rep;
  const Grid& g = x.grid();
  if (!x.U.grid().same_as(g) || !x.H.grid().same_as(g) || !x.V.grid().same_as(g)) {
    rep.violations.push_back({"components must share one grid", "grid", 0.0});
    return rep;
  }
  PwConstant yx = x.y.derivative();
  PwConstant Ux = x.U.derivative();
  PwConstant Hx = x.H.derivative();
  PwConstant Vx = x.V.derivative();

  double min_sum = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < yx.cells.size(); ++i) {
    double yd = yx.cells[i], Hd = Hx.cells[i], Vd = Vx.cells[i], Ud = Ux.cells[i];
    if (yd < -tol::value) {
      rep.violations.push_back({"y_xi >= 0", cell_label(g, i), -yd});
    }
    if (Hd < -tol::value) {
      rep.violations.push_back({"H_xi >= 0", cell_label(g, i), -Hd});
    }
    min_sum = std::min(min_sum, yd + Hd);
    double quad_scale = 1.0 + std::abs(yd * Vd) + Ud * Ud;
    if (std::abs(yd * Vd - Ud * Ud) > tol::value * quad_scale) {
      rep.violations.push_back(
          {"y_xi V_xi = U_xi^2", cell_label(g, i), std::abs(yd * Vd - Ud * Ud)});
    }
    if (Vd < -tol::value) {
      rep.violations.push_back({"V_xi >= 0", cell_label(g, i), -Vd});
    }
    if (Vd > Hd + tol::value) {
      rep.violations.push_back({"V_xi <= H_xi", cell_label(g, i), Vd - Hd});
    }
    if (x.alpha.is_one()) {
      if (yd <= tol::slope_floor && Vd > tol::value) {
        rep.violations.push_back(
            {"collapsed cells carry no energy when alpha is one",
             cell_label(g, i), Vd});
      }
      if (yd > tol::slope_floor && std::abs(Vd - Hd) > tol::value) {
        rep.violations.push_back(
            {"V_xi = H_xi on expanded cells when alpha is one",
             cell_label(g, i), std::abs(Vd - Hd)});
      }
    } else {
      if (Hd > tol::value) {
        double kappa = Vd / Hd;
        if (kappa > 1.0 + tol::value) {
          rep.violations.push_back(
              {"energy ratio above one", cell_label(g, i), kappa - 1.0});
        } else if (kappa <= 0.0) {
          // Ratio zero sits on the boundary of the admissible range; flagged
          // but not fatal.
          rep.warnings.push_back(
              {"energy ratio vanishes", cell_label(g, i), kappa});
        }
        if (Ud < -tol::value && std::abs(kappa - 1.0) > tol::value) {
          rep.violations.push_back({"energy ratio must be one where U_xi < 0",
                                    cell_label(g, i), std::abs(kappa - 1.0)});
        }
      }
    }
  }
  if (!(min_sum > tol::slope_floor)) {
    rep.violations.push_back(
        {"y_xi + H_xi bounded away from zero", "grid", min_sum});
  }
  return rep;
}

LagrangianX relabel(const LagrangianX& x, const Relabelling& f) {
  return LagrangianX::on_shared_grid(compose(x.y, f.f), compose(x.U, f.f),
                                     compose(x.H, f.f), compose(x.V, f.f),
                                     x.alpha);
}

std::pair<LagrangianX, Relabelling> pi_normalize(const LagrangianX& x) {
  PwLinear yh = x.y + x.H;
  Relabelling f = Relabelling::from(invert(yh));
  PwLinear y = compose(x.y, f.f);
  PwLinear U = compose(x.U, f.f);
  PwLinear V = compose(x.V, f.f);
  // H is pinned to id - y so the normalized state lands exactly on y + H = id.
  std::vector<double> hvals(std::max<std::size_t>(y.grid().size(), 1));
  if (y.grid().empty()) {
    hvals[0] = -y.bounded_values()[0];
  } else {
    for (std::size_t i = 0; i < y.grid().size(); ++i) {
      hvals[i] = -y.bounded_values()[i];
    }
  }
  PwLinear H = PwLinear::from_bounded(0, y.grid(), std::move(hvals));
  return {LagrangianX::on_shared_grid(std::move(y), std::move(U), std::move(H),
                                      std::move(V), x.alpha),
          std::move(f)};
}

double lag_comparison_norm(const LagrangianX& a, const LagrangianX& b) {
  return sup_norm_diff(a.y, b.y) + sup_norm_diff(a.U, b.U) +
         sup_norm_diff(a.H, b.H) + 0.25 * sup_norm_diff(a.V, b.V) +
         alpha_sup_diff(a.alpha, b.alpha);
}

}  // namespace hs

#include "hs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hs {

BreakingSchedule breaking_times(const LagrangianX& x) {
  PwConstant yd = x.y.derivative();
  PwConstant ud = x.U.derivative();
  BreakingSchedule out;
  out.tau.resize(yd.cells.size());
  for (std::size_t i = 0; i < yd.cells.size(); ++i) {
    double a = yd.cells[i], b = ud.cells[i];
    if (a <= tol::slope_floor && std::abs(b) <= tol::slope_floor) {
      out.tau[i] = 0.0;  // already collapsed; never dissipates
    } else if (b < 0.0) {
      if (a <= 0.0) {
        throw InvalidInput("negative velocity slope on a collapsed cell");
      }
      out.tau[i] = -2.0 * a / b;
    } else {
      out.tau[i] = BreakingSchedule::never();
    }
  }
  return out;
}

namespace {

// Breakpoint values of a state advanced by dt with frozen V and v_inf.
LagrangianX advanced(const LagrangianX& s, double v_inf, double dt) {
  const Grid& g = s.grid();
  std::size_t n = std::max<std::size_t>(g.size(), 1);
  std::vector<double> yv(n), uv(n);
  for (std::size_t i = 0; i < n; ++i) {
    double y0 = g.empty() ? s.y.bounded_values()[0] : s.y.value_at(i);
    double u0 = g.empty() ? s.U.bounded_values()[0] : s.U.value_at(i);
    double vv = g.empty() ? s.V.bounded_values()[0] : s.V.value_at(i);
    double du = 0.5 * vv - 0.25 * v_inf;
    uv[i] = u0 + du * dt;
    yv[i] = y0 + u0 * dt + 0.5 * du * dt * dt;
  }
  PwLinear y = g.empty() ? PwLinear::from_bounded(1, g, {yv[0]})
                         : PwLinear::from_values(1, g, yv);
  PwLinear u = g.empty() ? PwLinear::constant(uv[0])
                         : PwLinear::from_values(0, g, uv);
  return LagrangianX{std::move(y), std::move(u), s.H, s.V, s.alpha};
}

}  // namespace

Trajectory evolve(const LagrangianX& x0, double horizon) {
  if (!std::isfinite(horizon) || horizon < 0.0) {
    throw InvalidInput("horizon must be finite and nonnegative");
  }
  BreakingSchedule schedule = breaking_times(x0);

  // Distinct positive event times up to the horizon, grouped within the
  // event-time tolerance.
  std::vector<double> taus;
  for (double t : schedule.tau) {
    if (t > tol::event_time && t <= horizon + tol::event_time &&
        std::isfinite(t)) {
      taus.push_back(t);
    }
  }
  std::sort(taus.begin(), taus.end());
  std::vector<double> events;
  for (double t : taus) {
    if (events.empty() || t - events.back() > tol::event_time) events.push_back(t);
  }

  std::vector<TrajectorySegment> segments;
  segments.push_back({0.0, x0, x0.v_infinity()});

  for (double te : events) {
    const TrajectorySegment& prev = segments.back();
    LagrangianX cur = advanced(prev.state, prev.v_inf, te - prev.t0);
    const Grid& g = cur.grid();

    // Collapse every maximal run of cells breaking now.
    std::vector<double> factors(schedule.tau.size(), 1.0);
    std::vector<double> yv(g.size()), uv(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      yv[i] = cur.y.value_at(i);
      uv[i] = cur.U.value_at(i);
    }
    std::size_t cell = 1;
    while (cell + 1 <= g.size()) {  // interior cells only
      if (std::abs(schedule.tau[cell] - te) <= tol::event_time) {
        std::size_t run_end = cell;
        while (run_end + 1 < g.size() &&
               std::abs(schedule.tau[run_end + 1] - te) <= tol::event_time) {
          ++run_end;
        }
        // Breakpoints run from cell-1 to run_end; they must agree already.
        double ysum = 0.0, usum = 0.0;
        for (std::size_t b = cell - 1; b <= run_end; ++b) {
          ysum += yv[b];
          usum += uv[b];
        }
        std::size_t count = run_end - cell + 2;
        double y_collapse = ysum / count;
        double u_collapse = usum / count;
        for (std::size_t b = cell - 1; b <= run_end; ++b) {
          if (std::abs(yv[b] - y_collapse) > tol::value ||
              std::abs(uv[b] - u_collapse) > tol::value) {
            throw InvalidInput("breaking run did not collapse to one point");
          }
          yv[b] = y_collapse;
          uv[b] = u_collapse;
        }
        double a = cur.alpha.eval(y_collapse);
        double factor = 1.0 - a;
        if (cur.alpha.is_one() || a >= 1.0 - tol::alpha_gap) factor = 0.0;
        factor = std::clamp(factor, 0.0, 1.0);
        for (std::size_t c = cell; c <= run_end; ++c) factors[c] = factor;
        cell = run_end + 1;
      } else {
        ++cell;
      }
    }

    PwConstant vslope = cur.V.derivative();
    for (std::size_t c = 0; c < vslope.cells.size(); ++c) {
      vslope.cells[c] *= factors[c];
    }
    std::vector<double> vv(std::max<std::size_t>(g.size(), 1));
    double acc = cur.V.bounded_left_tail();
    if (!g.empty()) {
      vv[0] = acc;
      for (std::size_t i = 1; i < g.size(); ++i) {
        acc += vslope.cells[i] * (g[i] - g[i - 1]);
        vv[i] = acc;
      }
    } else {
      vv[0] = acc;
    }
    PwLinear y_new = g.empty() ? cur.y : PwLinear::from_values(1, g, yv);
    PwLinear u_new = g.empty() ? cur.U : PwLinear::from_values(0, g, uv);
    PwLinear v_new = g.empty() ? cur.V : PwLinear::from_values(0, g, vv);
    LagrangianX post{std::move(y_new), std::move(u_new), cur.H,
                     std::move(v_new), cur.alpha};
    segments.push_back({te, std::move(post), 0.0});
    segments.back().v_inf = segments.back().state.v_infinity();
  }

  return Trajectory(x0.alpha, std::move(segments), std::move(events),
                    std::move(schedule), horizon);
}

double Trajectory::v_infinity(double t) const {
  if (t < -tol::event_time || t > horizon_ + tol::event_time) {
    throw OutOfHorizon("time outside the computed horizon");
  }
  std::size_t k = segments_.size();
  while (k > 0 && segments_[k - 1].t0 > t) --k;
  if (k == 0) k = 1;
  return segments_[k - 1].v_inf;
}

LagrangianX Trajectory::state_at(double t, EventSide side) const {
  if (t < -tol::event_time || t > horizon_ + tol::event_time) {
    throw OutOfHorizon("time outside the computed horizon");
  }
  std::size_t k = segments_.size();
  if (side == EventSide::After) {
    while (k > 0 && segments_[k - 1].t0 > t) --k;
  } else {
    while (k > 0 && segments_[k - 1].t0 >= t) --k;
  }
  if (k == 0) k = 1;
  const TrajectorySegment& seg = segments_[k - 1];
  double dt = t - seg.t0;
  if (dt == 0.0) return seg.state;
  return advanced(seg.state, seg.v_inf, dt);
}

std::vector<EulerianY> evolve_eulerian(const EulerianY& y0,
                                       const std::vector<double>& times) {
  ValidationReport rep = validate_eulerian(y0);
  if (!rep.valid()) {
    throw InvalidInput("state outside the admissible Eulerian set:\n" + rep.str());
  }
  double horizon = 0.0;
  for (double t : times) horizon = std::max(horizon, t);
  Trajectory traj = evolve(to_lagrangian(y0), horizon);
  std::vector<EulerianY> out;
  out.reserve(times.size());
  for (double t : times) {
    out.push_back(to_eulerian_unchecked(traj.state_at(t)));
  }
  return out;
}

}  // namespace hs

#pragma once

#include <limits>
#include <vector>

#include "hs/lagrangian.hpp"
#include "hs/transform.hpp"

namespace hs {

/// Breaking time per grid cell, measured from the state's own time origin.
/// +inf marks cells that never break; 0 marks cells that are already
/// collapsed at the origin (those never dissipate).
struct BreakingSchedule {
  std::vector<double> tau;  // one entry per cell (grid.size() + 1)

  static constexpr double never() {
    return std::numeric_limits<double>::infinity();
  }
};

BreakingSchedule breaking_times(const LagrangianX& x);

/// One inter-event segment: state at the segment start and the constant
/// total retained energy on it.
struct TrajectorySegment {
  double t0;
  LagrangianX state;
  double v_inf;
};

enum class EventSide { Before, After };

/// Exact event-driven solution: between events every component evolves by
/// the closed quadratic form on a fixed label grid; at each event the
/// affected cells collapse and their energy drops by the local alpha factor.
class Trajectory {
 public:
  Trajectory(AlphaFn alpha, std::vector<TrajectorySegment> segments,
             std::vector<double> event_times, BreakingSchedule schedule,
             double horizon)
      : alpha_(std::move(alpha)),
        segments_(std::move(segments)),
        event_times_(std::move(event_times)),
        schedule_(std::move(schedule)),
        horizon_(horizon) {}

  const AlphaFn& alpha() const { return alpha_; }
  const LagrangianX& initial() const { return segments_.front().state; }
  double horizon() const { return horizon_; }
  /// Event times inside (0, horizon], ascending.
  const std::vector<double>& event_times() const { return event_times_; }
  /// Absolute breaking time per initial-grid cell.
  const BreakingSchedule& schedule() const { return schedule_; }
  const std::vector<TrajectorySegment>& segments() const { return segments_; }

  double v_infinity(double t) const;
  /// State at time t; EventSide::Before gives the limit from below at an
  /// event time. Throws OutOfHorizon outside [0, horizon].
  LagrangianX state_at(double t, EventSide side = EventSide::After) const;

 private:
  AlphaFn alpha_;
  std::vector<TrajectorySegment> segments_;
  std::vector<double> event_times_;
  BreakingSchedule schedule_;
  double horizon_;
};

Trajectory evolve(const LagrangianX& x0, double horizon);

/// Eulerian semigroup: map to Lagrangian coordinates, evolve, map back at
/// each requested time.
std::vector<EulerianY> evolve_eulerian(const EulerianY& y0,
                                       const std::vector<double>& times);

}  // namespace hs

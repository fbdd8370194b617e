#pragma once

#include <cstddef>
#include <vector>

#include "hs/common.hpp"

namespace hs {

/// Strictly increasing, finite list of breakpoints on the real line.
///
/// A grid with n points splits the line into n+1 cells: cell 0 is the left
/// tail (-inf, p0), cell i is [p_{i-1}, p_i) for 0 < i < n, and cell n is the
/// right tail [p_{n-1}, +inf). An empty grid has a single cell covering R.
class Grid {
 public:
  Grid() = default;
  explicit Grid(std::vector<double> points);

  std::size_t size() const { return pts_.size(); }
  bool empty() const { return pts_.empty(); }
  double operator[](std::size_t i) const { return pts_[i]; }
  const std::vector<double>& points() const { return pts_; }
  double front() const { return pts_.front(); }
  double back() const { return pts_.back(); }

  /// Index of the cell containing x (see class comment for the convention).
  std::size_t cell_index(double x) const;

  bool same_as(const Grid& other, double tolerance = tol::coord) const;

 private:
  std::vector<double> pts_;
};

/// Sorted union of several grids; points closer than `tolerance` are merged,
/// keeping the smallest representative of each cluster.
Grid common_refinement(const std::vector<const Grid*>& grids,
                       double tolerance = tol::coord);
Grid common_refinement(const Grid& a, const Grid& b,
                       double tolerance = tol::coord);

/// Merge extra points into a grid (same clustering rule as common_refinement).
Grid merge_points(const Grid& g, const std::vector<double>& extra,
                  double tolerance = tol::coord);

/// Piecewise-constant function with one value per cell, tails included.
struct PwConstant {
  Grid grid;
  std::vector<double> cells;  // grid.size() + 1 values

  PwConstant() : cells{0.0} {}
  PwConstant(Grid g, std::vector<double> cell_values);

  double at(double x) const { return cells[grid.cell_index(x)]; }
  double left_tail() const { return cells.front(); }
  double right_tail() const { return cells.back(); }

  /// Resample onto a superset grid (exact; cells are looked up by midpoint).
  PwConstant refined(const Grid& g) const;

  /// Integral over R; requires both tails to vanish.
  double integral() const;
};

/// Continuous piecewise-linear function f(x) = ic*x + b(x) where the bounded
/// part b is affine on each cell and constant on both tails. ic is 0 or 1.
class PwLinear {
 public:
  PwLinear() : bounded_{0.0} {}

  static PwLinear constant(double c);
  static PwLinear identity();
  /// Construct from bounded-part values at the breakpoints.
  static PwLinear from_bounded(int identity_coefficient, Grid g,
                               std::vector<double> bounded);
  /// Construct from full function values at the breakpoints.
  static PwLinear from_values(int identity_coefficient, Grid g,
                              std::vector<double> values);

  int identity_coefficient() const { return ic_; }
  const Grid& grid() const { return grid_; }
  const std::vector<double>& bounded_values() const { return bounded_; }

  double eval(double x) const { return ic_ * x + bounded_eval(x); }
  double bounded_eval(double x) const;
  /// Full value at breakpoint i.
  double value_at(std::size_t i) const { return ic_ * grid_[i] + bounded_[i]; }
  double bounded_left_tail() const { return bounded_.front(); }
  double bounded_right_tail() const { return bounded_.back(); }

  /// Cell-wise derivative of the full function (tails evaluate to ic).
  PwConstant derivative() const;

  /// Same function represented on a superset grid.
  PwLinear refined(const Grid& g) const;

  PwLinear scaled(double factor) const;
  friend PwLinear operator+(const PwLinear& a, const PwLinear& b);
  friend PwLinear operator-(const PwLinear& a, const PwLinear& b);

  bool is_nondecreasing(double slack = 0.0) const;

 private:
  int ic_ = 0;
  Grid grid_;
  std::vector<double> bounded_;  // max(1, grid.size()) values
};

inline double pw_eval(const PwLinear& f, double x) { return f.eval(x); }

/// Exact composition f(r(x)). r must be strictly increasing and onto R
/// (identity coefficient 1); throws NotMonotone otherwise.
PwLinear compose(const PwLinear& f, const PwLinear& r);

/// Exact inverse of a strictly increasing map onto R. Throws NotInvertible
/// when a cell slope falls below the slope floor.
PwLinear invert(const PwLinear& f);

/// sup |f - g|. Requires matching identity coefficients (throws Unbounded).
double sup_norm_diff(const PwLinear& f, const PwLinear& g);

/// L1/L2 norms of compactly supported integrands (exact per-cell integrals).
double l1_norm(const PwConstant& h);
double l2_norm(const PwConstant& h);
double l1_norm(const PwLinear& h);
double l2_norm(const PwLinear& h);

struct Atom {
  double x;
  double mass;
};

/// Nonnegative finite Radon measure: compactly supported piecewise-constant
/// density plus finitely many atoms with positive mass.
class Measure {
 public:
  Measure() = default;
  Measure(PwConstant density, std::vector<Atom> atoms);

  static Measure zero() { return Measure(); }

  const PwConstant& density() const { return density_; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  double total_mass() const;
  /// mu((-inf, x)) — left-continuous cumulative.
  double cumulative_left(double x) const;
  /// mu((-inf, x]).
  double cumulative_right(double x) const;

 private:
  PwConstant density_;
  std::vector<Atom> atoms_;  // sorted by position, distinct, mass > 0
};

/// Difference of two measures: signed density plus signed atoms.
struct SignedMeasure {
  PwConstant density;
  std::vector<Atom> atoms;  // sorted, distinct positions, signed masses

  static SignedMeasure difference(const Measure& a, const Measure& b);
};

/// Push-forward of the weighted label measure w(xi) dxi through a
/// nondecreasing map y. Cells with positive slope contribute density
/// weight/slope on the image interval; flat cells concentrate their weight
/// into an atom at the collapsed position. Atoms closer than the coordinate
/// tolerance merge by mass addition.
Measure pushforward(const PwLinear& y, const PwConstant& weight);

/// sup over x of |F_a(x) - F_b(x)| where F is the left-continuous cumulative;
/// both one-sided limits are scanned at every breakpoint and atom.
double cumulative_sup_diff(const Measure& a, const Measure& b);

}  // namespace hs

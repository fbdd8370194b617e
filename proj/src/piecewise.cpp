#include "hs/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hs {

Grid::Grid(std::vector<double> points) : pts_(std::move(points)) {
  for (std::size_t i = 0; i + 1 < pts_.size(); ++i) {
    if (!(pts_[i] < pts_[i + 1])) {
      throw InvalidInput("grid breakpoints must be strictly increasing");
    }
  }
  for (double p : pts_) {
    if (!std::isfinite(p)) throw InvalidInput("grid breakpoint not finite");
  }
}

std::size_t Grid::cell_index(double x) const {
  return static_cast<std::size_t>(
      std::upper_bound(pts_.begin(), pts_.end(), x) - pts_.begin());
}

bool Grid::same_as(const Grid& other, double tolerance) const {
  if (size() != other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (std::abs(pts_[i] - other.pts_[i]) > tolerance) return false;
  }
  return true;
}

Grid common_refinement(const std::vector<const Grid*>& grids,
                       double tolerance) {
  std::vector<double> all;
  for (const Grid* g : grids) {
    all.insert(all.end(), g->points().begin(), g->points().end());
  }
  std::sort(all.begin(), all.end());
  std::vector<double> merged;
  for (double p : all) {
    if (merged.empty() || p - merged.back() > tolerance) merged.push_back(p);
  }
  return Grid(std::move(merged));
}

Grid common_refinement(const Grid& a, const Grid& b, double tolerance) {
  return common_refinement(std::vector<const Grid*>{&a, &b}, tolerance);
}

Grid merge_points(const Grid& g, const std::vector<double>& extra,
                  double tolerance) {
  Grid e(std::vector<double>{});
  std::vector<double> sorted = extra;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  Grid extra_grid(std::move(sorted));
  return common_refinement(g, extra_grid, tolerance);
}

PwConstant::PwConstant(Grid g, std::vector<double> cell_values)
    : grid(std::move(g)), cells(std::move(cell_values)) {
  if (cells.size() != grid.size() + 1) {
    throw InvalidInput("piecewise-constant function needs one value per cell");
  }
}

PwConstant PwConstant::refined(const Grid& g) const {
  std::vector<double> out(g.size() + 1);
  for (std::size_t i = 0; i <= g.size(); ++i) {
    // Midpoint of refined cell i; tails use a point beyond the hull.
    double probe;
    if (g.empty()) {
      probe = 0.0;
    } else if (i == 0) {
      probe = g.front() - 1.0;
    } else if (i == g.size()) {
      probe = g.back() + 1.0;
    } else {
      probe = 0.5 * (g[i - 1] + g[i]);
    }
    out[i] = at(probe);
  }
  return PwConstant(g, std::move(out));
}

double PwConstant::integral() const {
  if (std::abs(left_tail()) > 0.0 || std::abs(right_tail()) > 0.0) {
    throw Unbounded("integral of function with non-vanishing tails");
  }
  double total = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    total += cells[i] * (grid[i] - grid[i - 1]);
  }
  return total;
}

PwLinear PwLinear::constant(double c) {
  PwLinear f;
  f.bounded_ = {c};
  return f;
}

PwLinear PwLinear::identity() {
  PwLinear f;
  f.ic_ = 1;
  f.bounded_ = {0.0};
  return f;
}

PwLinear PwLinear::from_bounded(int identity_coefficient, Grid g,
                                std::vector<double> bounded) {
  if (identity_coefficient != 0 && identity_coefficient != 1) {
    throw InvalidInput("identity coefficient must be 0 or 1");
  }
  if (bounded.size() != std::max<std::size_t>(g.size(), 1)) {
    throw InvalidInput("piecewise-linear function needs one value per breakpoint");
  }
  PwLinear f;
  f.ic_ = identity_coefficient;
  f.grid_ = std::move(g);
  f.bounded_ = std::move(bounded);
  return f;
}

PwLinear PwLinear::from_values(int identity_coefficient, Grid g,
                               std::vector<double> values) {
  if (!g.empty()) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      values[i] -= identity_coefficient * g[i];
    }
  }
  return from_bounded(identity_coefficient, std::move(g), std::move(values));
}

double PwLinear::bounded_eval(double x) const {
  if (grid_.empty()) return bounded_[0];
  std::size_t cell = grid_.cell_index(x);
  if (cell == 0) return bounded_.front();
  if (cell == grid_.size()) return bounded_.back();
  double x0 = grid_[cell - 1], x1 = grid_[cell];
  double t = (x - x0) / (x1 - x0);
  return bounded_[cell - 1] + t * (bounded_[cell] - bounded_[cell - 1]);
}

PwConstant PwLinear::derivative() const {
  std::vector<double> cells(grid_.size() + 1, static_cast<double>(ic_));
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    cells[i] = ic_ + (bounded_[i] - bounded_[i - 1]) / (grid_[i] - grid_[i - 1]);
  }
  return PwConstant(grid_, std::move(cells));
}

PwLinear PwLinear::refined(const Grid& g) const {
  std::vector<double> vals(std::max<std::size_t>(g.size(), 1));
  if (g.empty()) {
    vals[0] = bounded_[0];
  } else {
    for (std::size_t i = 0; i < g.size(); ++i) vals[i] = bounded_eval(g[i]);
  }
  return from_bounded(ic_, g, std::move(vals));
}

PwLinear PwLinear::scaled(double factor) const {
  if (ic_ != 0 && factor != 1.0) {
    throw InvalidInput("cannot scale a function with identity part");
  }
  PwLinear f = *this;
  for (double& v : f.bounded_) v *= factor;
  return f;
}

namespace {

PwLinear combine(const PwLinear& a, const PwLinear& b, double sign) {
  int ic = a.identity_coefficient() + static_cast<int>(sign) * b.identity_coefficient();
  if (ic != 0 && ic != 1) {
    throw InvalidInput("combination leaves identity coefficient outside {0,1}");
  }
  Grid g = common_refinement(a.grid(), b.grid());
  std::vector<double> vals(std::max<std::size_t>(g.size(), 1));
  if (g.empty()) {
    vals[0] = a.bounded_eval(0.0) + sign * b.bounded_eval(0.0);
  } else {
    for (std::size_t i = 0; i < g.size(); ++i) {
      vals[i] = a.bounded_eval(g[i]) + sign * b.bounded_eval(g[i]);
    }
  }
  return PwLinear::from_bounded(ic, std::move(g), std::move(vals));
}

}  // namespace

PwLinear operator+(const PwLinear& a, const PwLinear& b) {
  return combine(a, b, +1.0);
}

PwLinear operator-(const PwLinear& a, const PwLinear& b) {
  return combine(a, b, -1.0);
}

bool PwLinear::is_nondecreasing(double slack) const {
  PwConstant d = derivative();
  for (double s : d.cells) {
    if (s < -slack) return false;
  }
  return true;
}

PwLinear compose(const PwLinear& f, const PwLinear& r) {
  if (r.identity_coefficient() != 1) {
    throw NotMonotone("inner map must have identity coefficient 1");
  }
  PwConstant slopes = r.derivative();
  for (double s : slopes.cells) {
    if (s <= 0.0) throw NotMonotone("inner map has a nonpositive slope");
  }
  // Domain grid: r's breakpoints plus preimages of f's breakpoints.
  std::vector<double> preimages;
  preimages.reserve(f.grid().size());
  for (std::size_t i = 0; i < f.grid().size(); ++i) {
    double target = f.grid()[i];
    // Solve r(xi) = target by walking r's cells.
    const Grid& rg = r.grid();
    if (rg.empty()) {
      preimages.push_back(target - r.bounded_values()[0]);
      continue;
    }
    double xi;
    if (target <= r.value_at(0)) {
      xi = rg.front() - (r.value_at(0) - target);
    } else if (target >= r.value_at(rg.size() - 1)) {
      xi = rg.back() + (target - r.value_at(rg.size() - 1));
    } else {
      std::size_t lo = 0, hi = rg.size() - 1;
      while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if (r.value_at(mid) < target) lo = mid; else hi = mid;
      }
      double v0 = r.value_at(lo), v1 = r.value_at(hi);
      xi = rg[lo] + (target - v0) / (v1 - v0) * (rg[hi] - rg[lo]);
    }
    preimages.push_back(xi);
  }
  Grid domain = merge_points(r.grid(), preimages);
  std::vector<double> vals(std::max<std::size_t>(domain.size(), 1));
  if (domain.empty()) {
    vals[0] = f.eval(r.eval(0.0));
  } else {
    for (std::size_t i = 0; i < domain.size(); ++i) {
      vals[i] = f.eval(r.eval(domain[i]));
    }
  }
  return PwLinear::from_values(f.identity_coefficient(), std::move(domain),
                               std::move(vals));
}

PwLinear invert(const PwLinear& f) {
  if (f.identity_coefficient() != 1) {
    throw NotInvertible("only maps onto R (identity coefficient 1) invert");
  }
  PwConstant slopes = f.derivative();
  for (double s : slopes.cells) {
    if (s <= tol::slope_floor) throw NotInvertible("slope at or below floor");
  }
  const Grid& g = f.grid();
  if (g.empty()) {
    return PwLinear::from_bounded(1, Grid(std::vector<double>{}), {-f.bounded_values()[0]});
  }
  std::vector<double> pts(g.size()), vals(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    pts[i] = f.value_at(i);
    vals[i] = g[i];
  }
  return PwLinear::from_values(1, Grid(std::move(pts)), std::move(vals));
}

double sup_norm_diff(const PwLinear& f, const PwLinear& g) {
  if (f.identity_coefficient() != g.identity_coefficient()) {
    throw Unbounded("sup norm of difference with unbounded identity part");
  }
  Grid ref = common_refinement(f.grid(), g.grid());
  double best = 0.0;
  if (ref.empty()) {
    return std::abs(f.bounded_eval(0.0) - g.bounded_eval(0.0));
  }
  for (std::size_t i = 0; i < ref.size(); ++i) {
    best = std::max(best, std::abs(f.bounded_eval(ref[i]) - g.bounded_eval(ref[i])));
  }
  return best;
}

namespace {

void require_compact_support(const PwConstant& h) {
  if (std::abs(h.left_tail()) > 0.0 || std::abs(h.right_tail()) > 0.0) {
    throw Unbounded("integrand has non-vanishing tails");
  }
}

}  // namespace

double l1_norm(const PwConstant& h) {
  require_compact_support(h);
  double total = 0.0;
  for (std::size_t i = 1; i < h.grid.size(); ++i) {
    total += std::abs(h.cells[i]) * (h.grid[i] - h.grid[i - 1]);
  }
  return total;
}

double l2_norm(const PwConstant& h) {
  require_compact_support(h);
  double total = 0.0;
  for (std::size_t i = 1; i < h.grid.size(); ++i) {
    total += h.cells[i] * h.cells[i] * (h.grid[i] - h.grid[i - 1]);
  }
  return std::sqrt(total);
}

double l1_norm(const PwLinear& h) {
  if (h.identity_coefficient() != 0) throw Unbounded("identity part in L1 integrand");
  if (std::abs(h.bounded_left_tail()) > 0.0 || std::abs(h.bounded_right_tail()) > 0.0) {
    throw Unbounded("L1 integrand has non-vanishing tails");
  }
  const Grid& g = h.grid();
  double total = 0.0;
  for (std::size_t i = 1; i < g.size(); ++i) {
    double w = g[i] - g[i - 1];
    double a = h.bounded_values()[i - 1], b = h.bounded_values()[i];
    if (a * b >= 0.0) {
      total += 0.5 * std::abs(a + b) * w;
    } else {
      // Sign change inside the cell: split at the root.
      double root = w * a / (a - b);
      total += 0.5 * std::abs(a) * root + 0.5 * std::abs(b) * (w - root);
    }
  }
  return total;
}

double l2_norm(const PwLinear& h) {
  if (h.identity_coefficient() != 0) throw Unbounded("identity part in L2 integrand");
  if (std::abs(h.bounded_left_tail()) > 0.0 || std::abs(h.bounded_right_tail()) > 0.0) {
    throw Unbounded("L2 integrand has non-vanishing tails");
  }
  const Grid& g = h.grid();
  double total = 0.0;
  for (std::size_t i = 1; i < g.size(); ++i) {
    double w = g[i] - g[i - 1];
    double a = h.bounded_values()[i - 1], b = h.bounded_values()[i];
    total += w / 3.0 * (a * a + a * b + b * b);
  }
  return std::sqrt(total);
}

Measure::Measure(PwConstant density, std::vector<Atom> atoms)
    : density_(std::move(density)), atoms_(std::move(atoms)) {
  if (std::abs(density_.left_tail()) > 0.0 ||
      std::abs(density_.right_tail()) > 0.0) {
    throw InvalidInput("measure density must have vanishing tails");
  }
  for (double& c : density_.cells) {
    if (c < -tol::value) {
      throw InvalidInput("measure density must be nonnegative");
    }
    if (c < 0.0) c = 0.0;  // rounding noise from cumulative sums
  }
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& a, const Atom& b) { return a.x < b.x; });
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].mass <= 0.0) throw InvalidInput("atom mass must be positive");
    if (i > 0 && atoms_[i].x - atoms_[i - 1].x <= tol::coord) {
      throw InvalidInput("atom positions must be distinct");
    }
  }
}

double Measure::total_mass() const {
  double total = density_.integral();
  for (const Atom& a : atoms_) total += a.mass;
  return total;
}

double Measure::cumulative_left(double x) const {
  double total = 0.0;
  const Grid& g = density_.grid;
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (x <= g[i - 1]) break;
    total += density_.cells[i] * (std::min(x, g[i]) - g[i - 1]);
  }
  for (const Atom& a : atoms_) {
    if (a.x < x) total += a.mass;
  }
  return total;
}

double Measure::cumulative_right(double x) const {
  double total = cumulative_left(x);
  for (const Atom& a : atoms_) {
    if (a.x == x) total += a.mass;
  }
  return total;
}

SignedMeasure SignedMeasure::difference(const Measure& a, const Measure& b) {
  Grid g = common_refinement(a.density().grid, b.density().grid);
  PwConstant da = a.density().refined(g);
  PwConstant db = b.density().refined(g);
  std::vector<double> cells(g.size() + 1);
  for (std::size_t i = 0; i <= g.size(); ++i) cells[i] = da.cells[i] - db.cells[i];
  std::vector<Atom> atoms;
  for (const Atom& at : a.atoms()) atoms.push_back(at);
  for (const Atom& at : b.atoms()) atoms.push_back({at.x, -at.mass});
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& p, const Atom& q) { return p.x < q.x; });
  std::vector<Atom> merged;
  for (const Atom& at : atoms) {
    if (!merged.empty() && at.x - merged.back().x <= tol::coord) {
      merged.back().mass += at.mass;
    } else {
      merged.push_back(at);
    }
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const Atom& at) { return at.mass == 0.0; }),
               merged.end());
  return SignedMeasure{PwConstant(std::move(g), std::move(cells)), std::move(merged)};
}

Measure pushforward(const PwLinear& y, const PwConstant& weight) {
  if (y.identity_coefficient() != 1) {
    throw InvalidInput("push-forward map must be onto R");
  }
  if (!y.is_nondecreasing(tol::slope_floor)) {
    throw InvalidInput("push-forward map must be nondecreasing");
  }
  Grid g = common_refinement(y.grid(), weight.grid);
  PwLinear yy = y.refined(g);
  PwConstant w = weight.refined(g);
  if (std::abs(w.left_tail()) > 0.0 || std::abs(w.right_tail()) > 0.0) {
    throw InvalidInput("push-forward weight must have compact support");
  }

  if (g.empty()) return Measure();

  std::vector<double> bps{yy.value_at(0)};  // image breakpoints
  std::vector<double> vals;                 // density between consecutive ones
  std::vector<Atom> atoms;
  auto add_atom = [&](double x, double mass) {
    if (mass <= 0.0) return;
    if (!atoms.empty() && x - atoms.back().x <= tol::coord) {
      atoms.back().mass += mass;
    } else {
      atoms.push_back({x, mass});
    }
  };

  for (std::size_t i = 1; i < g.size(); ++i) {
    double dxi = g[i] - g[i - 1];
    double xl = yy.value_at(i - 1), xr = yy.value_at(i);
    double wv = w.cells[i];
    // Only image intervals at the coordinate resolution limit concentrate
    // into atoms; steep-but-resolved cells stay absolutely continuous.
    if (xr - xl <= 1e-13 * (1.0 + std::abs(xl))) {
      add_atom(bps.back(), wv * dxi);
    } else {
      vals.push_back(wv * dxi / (xr - xl));
      bps.push_back(xr);
    }
  }

  std::vector<double> cells;
  cells.reserve(vals.size() + 2);
  cells.push_back(0.0);
  cells.insert(cells.end(), vals.begin(), vals.end());
  cells.push_back(0.0);
  return Measure(PwConstant(Grid(std::move(bps)), std::move(cells)),
                 std::move(atoms));
}

double cumulative_sup_diff(const Measure& a, const Measure& b) {
  // Probes sit a hair away from every breakpoint and atom, so that atom
  // positions agreeing only up to rounding are not counted as mass
  // differences.
  const double nudge = 1e-9;
  std::vector<double> probes;
  auto add = [&](double x) {
    probes.push_back(x - nudge);
    probes.push_back(x + nudge);
  };
  for (double p : a.density().grid.points()) add(p);
  for (double p : b.density().grid.points()) add(p);
  for (const Atom& at : a.atoms()) add(at.x);
  for (const Atom& at : b.atoms()) add(at.x);
  double best = 0.0;
  for (double x : probes) {
    best = std::max(best, std::abs(a.cumulative_left(x) - b.cumulative_left(x)));
  }
  return best;
}

}  // namespace hs

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hs/golden.hpp"
#include "hs/metric.hpp"
#include "hs/scenario.hpp"
#include "hs/solver.hpp"

namespace {

using nlohmann::json;

struct GlobalFlags {
  double tol = 1e-7;
  bool alpha_term = true;
  hs::W1InfRule w1inf = hs::W1InfRule::Max;
  bool emit_json = false;
};

hs::Scenario resolve_scenario(const std::string& ref) {
  if (std::filesystem::exists(ref)) return hs::load_scenario(ref);
  if (auto s = hs::builtin_scenario(ref)) return *s;
  throw hs::InvalidInput("no scenario file or built-in named '" + ref + "'");
}

std::string format_time(double t) {
  std::ostringstream os;
  os << t;
  std::string s = os.str();
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

void write_u_csv(const std::string& path, const hs::EulerianY& y) {
  std::ofstream out(path);
  out.precision(17);
  std::vector<double> xs = y.u.grid().points();
  double lo = xs.empty() ? -1.0 : xs.front() - 1.0;
  double hi = xs.empty() ? 1.0 : xs.back() + 1.0;
  for (int i = 0; i < 256; ++i) {
    xs.push_back(lo + (hi - lo) * i / 255.0);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  out << "x,u\n";
  for (double x : xs) out << x << "," << y.u.eval(x) << "\n";
}

void write_cumulative_csv(const std::string& path, const hs::EulerianY& y) {
  std::ofstream out(path);
  out.precision(17);
  std::vector<double> xs;
  for (double p : y.mu.density().grid.points()) xs.push_back(p);
  for (double p : y.nu.density().grid.points()) xs.push_back(p);
  for (const hs::Atom& a : y.mu.atoms()) xs.push_back(a.x);
  for (const hs::Atom& a : y.nu.atoms()) xs.push_back(a.x);
  double lo = xs.empty() ? -1.0 : *std::min_element(xs.begin(), xs.end()) - 1.0;
  double hi = xs.empty() ? 1.0 : *std::max_element(xs.begin(), xs.end()) + 1.0;
  for (int i = 0; i < 256; ++i) xs.push_back(lo + (hi - lo) * i / 255.0);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  out << "x,F_mu,F_nu\n";
  for (double x : xs) {
    out << x << "," << y.mu.cumulative_left(x) << "," << y.nu.cumulative_left(x)
        << "\n";
  }
}

int cmd_validate(const std::string& ref, const GlobalFlags& flags) {
  hs::Scenario s;
  try {
    s = resolve_scenario(ref);
  } catch (const std::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  }
  hs::ValidationReport rep = s.validate();
  if (flags.emit_json) {
    json j;
    j["name"] = s.name;
    j["valid"] = rep.valid();
    json v = json::array();
    for (const hs::Violation& x : rep.violations) {
      v.push_back({{"invariant", x.invariant},
                   {"location", x.location},
                   {"magnitude", x.magnitude}});
    }
    j["violations"] = v;
    std::cout << j.dump(2) << "\n";
  } else {
    if (rep.valid()) {
      std::cout << "scenario '" << s.name << "' is valid\n";
    } else {
      std::cout << rep.str();
    }
  }
  return rep.valid() ? 0 : 1;
}

int cmd_solve(const std::string& ref, std::vector<double> times,
              const std::string& out_dir, const GlobalFlags& flags) {
  hs::Scenario s;
  try {
    s = resolve_scenario(ref);
  } catch (const std::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  }
  if (times.empty()) times = s.sample_times;
  if (times.empty()) times = {0.0};
  std::filesystem::create_directories(out_dir);
  double horizon = *std::max_element(times.begin(), times.end());
  hs::Trajectory traj = hs::evolve(s.as_lagrangian(), horizon);
  json index;
  index["name"] = s.name;
  index["times"] = times;
  for (double t : times) {
    hs::EulerianY yt = hs::to_eulerian_unchecked(traj.state_at(t));
    std::string tag = format_time(t);
    write_u_csv(out_dir + "/u_t" + tag + ".csv", yt);
    write_cumulative_csv(out_dir + "/cum_t" + tag + ".csv", yt);
    json atoms = json::array();
    for (const hs::Atom& a : yt.mu.atoms()) {
      atoms.push_back({{"x", a.x}, {"mass", a.mass}});
    }
    std::ofstream aout(out_dir + "/atoms_t" + tag + ".json");
    aout << atoms.dump(2) << "\n";
    std::ofstream sout(out_dir + "/state_t" + tag + ".json");
    sout << hs::eulerian_snapshot(yt, s.name + "@t=" + format_time(t)).dump(2)
         << "\n";
  }
  if (flags.emit_json) std::cout << index.dump(2) << "\n";
  return 0;
}

int cmd_distance(const std::string& ref_a, const std::string& ref_b,
                 const std::string& level, std::vector<double> times,
                 const GlobalFlags& flags) {
  hs::Scenario sa, sb;
  try {
    sa = resolve_scenario(ref_a);
    sb = resolve_scenario(ref_b);
  } catch (const std::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  }
  if (times.empty()) times = {0.0};
  double horizon = *std::max_element(times.begin(), times.end());
  hs::Trajectory ta = hs::evolve(sa.as_lagrangian(), horizon);
  hs::Trajectory tb = hs::evolve(sb.as_lagrangian(), horizon);
  hs::MetricOptions mopts{flags.alpha_term};
  hs::OptimizerBudget budget;
  json rows = json::array();
  std::cout.precision(12);
  for (double t : times) {
    hs::LagrangianX xa = ta.state_at(t);
    hs::LagrangianX xb = tb.state_at(t);
    json row;
    row["t"] = t;
    row["level"] = level;
    if (level == "D") {
      hs::MetricReport r = hs::semi_metric_D(xa, xb, hs::DVariant::General, mopts);
      row["total"] = r.total;
      row["terms"] = {{"sup_y", r.sup_y},       {"sup_U", r.sup_U},
                      {"l2_y_slope", r.l2_y_slope}, {"l2_U_slope", r.l2_U_slope},
                      {"sup_H", r.sup_H},       {"g_l1", r.g_l1_term},
                      {"g_l2", r.g_l2_term},    {"alpha", r.alpha_term}};
      if (!flags.emit_json) {
        std::cout << "t=" << t << "  D=" << r.total << "  [sup_y=" << r.sup_y
                  << " sup_U=" << r.sup_U << " l2_y'=" << r.l2_y_slope
                  << " l2_U'=" << r.l2_U_slope << " sup_H=" << r.sup_H
                  << " G1=" << r.g_l1_term << " G2=" << r.g_l2_term
                  << " alpha=" << r.alpha_term << "]\n";
      }
    } else {
      hs::DistanceBracket b;
      if (level == "J") {
        b = hs::j_bracket(xa, xb, budget, mopts);
      } else if (level == "dhat") {
        b = hs::dhat_bracket(xa, xb, budget, mopts);
      } else if (level == "euler") {
        hs::EulerianY ya = hs::to_eulerian_unchecked(xa);
        hs::EulerianY yb = hs::to_eulerian_unchecked(xb);
        b = hs::euler_distance(ya, yb, budget, mopts);
      } else if (level == "quotient") {
        hs::EulerianY ya = hs::to_eulerian_unchecked(xa);
        hs::EulerianY yb = hs::to_eulerian_unchecked(xb);
        hs::EulerianZ za{ya.u, ya.mu, ya.alpha};
        hs::EulerianZ zb{yb.u, yb.mu, yb.alpha};
        std::vector<hs::Measure> fam_a{ya.nu};
        std::vector<hs::Measure> fam_b{yb.nu};
        if (t == 0.0) {
          for (const hs::Measure& m : sa.nu_candidates) fam_a.push_back(m);
          for (const hs::Measure& m : sb.nu_candidates) fam_b.push_back(m);
        }
        b = hs::euler_quotient_bracket(za, zb, fam_a, fam_b, budget, mopts,
                                       flags.w1inf);
      } else {
        std::cerr << "unknown level: " << level << "\n";
        return 2;
      }
      row["lower"] = b.lower;
      row["upper"] = b.upper;
      row["witness"] = b.witness;
      if (!flags.emit_json) {
        std::cout << "t=" << t << "  " << level << " in [" << b.lower << ", "
                  << b.upper << "]  (" << b.witness << ")\n";
      }
    }
    rows.push_back(row);
  }
  if (flags.emit_json) std::cout << rows.dump(2) << "\n";
  return 0;
}

int cmd_lipschitz(const std::string& ref_a, const std::string& ref_b,
                  const std::string& level, std::vector<double> times,
                  const GlobalFlags& flags) {
  hs::Scenario sa, sb;
  try {
    sa = resolve_scenario(ref_a);
    sb = resolve_scenario(ref_b);
  } catch (const std::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  }
  if (times.empty()) times = {0.5, 1.0, 2.0, 3.0};
  double horizon = *std::max_element(times.begin(), times.end());
  hs::LagrangianX xa0 = sa.as_lagrangian();
  hs::LagrangianX xb0 = sb.as_lagrangian();
  hs::Trajectory ta = hs::evolve(xa0, horizon);
  hs::Trajectory tb = hs::evolve(xb0, horizon);
  hs::MetricOptions mopts{flags.alpha_term};
  hs::OptimizerBudget budget;

  bool constant_pair = xa0.alpha.is_constant() && xb0.alpha.is_constant();
  bool all_pass = true;
  json rows = json::array();
  std::cout.precision(12);

  auto emit = [&](double t, const std::string& label, double lhs, double rhs) {
    double margin = rhs - lhs;
    bool pass = lhs <= rhs + flags.tol;
    all_pass = all_pass && pass;
    rows.push_back({{"t", t},
                    {"level", label},
                    {"lhs", lhs},
                    {"rhs", rhs},
                    {"margin", margin},
                    {"verdict", pass ? "PASS" : "FAIL"}});
    if (!flags.emit_json) {
      std::cout << "t=" << t << "  " << label << "  lhs=" << lhs
                << "  rhs=" << rhs << "  margin=" << margin << "  "
                << (pass ? "PASS" : "FAIL") << "\n";
    }
  };

  if (level == "D") {
    hs::MetricReport base = hs::semi_metric_D(xa0, xb0, hs::DVariant::General, mopts);
    for (double t : times) {
      hs::MetricReport now = hs::semi_metric_D(ta.state_at(t), tb.state_at(t),
                                               hs::DVariant::General, mopts);
      emit(t, "D", now.total, std::exp(base.c_pair * t) * base.total);
      if (constant_pair) {
        emit(t, "D(const-alpha rate)", now.total,
             std::exp(hs::kConstantAlphaRate * t) * base.total);
      }
    }
  } else if (level == "dhat") {
    hs::DistanceBracket base = hs::dhat_bracket(xa0, xb0, budget, mopts);
    double rate = hs::semi_metric_D(xa0, xb0, hs::DVariant::General, mopts).r_rate;
    for (double t : times) {
      hs::DistanceBracket now =
          hs::dhat_bracket(ta.state_at(t), tb.state_at(t), budget, mopts);
      emit(t, "dhat", now.lower, std::exp(rate * t) * base.upper);
      if (constant_pair) {
        emit(t, "dhat(const-alpha rate)", now.lower,
             std::exp(hs::kConstantAlphaRate * t) * base.upper);
      }
    }
  } else {
    std::cerr << "unknown level: " << level << "\n";
    return 2;
  }
  if (flags.emit_json) std::cout << rows.dump(2) << "\n";
  return all_pass ? 0 : 1;
}

int cmd_example(const std::string& name, const GlobalFlags& flags) {
  bool all_pass = true;
  json rows = json::array();
  std::cout.precision(12);
  auto check = [&](const std::string& label, double err, double tolerance) {
    bool pass = err <= tolerance;
    all_pass = all_pass && pass;
    rows.push_back({{"check", label},
                    {"error", err},
                    {"tolerance", tolerance},
                    {"verdict", pass ? "PASS" : "FAIL"}});
    if (!flags.emit_json) {
      std::cout << label << ": error=" << err << " tol=" << tolerance << "  "
                << (pass ? "PASS" : "FAIL") << "\n";
    }
  };

  if (name == "exmp1") {
    hs::EulerianY y0 = hs::golden::triangle_initial();
    hs::Trajectory traj = hs::evolve(hs::to_lagrangian(y0), 3.0);
    for (double t : {0.0, 1.0, 2.0, 3.0}) {
      hs::EulerianY yt = hs::to_eulerian_unchecked(traj.state_at(t));
      double err = 0.0;
      for (int i = 0; i < 512; ++i) {
        double x = -6.0 + 12.0 * i / 511.0;
        err = std::max(err, std::abs(yt.u.eval(x) - hs::golden::triangle_u(x, t)));
      }
      check("u closed form at t=" + format_time(t), err, 1e-10);
    }
    hs::EulerianY y2 = hs::to_eulerian_unchecked(traj.state_at(2.0));
    double atom_err = 1.0;
    if (y2.mu.atoms().size() == 1) {
      atom_err = std::max(std::abs(y2.mu.atoms()[0].x - 2.0),
                          std::abs(y2.mu.atoms()[0].mass - 0.5));
    }
    check("single atom (x=2, mass=1/2) at t=2", atom_err, 1e-10);
  } else if (name == "adiss") {
    hs::EulerianY ya0 = hs::golden::plateau_initial(hs::golden::plateau_alpha_const());
    hs::EulerianY yb0 = hs::golden::plateau_initial(hs::golden::plateau_alpha_bump());
    hs::Trajectory ta = hs::evolve(hs::to_lagrangian(ya0), 3.0);
    hs::Trajectory tb = hs::evolve(hs::to_lagrangian(yb0), 3.0);
    for (double t : {1.0, 3.0}) {
      hs::LagrangianX xt = ta.state_at(t);
      double err = 0.0;
      for (int i = 0; i < 512; ++i) {
        double xi = -6.0 + 14.0 * i / 511.0;
        err = std::max(err, std::abs(xt.y.eval(xi) - hs::golden::plateau_y(xi, t)));
        err = std::max(err,
                       std::abs(xt.U.eval(xi) - hs::golden::plateau_velocity(xi, t)));
        err = std::max(err,
                       std::abs(xt.V.eval(xi) - hs::golden::plateau_energy(xi, t)));
      }
      check("Lagrangian closed forms at t=" + format_time(t), err, 1e-10);
    }
    check("total energy drop to 4/3 at t=2",
          std::abs(ta.v_infinity(2.0) - 4.0 / 3.0), 1e-10);
    for (double t : {1.0, 2.0, 3.0}) {
      hs::EulerianY ea = hs::to_eulerian_unchecked(ta.state_at(t));
      hs::EulerianY eb = hs::to_eulerian_unchecked(tb.state_at(t));
      double err = hs::sup_norm_diff(ea.u, eb.u);
      err = std::max(err, hs::cumulative_sup_diff(ea.mu, eb.mu));
      check("alpha choice invisible in (u, mu) at t=" + format_time(t), err, 1e-10);
    }
    hs::MetricReport d = hs::semi_metric_D(ta.state_at(0.0), tb.state_at(0.0));
    double gap = hs::alpha_sup_diff(ya0.alpha, yb0.alpha);
    check("distance keeps the alpha difference visible (D >= gap > 0)",
          (d.total >= gap && gap > 0.0) ? 0.0 : 1.0, 0.5);
  } else if (name == "alphfn1") {
    hs::EulerianY y0 = hs::golden::mixed_initial();
    hs::Trajectory traj = hs::evolve(hs::to_lagrangian_unchecked(y0), 3.0);
    double ev_err = 1.0;
    if (traj.event_times().size() == 2) {
      ev_err = std::max(std::abs(traj.event_times()[0] - 1.0),
                        std::abs(traj.event_times()[1] - 2.0));
    }
    check("two events at t=1 and t=2", ev_err, 1e-10);
    check("remaining energy 1/4 after t=2",
          std::abs(traj.v_infinity(2.0) - 0.25), 1e-10);
    for (double t : {0.5, 1.5, 2.5}) {
      hs::LagrangianX xt = traj.state_at(t);
      double err = 0.0;
      for (int i = 0; i < 512; ++i) {
        double xi = -4.0 + 10.0 * i / 511.0;
        err = std::max(err, std::abs(xt.y.eval(xi) - hs::golden::mixed_y(xi, t)));
        err = std::max(err,
                       std::abs(xt.U.eval(xi) - hs::golden::mixed_velocity(xi, t)));
        err = std::max(err,
                       std::abs(xt.V.eval(xi) - hs::golden::mixed_energy(xi, t)));
      }
      check("Lagrangian closed forms at t=" + format_time(t), err, 1e-10);
    }
    hs::LagrangianX x2 = traj.state_at(2.0);
    hs::LagrangianX xbar =
        hs::to_lagrangian_unchecked(hs::to_eulerian_unchecked(x2));
    double xbar_err = 0.0;
    hs::LagrangianX ref = hs::golden::mixed_roundtrip_state();
    xbar_err = std::max(xbar_err, hs::sup_norm_diff(xbar.y, ref.y));
    xbar_err = std::max(xbar_err, hs::sup_norm_diff(xbar.U, ref.U));
    xbar_err = std::max(xbar_err, hs::sup_norm_diff(xbar.H, ref.H));
    xbar_err = std::max(xbar_err, hs::sup_norm_diff(xbar.V, ref.V));
    check("round-trip state matches its closed form", xbar_err, 1e-10);
    std::string diag;
    bool none = !hs::is_relabelling_of(xbar, x2, &diag).has_value();
    check("round trip is not a relabelling of the evolved state",
          none ? 0.0 : 1.0, 0.5);
    if (!flags.emit_json && none) {
      std::cout << "  relabelling rejected: " << diag << "\n";
    }
  } else if (name == "nu-invariance") {
    hs::EulerianY ya0 = hs::golden::dummy_invariance_initial_a();
    hs::EulerianY yb0 = hs::golden::dummy_invariance_initial_b();
    hs::Trajectory ta = hs::evolve(hs::to_lagrangian(ya0), 3.0);
    hs::Trajectory tb = hs::evolve(hs::to_lagrangian(yb0), 3.0);
    for (double t : {1.0, 2.0, 3.0}) {
      hs::EulerianY ea = hs::to_eulerian_unchecked(ta.state_at(t));
      hs::EulerianY eb = hs::to_eulerian_unchecked(tb.state_at(t));
      double err = hs::sup_norm_diff(ea.u, eb.u);
      err = std::max(err, hs::cumulative_sup_diff(ea.mu, eb.mu));
      check("dummy measure invisible in (u, mu) at t=" + format_time(t), err,
            1e-10);
      double verr = 0.0;
      hs::LagrangianX xat = ta.state_at(t);
      hs::LagrangianX xbt = tb.state_at(t);
      for (int i = 0; i < 512; ++i) {
        double xi = -4.0 + 16.0 * i / 511.0;
        verr = std::max(verr, std::abs(xat.V.eval(xi) -
                                       hs::golden::dummy_invariance_energy_a(xi, t)));
        verr = std::max(verr, std::abs(xbt.V.eval(xi) -
                                       hs::golden::dummy_invariance_energy_b(xi, t)));
      }
      check("retained-energy closed forms at t=" + format_time(t), verr, 1e-10);
    }
  } else {
    std::cerr << "unknown example: " << name
              << " (known: exmp1, adiss, alphfn1, nu-invariance)\n";
    return 2;
  }

  if (flags.emit_json) std::cout << rows.dump(2) << "\n";
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solver and metric laboratory for piecewise-linear "
               "dissipative transport states"};
  app.require_subcommand(1);
  GlobalFlags flags;
  app.add_option("--tol", flags.tol, "slack for verdict comparisons");
  std::string alpha_term = "on";
  app.add_option("--alpha-term", alpha_term,
                 "include the alpha difference in distances (on|off)")
      ->check(CLI::IsMember({"on", "off"}));
  std::string w1inf = "max";
  app.add_option("--w1inf", w1inf,
                 "test-function norm rule for the measure norm (max|sum)")
      ->check(CLI::IsMember({"max", "sum"}));
  app.add_flag("--json", flags.emit_json, "machine-readable output");

  auto* validate = app.add_subcommand("validate", "check a scenario file");
  std::string v_ref;
  validate->add_option("scenario", v_ref)->required();

  auto* solve = app.add_subcommand("solve", "evolve and emit CSV files");
  std::string s_ref, s_out = "out";
  std::vector<double> s_times;
  solve->add_option("scenario", s_ref)->required();
  solve->add_option("--times", s_times)->delimiter(',');
  solve->add_option("--out", s_out);

  auto* dist = app.add_subcommand("distance", "distance between two scenarios");
  std::string d_a, d_b, d_level = "D";
  std::vector<double> d_times;
  dist->add_option("scenario_a", d_a)->required();
  dist->add_option("scenario_b", d_b)->required();
  dist->add_option("--level", d_level)
      ->check(CLI::IsMember({"D", "J", "dhat", "euler", "quotient"}));
  dist->add_option("--times", d_times)->delimiter(',');

  auto* lip = app.add_subcommand("lipschitz", "stability verdict table");
  std::string l_a, l_b, l_level = "D";
  std::vector<double> l_times;
  lip->add_option("scenario_a", l_a)->required();
  lip->add_option("scenario_b", l_b)->required();
  lip->add_option("--level", l_level)->check(CLI::IsMember({"D", "dhat"}));
  lip->add_option("--times", l_times)->delimiter(',');

  auto* example = app.add_subcommand("example", "run a built-in study case");
  std::string e_name;
  example->add_option("name", e_name)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  flags.alpha_term = (alpha_term == "on");
  flags.w1inf = (w1inf == "max") ? hs::W1InfRule::Max : hs::W1InfRule::Sum;

  try {
    if (validate->parsed()) return cmd_validate(v_ref, flags);
    if (solve->parsed()) return cmd_solve(s_ref, s_times, s_out, flags);
    if (dist->parsed()) return cmd_distance(d_a, d_b, d_level, d_times, flags);
    if (lip->parsed()) return cmd_lipschitz(l_a, l_b, l_level, l_times, flags);
    if (example->parsed()) return cmd_example(e_name, flags);
  } catch (const hs::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

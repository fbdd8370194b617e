#include "hs/scenario.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "hs/golden.hpp"
#include "hs/transform.hpp"

namespace hs {

using nlohmann::json;

LagrangianX Scenario::as_lagrangian() const {
  if (!eulerian) return lagrangian_state;
  return allow_invalid_alpha ? to_lagrangian_unchecked(eulerian_state)
                             : to_lagrangian(eulerian_state);
}

EulerianY Scenario::as_eulerian() const {
  if (eulerian) return eulerian_state;
  return allow_invalid_alpha ? to_eulerian_unchecked(lagrangian_state)
                             : to_eulerian(lagrangian_state);
}

ValidationReport Scenario::validate() const {
  ValidateOptions opts;
  opts.check_alpha = !allow_invalid_alpha;
  if (eulerian) return validate_eulerian(eulerian_state, opts);
  return validate_lagrangian(lagrangian_state);
}

nlohmann::json pwlinear_to_json(const PwLinear& f) {
  json j;
  j["breakpoints"] = f.grid().points();
  std::vector<double> values;
  for (std::size_t i = 0; i < f.grid().size(); ++i) values.push_back(f.value_at(i));
  if (f.grid().empty()) values.push_back(f.bounded_values()[0]);
  j["values"] = values;
  return j;
}

PwLinear pwlinear_from_json(const json& j, int identity_coefficient) {
  std::vector<double> bps = j.at("breakpoints").get<std::vector<double>>();
  std::vector<double> values = j.at("values").get<std::vector<double>>();
  if (bps.empty()) {
    double c = values.empty() ? 0.0 : values.front();
    return identity_coefficient == 0
               ? PwLinear::constant(c)
               : PwLinear::from_bounded(1, Grid(std::vector<double>{}), {c});
  }
  return PwLinear::from_values(identity_coefficient, Grid(std::move(bps)),
                               std::move(values));
}

nlohmann::json measure_to_json(const Measure& m) {
  json j;
  json dens;
  dens["breakpoints"] = m.density().grid.points();
  std::vector<double> interior;
  for (std::size_t i = 1; i < m.density().grid.size(); ++i) {
    interior.push_back(m.density().cells[i]);
  }
  dens["cells"] = interior;
  j["density"] = dens;
  json atoms = json::array();
  for (const Atom& a : m.atoms()) atoms.push_back({a.x, a.mass});
  j["atoms"] = atoms;
  return j;
}

Measure measure_from_json(const json& j) {
  PwConstant density;
  if (j.contains("density")) {
    std::vector<double> bps =
        j.at("density").at("breakpoints").get<std::vector<double>>();
    std::vector<double> interior =
        j.at("density").at("cells").get<std::vector<double>>();
    if (!bps.empty() && interior.size() + 1 != bps.size()) {
      throw InvalidInput("density needs one cell per interior interval");
    }
    std::vector<double> cells;
    cells.push_back(0.0);
    cells.insert(cells.end(), interior.begin(), interior.end());
    cells.push_back(0.0);
    if (bps.empty()) cells = {0.0};
    density = PwConstant(Grid(std::move(bps)), std::move(cells));
  }
  std::vector<Atom> atoms;
  if (j.contains("atoms")) {
    for (const auto& a : j.at("atoms")) {
      atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
    }
  }
  return Measure(std::move(density), std::move(atoms));
}

nlohmann::json alpha_to_json(const AlphaFn& a) {
  json j;
  switch (a.kind()) {
    case AlphaFn::Kind::ConstantOne:
      j["kind"] = "one";
      break;
    case AlphaFn::Kind::Constant:
      j["kind"] = "constant";
      j["value"] = a.constant_value();
      break;
    case AlphaFn::Kind::Pw:
      j["kind"] = "pw";
      j["breakpoints"] = a.piecewise().grid().points();
      {
        std::vector<double> values;
        for (std::size_t i = 0; i < a.piecewise().grid().size(); ++i) {
          values.push_back(a.piecewise().value_at(i));
        }
        j["values"] = values;
      }
      j["lipschitz"] = a.declared_lipschitz();
      break;
  }
  return j;
}

AlphaFn alpha_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "one") return AlphaFn::one();
  if (kind == "constant") return AlphaFn::constant(j.at("value").get<double>());
  if (kind == "pw") {
    PwLinear f = pwlinear_from_json(j, 0);
    double lip = j.contains("lipschitz") ? j.at("lipschitz").get<double>()
                                         : AlphaFn::pw(f, 0.0).max_abs_slope();
    return AlphaFn::pw(std::move(f), lip);
  }
  throw InvalidInput("unknown alpha kind: " + kind);
}

Scenario parse_scenario(const json& j) {
  Scenario s;
  s.name = j.value("name", "unnamed");
  std::string coords = j.value("coordinates", "eulerian");
  s.allow_invalid_alpha = j.value("allow_invalid_alpha", false);
  s.horizon = j.value("horizon", 0.0);
  if (j.contains("sample_times")) {
    s.sample_times = j.at("sample_times").get<std::vector<double>>();
  }
  AlphaFn alpha = j.contains("alpha") ? alpha_from_json(j.at("alpha"))
                                      : AlphaFn::constant(0.0);
  if (coords == "eulerian") {
    s.eulerian = true;
    PwLinear u = pwlinear_from_json(j.at("u"), 0);
    Measure mu = measure_from_json(j.at("mu"));
    Measure nu = j.contains("nu") ? measure_from_json(j.at("nu")) : mu;
    s.eulerian_state = EulerianY{std::move(u), std::move(mu), std::move(nu),
                                 std::move(alpha)};
  } else if (coords == "lagrangian") {
    s.eulerian = false;
    PwLinear y = pwlinear_from_json(j.at("y"), 1);
    PwLinear u = pwlinear_from_json(j.at("U"), 0);
    PwLinear h = pwlinear_from_json(j.at("H"), 0);
    PwLinear v = pwlinear_from_json(j.at("V"), 0);
    s.lagrangian_state = LagrangianX::on_shared_grid(
        std::move(y), std::move(u), std::move(h), std::move(v), std::move(alpha));
  } else {
    throw InvalidInput("unknown coordinates: " + coords);
  }
  if (j.contains("nu_candidates")) {
    for (const auto& cand : j.at("nu_candidates")) {
      s.nu_candidates.push_back(measure_from_json(cand));
    }
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open scenario file: " + path);
  json j = json::parse(in);
  return parse_scenario(j);
}

nlohmann::json eulerian_snapshot(const EulerianY& y, const std::string& name) {
  json j;
  j["name"] = name;
  j["coordinates"] = "eulerian";
  j["u"] = pwlinear_to_json(y.u);
  j["mu"] = measure_to_json(y.mu);
  j["nu"] = measure_to_json(y.nu);
  j["alpha"] = alpha_to_json(y.alpha);
  return j;
}

std::optional<Scenario> builtin_scenario(const std::string& name) {
  Scenario s;
  s.name = name;
  s.horizon = 5.0;
  s.sample_times = {1.0, 2.0, 3.0};
  if (name == "exmp1") {
    s.eulerian_state = golden::triangle_initial();
  } else if (name == "adiss") {
    s.eulerian_state = golden::plateau_initial(golden::plateau_alpha_const());
  } else if (name == "adiss-b") {
    s.eulerian_state = golden::plateau_initial(golden::plateau_alpha_bump());
  } else if (name == "adiss-conservative") {
    s.eulerian_state = golden::plateau_initial(AlphaFn::constant(0.0));
  } else if (name == "alphfn1") {
    s.eulerian_state = golden::mixed_initial();
    s.allow_invalid_alpha = true;
  } else if (name == "nu-invariance") {
    s.eulerian_state = golden::dummy_invariance_initial_a();
    s.nu_candidates.push_back(golden::dummy_invariance_initial_b().nu);
  } else if (name == "nu-invariance-b") {
    s.eulerian_state = golden::dummy_invariance_initial_b();
  } else {
    return std::nullopt;
  }
  return s;
}

std::vector<std::string> builtin_scenario_names() {
  return {"exmp1", "adiss", "adiss-b", "adiss-conservative", "alphfn1",
          "nu-invariance", "nu-invariance-b"};
}

}  // namespace hs

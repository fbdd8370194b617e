#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hs/eulerian.hpp"
#include "hs/lagrangian.hpp"

namespace hs {

/// A scenario file: one state in either coordinate system plus run settings.
struct Scenario {
  std::string name;
  bool eulerian = true;
  EulerianY eulerian_state;
  LagrangianX lagrangian_state;
  double horizon = 0.0;
  std::vector<double> sample_times;
  std::vector<Measure> nu_candidates;
  bool allow_invalid_alpha = false;

  LagrangianX as_lagrangian() const;
  EulerianY as_eulerian() const;
  ValidationReport validate() const;
};

Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);

nlohmann::json measure_to_json(const Measure& m);
Measure measure_from_json(const nlohmann::json& j);
nlohmann::json pwlinear_to_json(const PwLinear& f);
PwLinear pwlinear_from_json(const nlohmann::json& j, int identity_coefficient);
nlohmann::json alpha_to_json(const AlphaFn& a);
AlphaFn alpha_from_json(const nlohmann::json& j);

/// Snapshot of an Eulerian state as a scenario document.
nlohmann::json eulerian_snapshot(const EulerianY& y, const std::string& name);

/// Built-in scenarios reproducing the study cases; nullopt for unknown names.
std::optional<Scenario> builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();

}  // namespace hs

#pragma once

#include <optional>

#include "mats/instances.hpp"
#include "mats/solver.hpp"

namespace mats {

/// Flat keyed run configuration (INI-style sections, two levels deep).
/// Unknown keys are rejected; the resolved form with every default filled in
/// is emitted next to the outputs so a run can be reproduced exactly.
struct RunConfig {
  std::uint64_t seed = 1;

  // [problem]
  std::string preset;  // golden instance name; overrides the model block
  std::string model = "zero";
  std::string domain = "rectangle";
  Vec2 lower{-0.5, -0.5};
  Vec2 upper{0.5, 0.5};
  Vec2 center{0.0, 0.0};
  double radius = 1.0;
  double h = 0.0625;
  std::string phi = "0";
  std::string subsolution;
  std::string B = "1";
  std::string psi = "1";
  std::vector<double> map_mx{1, 0, 0, 1};
  std::vector<double> map_mp{-1, 0, 0, -1};
  std::vector<double> map_y0{0, 0};

  // [solver]
  SolverConfig solver;

  // [checks]
  std::vector<std::string> checks;
  int samples_x = 64;
  int samples_p = 64;
  int directions = 64;
  Vec2 p_lower{-0.9, -0.9};
  Vec2 p_upper{0.9, 0.9};
  double mu0 = 1.0;
  double delta0 = 0.1;
  std::string phibar = "r2";

  // [study]
  std::vector<double> h_list;
  std::string reference;

  // [output]
  std::string out_dir = "out";
  bool csv = true;
  bool vtk = false;
  bool trace = true;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Canonical text with every key present; reparsing it reproduces the run.
std::string resolved_config_text(const RunConfig& cfg);

/// The problem an instance block describes, with its cost model and
/// transport density when the model is cost- or mapping-generated.
struct ProblemBundle {
  ProblemSpec problem;
  ScalarFn exact;  // empty unless a preset carries one
  std::optional<CostModel> cost;
  std::function<double(const VectorXd&, const VectorXd&)> psi;
};

ProblemBundle problem_from_config(const RunConfig& cfg);

}  // namespace mats

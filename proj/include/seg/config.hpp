#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "seg/boundary.hpp"
#include "seg/eps_solver.hpp"
#include "seg/grid.hpp"
#include "seg/limit_solver.hpp"
#include "seg/verifier.hpp"

namespace seg {

/// Malformed or invalid configuration; what() carries file:line context.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  ShapeSpec shape;
  int resolution = 0;

  std::size_t species = 0;
  Profile profile = Profile::raised_cosine;
  std::vector<std::vector<Arc>> arcs;

  SolverOptions solver;
  std::vector<double> ladder;
  LimitOptions limit;

  /// Verifier tolerances relative to the boundary amplitude.
  Tolerances relative_tolerances;
  double lemma_slack = 1e-9;

  std::filesystem::path out_dir = "out";
  std::filesystem::path source;
};

/// Parses the sectioned key = value format. Unknown sections or keys are errors.
RunConfig parse_config(const std::string& text, const std::filesystem::path& origin = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Applies SEGLV_* environment overrides (see README).
void apply_env_overrides(RunConfig& cfg);

Grid make_grid(const RunConfig& cfg);
BoundarySpec make_boundary(const RunConfig& cfg, const Grid& g);

/// Relative tolerances scaled by the boundary amplitude.
Tolerances absolute_tolerances(const RunConfig& cfg, const BoundarySpec& bc);

}  // namespace seg

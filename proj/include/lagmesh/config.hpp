#pragma once

// Pipeline configuration: a key=value file with [sections], overridable
// from the command line.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lagmesh/solver.hpp"

namespace lagmesh {

struct PipelineConfig {
  // [pipeline]
  std::string spec = "clifford";
  int n = 16;
  double chart_angle = 0.0;  // reference isometry = rotation by this angle
  std::uint64_t seed = 1;
  // [solver]
  SolveOptions solver;
  double iso_tol = 0.0;  // 0 selects 10 * tol / N^2
  // [certify]
  double immersion_tol = 1e-3;
  bool embedding_check = false;
  int oversample = 4;
  // [output]
  std::string out_dir = "lagmesh_out";
  std::optional<std::array<int, 3>> projection;
  // [study]
  std::vector<int> n_list = {8, 16, 32, 64};

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// Reads an INI-style file.  Unknown sections or keys are rejected.
PipelineConfig load_config(const std::string& path);
PipelineConfig parse_config(const std::string& text);

/// Every key with its default, as printed by --help.
std::string config_reference();

std::vector<int> parse_int_list(const std::string& text);

}  // namespace lagmesh

#pragma once

// End-to-end pipeline runs and convergence studies.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "lagmesh/config.hpp"
#include "lagmesh/immersion.hpp"
#include "lagmesh/mesh.hpp"
#include "lagmesh/plmap.hpp"
#include "lagmesh/solver.hpp"

namespace lagmesh {

enum class Stage { Sample, Solve, Refine, Build, Verify };

const char* stage_name(Stage stage);

struct StageTimes {
  double sample = 0.0;
  double solve = 0.0;
  double refine = 0.0;
  double certify = 0.0;
};

struct PipelineResult {
  int n = 0;
  Stage last_stage = Stage::Sample;
  ImmersionSpec spec;
  Chart chart;

  TriMesh sampled;      // tau'_N: corners and facet centers sampled from the map
  QuadMesh projected;   // rho_N
  SolveReport solve;
  TriMesh refined;      // rho'_N
  PLMap pl;             // PL map of rho'_N
  double iso_tol = 0.0;

  // sample stage
  double mu_c0 = 0.0;
  double mu_c1w = 0.0;
  double mu_holder = 0.0;
  double max_liouville = 0.0;
  double mu_sum = 0.0;
  // refine stage
  double tri_c0 = 0.0;        // |rho'_N - tau'_N|
  double barycentric_c0 = 0.0;
  // build stage
  double pl_c0 = 0.0;
  double pl_c1 = 0.0;
  double interp_c0 = 0.0;     // plain interpolant of tau'_N
  // verify stage
  double isotropy_max = 0.0;      // max |omega pullback| / scale^2
  double liouville_agreement = 0.0;
  ImmersionVerdict immersion;
  std::optional<EmbeddingVerdict> embedding;

  StageTimes times;

  /// Meshes that the last stage produced, for export.
  const PLMap& output_map() const { return pl; }
  bool certified() const {
    return immersion.passed && (!embedding || embedding->passed) && isotropy_max <= 1e-9;
  }
};

/// Runs the pipeline up to and including `until`.  Solver and refinement
/// errors are rethrown with the stage name prefixed to the message.
PipelineResult run_pipeline(const PipelineConfig& config, Stage until = Stage::Verify);

/// Machine-readable report; contains no timings, so identical inputs give
/// identical bytes.
nlohmann::json report_json(const PipelineResult& result, const PipelineConfig& config);

/// Least-squares slope of log(value) against log(N).  Throws
/// NonPositiveValue on a nonpositive value, ConfigError with < 2 pairs.
double fit_slope(const std::vector<std::pair<double, double>>& pairs);

struct StudyRow {
  int n = 0;
  double mu_c0 = 0.0;
  double mu_c1w = 0.0;
  double mu_holder = 0.0;
  double correction_c0 = 0.0;
  double tri_c0 = 0.0;
  double pl_c0 = 0.0;
  double pl_c1 = 0.0;
  bool immersion = false;
  std::optional<bool> embedding;  // empty when not checked
  StageTimes times;
  double interp_c0 = 0.0;
  double max_liouville = 0.0;
  std::optional<std::string> failure;  // set when the pipeline failed at this N
};

struct StudyResult {
  std::vector<StudyRow> rows;
  /// Slope per norm column; NaN when a column cannot be fitted (fewer than
  /// two successful rows, or a zero entry as on exactly isotropic samples).
  std::map<std::string, double> slopes;
};

/// Norm columns in table order.
const std::vector<std::string>& study_norm_columns();
double study_column(const StudyRow& row, const std::string& column);

/// n_list must hold at least three entries, each twice the previous one.
StudyResult convergence_study(const PipelineConfig& config, const std::vector<int>& n_list);

void write_study_table(const StudyResult& study, std::ostream& out, bool with_times = true);
nlohmann::json study_json(const StudyResult& study, const PipelineConfig& config);

}  // namespace lagmesh

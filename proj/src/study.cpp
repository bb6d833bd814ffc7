#include "lagmesh/study.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "lagmesh/density.hpp"
#include "lagmesh/errors.hpp"
#include "lagmesh/refine.hpp"

namespace lagmesh {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Rethrows the active lagmesh error with a stage label, keeping its type.
[[noreturn]] void relabel(const char* stage) {
  try {
    throw;
  } catch (const NotIsotropic& e) {
    throw NotIsotropic(std::string(stage) + ": " + e.what(), e.facet());
  } catch (const MaxIterExceeded& e) {
    throw MaxIterExceeded(std::string(stage) + ": " + e.what());
  } catch (const LinearSolveFailure& e) {
    throw LinearSolveFailure(std::string(stage) + ": " + e.what());
  }
}

double max_or_zero(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.maxCoeff(); }

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

const char* stage_name(Stage stage) {
  switch (stage) {
    case Stage::Sample: return "sample";
    case Stage::Solve: return "solve";
    case Stage::Refine: return "refine";
    case Stage::Build: return "build";
    case Stage::Verify: return "verify";
  }
  return "unknown";
}

PipelineResult run_pipeline(const PipelineConfig& config, Stage until) {
  config.validate();
  PipelineResult r;
  r.n = config.n;
  r.spec = spec_by_name(config.spec);
  r.chart = build_chart(r.spec.gamma_basis, rotation(config.chart_angle), config.n);

  auto start = Clock::now();
  r.sampled = sample_tri(r.spec, r.chart);
  const QuadMesh tau = r.sampled.quad();
  const FacetField mu = symplectic_density(tau);
  r.mu_c0 = c0_norm(mu);
  r.mu_c1w = c1w_norm(mu);
  WeakNorm holder{NormKind::HolderWeak};
  holder.seed = config.seed;
  r.mu_holder = weak_norm(mu, holder);
  r.max_liouville = max_facet_liouville(tau);
  r.mu_sum = mu.values().sum();
  r.projected = tau;
  r.times.sample = seconds_since(start);
  r.last_stage = Stage::Sample;
  r.pl = PLMap(r.sampled);
  if (until == Stage::Sample) return r;

  start = Clock::now();
  try {
    std::tie(r.projected, r.solve) = project_isotropic(tau, config.solver);
  } catch (const Error&) {
    relabel("solve");
  }
  r.times.solve = seconds_since(start);
  r.last_stage = Stage::Solve;
  r.pl = PLMap(barycentric_apexes(r.projected));
  if (until == Stage::Solve) return r;

  start = Clock::now();
  r.iso_tol = config.iso_tol > 0.0 ? config.iso_tol : default_iso_tol(config.solver.tol, config.n);
  try {
    r.refined = apex_refine(r.projected, r.iso_tol);
  } catch (const Error&) {
    relabel("refine");
  }
  r.tri_c0 = std::max(c0_distance(r.refined.corners(), r.sampled.corners()),
                      c0_distance(r.refined.apexes(), r.sampled.apexes()));
  r.barycentric_c0 = c0_distance(barycentric_apexes(r.projected).apexes(), r.sampled.apexes());
  r.times.refine = seconds_since(start);
  r.last_stage = Stage::Refine;
  r.pl = PLMap(r.refined);
  if (until == Stage::Refine) return r;

  start = Clock::now();
  r.pl_c0 = distance_c0(r.pl, r.spec, config.oversample);
  r.pl_c1 = distance_c1(r.pl, r.spec, config.oversample);
  r.interp_c0 = distance_c0(PLMap(r.sampled), r.spec, config.oversample);
  r.last_stage = Stage::Build;
  if (until == Stage::Build) {
    r.times.certify = seconds_since(start);
    return r;
  }

  const Eigen::VectorXd residual = pl_isotropy_residual(r.pl);
  const Eigen::VectorXd boundary = triangle_liouville_residual(r.pl);
  const Eigen::VectorXd scales = triangle_scales(r.pl);
  double relative = 0.0;
  for (Eigen::Index t = 0; t < residual.size(); ++t) {
    const double s2 = scales(t) * scales(t);
    relative = std::max(relative, s2 > 0.0 ? residual(t) / s2 : std::numeric_limits<double>::infinity());
  }
  r.isotropy_max = relative;
  r.liouville_agreement = max_or_zero((residual - boundary).cwiseAbs());
  r.immersion = check_immersion(r.pl, config.immersion_tol);
  if (config.embedding_check) r.embedding = check_embedding(r.pl, config.immersion_tol);
  r.times.certify = seconds_since(start);
  r.last_stage = Stage::Verify;
  return r;
}

nlohmann::json report_json(const PipelineResult& r, const PipelineConfig& config) {
  using nlohmann::json;
  json j;
  j["spec"] = config.spec;
  j["n"] = r.n;
  j["chart_angle"] = config.chart_angle;
  j["seed"] = config.seed;
  j["stage"] = stage_name(r.last_stage);
  const Matrix2i64& m = r.chart.m_matrix();
  j["chart"] = {{"m_matrix", {{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}}},
                {"facets", r.chart.cell_count()}};
  j["sample"] = {{"mu_c0", r.mu_c0},
                 {"mu_c1w", r.mu_c1w},
                 {"mu_holder", r.mu_holder},
                 {"max_facet_liouville", r.max_liouville},
                 {"mu_sum", r.mu_sum}};
  if (r.last_stage >= Stage::Solve) {
    j["solve"] = {{"iterations", r.solve.iterations},
                  {"residual_c0", r.solve.residual_c0},
                  {"correction_c0", r.solve.correction_c0},
                  {"tol", config.solver.tol}};
  }
  if (r.last_stage >= Stage::Refine) {
    j["refine"] = {{"iso_tol", r.iso_tol}, {"tri_c0", r.tri_c0}, {"barycentric_c0", r.barycentric_c0}};
  }
  if (r.last_stage >= Stage::Build) {
    j["build"] = {{"pl_c0", r.pl_c0}, {"pl_c1", r.pl_c1}, {"interp_c0", r.interp_c0},
                  {"triangles", r.pl.triangle_count()}, {"vertices", r.pl.vertex_count()}};
  }
  if (r.last_stage >= Stage::Verify) {
    json verify;
    verify["isotropy_residual"] = number_or_null(r.isotropy_max);
    verify["liouville_agreement"] = r.liouville_agreement;
    verify["immersion"] = {{"passed", r.immersion.passed},
                           {"degenerate_triangles", r.immersion.degenerate_triangles},
                           {"star_conflicts", r.immersion.star_conflicts}};
    if (r.embedding) {
      verify["embedding"] = {{"passed", r.embedding->passed}, {"pairs", r.embedding->pairs}};
    } else {
      verify["embedding"] = "not checked";
    }
    verify["certified"] = r.certified();
    j["verify"] = verify;
  }
  return j;
}

double fit_slope(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 2) throw ConfigError("fit_slope needs at least two points");
  double mx = 0.0, my = 0.0;
  for (const auto& [n, v] : pairs) {
    if (!(n > 0.0)) throw NonPositiveValue("fit_slope: nonpositive abscissa " + std::to_string(n));
    if (!(v > 0.0)) throw NonPositiveValue("fit_slope: nonpositive value " + std::to_string(v));
    mx += std::log(n);
    my += std::log(v);
  }
  mx /= double(pairs.size());
  my /= double(pairs.size());
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [n, v] : pairs) {
    const double dx = std::log(n) - mx;
    sxy += dx * (std::log(v) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw ConfigError("fit_slope needs at least two distinct abscissae");
  return sxy / sxx;
}

const std::vector<std::string>& study_norm_columns() {
  static const std::vector<std::string> columns{"mu_c0", "mu_c1w", "mu_holder", "correction_c0",
                                                "tri_c0", "pl_c0", "pl_c1", "interp_c0"};
  return columns;
}

double study_column(const StudyRow& row, const std::string& column) {
  if (column == "mu_c0") return row.mu_c0;
  if (column == "mu_c1w") return row.mu_c1w;
  if (column == "mu_holder") return row.mu_holder;
  if (column == "correction_c0") return row.correction_c0;
  if (column == "tri_c0") return row.tri_c0;
  if (column == "pl_c0") return row.pl_c0;
  if (column == "pl_c1") return row.pl_c1;
  if (column == "interp_c0") return row.interp_c0;
  throw ConfigError("unknown study column '" + column + "'");
}

StudyResult convergence_study(const PipelineConfig& config, const std::vector<int>& n_list) {
  if (n_list.size() < 3) throw ConfigError("a convergence study needs at least three values of N");
  for (std::size_t i = 1; i < n_list.size(); ++i) {
    if (n_list[i] != 2 * n_list[i - 1]) throw ConfigError("study N values must double at each step");
  }
  StudyResult study;
  for (int n : n_list) {
    PipelineConfig c = config;
    c.n = n;
    StudyRow row;
    row.n = n;
    try {
      const PipelineResult r = run_pipeline(c, Stage::Verify);
      row.mu_c0 = r.mu_c0;
      row.mu_c1w = r.mu_c1w;
      row.mu_holder = r.mu_holder;
      row.correction_c0 = r.solve.correction_c0;
      row.tri_c0 = r.tri_c0;
      row.pl_c0 = r.pl_c0;
      row.pl_c1 = r.pl_c1;
      row.immersion = r.immersion.passed;
      if (r.embedding) row.embedding = r.embedding->passed;
      row.times = r.times;
      row.interp_c0 = r.interp_c0;
      row.max_liouville = r.max_liouville;
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      row.failure = e.what();
    }
    study.rows.push_back(row);
  }
  for (const std::string& column : study_norm_columns()) {
    std::vector<std::pair<double, double>> pairs;
    bool fittable = true;
    for (const StudyRow& row : study.rows) {
      if (row.failure) continue;
      const double v = study_column(row, column);
      if (!(v > 0.0)) fittable = false;
      pairs.emplace_back(row.n, v);
    }
    study.slopes[column] = (fittable && pairs.size() >= 2) ? fit_slope(pairs)
                                                           : std::numeric_limits<double>::quiet_NaN();
  }
  return study;
}

void write_study_table(const StudyResult& study, std::ostream& out, bool with_times) {
  out << "N,mu_c0,mu_c1w,mu_holder,correction_c0,tri_c0,pl_c0,pl_c1,immersion,embedding";
  if (with_times) out << ",t_sample,t_solve,t_refine,t_certify";
  out << ",interp_c0\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const StudyRow& row : study.rows) {
    const bool ok = !row.failure;
    out << row.n;
    for (const char* column : {"mu_c0", "mu_c1w", "mu_holder", "correction_c0", "tri_c0", "pl_c0", "pl_c1"}) {
      out << ',' << format_number(ok ? study_column(row, column) : nan);
    }
    out << ',' << (ok ? (row.immersion ? "pass" : "fail") : "error");
    out << ',' << (!ok ? "error" : !row.embedding ? "skipped" : *row.embedding ? "pass" : "fail");
    if (with_times) {
      for (double t : {row.times.sample, row.times.solve, row.times.refine, row.times.certify}) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", ok ? t : nan);
        out << ',' << buf;
      }
    }
    out << ',' << format_number(ok ? row.interp_c0 : nan) << '\n';
  }
  for (const StudyRow& row : study.rows) {
    if (row.failure) out << "# failed N=" << row.n << ": " << *row.failure << '\n';
  }
  for (const std::string& column : study_norm_columns()) {
    const double s = study.slopes.at(column);
    char buf[32];
    if (std::isnan(s)) {
      std::snprintf(buf, sizeof buf, "n/a");
    } else {
      std::snprintf(buf, sizeof buf, "%.4f", s);
    }
    out << "# slope " << column << ' ' << buf << '\n';
  }
}

nlohmann::json study_json(const StudyResult& study, const PipelineConfig& config) {
  using nlohmann::json;
  json rows = json::array();
  for (const StudyRow& row : study.rows) {
    json r{{"N", row.n}};
    if (row.failure) {
      r["failure"] = *row.failure;
    } else {
      for (const std::string& column : study_norm_columns()) r[column] = study_column(row, column);
      r["max_facet_liouville"] = row.max_liouville;
      r["immersion"] = row.immersion;
      r["embedding"] = row.embedding ? json(*row.embedding) : json("skipped");
    }
    rows.push_back(r);
  }
  json slopes;
  for (const auto& [column, s] : study.slopes) slopes[column] = number_or_null(s);
  return {{"spec", config.spec}, {"chart_angle", config.chart_angle}, {"seed", config.seed},
          {"rows", rows}, {"slopes", slopes}};
}

}  // namespace lagmesh

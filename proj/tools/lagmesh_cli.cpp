// lagmesh: sample, project, refine and certify PL isotropic tori.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lagmesh/config.hpp"
#include "lagmesh/errors.hpp"
#include "lagmesh/mesh_io.hpp"
#include "lagmesh/study.hpp"

namespace {

enum ExitCode { kOk = 0, kIo = 1, kConfig = 2, kSolver = 3, kCertification = 4 };

struct Overrides {
  std::string config_path;
  std::optional<std::string> spec;
  std::optional<int> n;
  std::optional<double> tol;
  std::optional<std::string> out;
  bool embedding_check = false;
  std::optional<std::uint64_t> seed;
  std::optional<double> chart_angle;
  std::optional<std::string> projection;
  std::optional<std::string> n_list;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "configuration file");
  cmd->add_option("--spec", o.spec, "clifford | flat-plane | product:<a>,<b>");
  cmd->add_option("--n", o.n, "grid resolution N");
  cmd->add_option("--tol", o.tol, "solver tolerance on max facet |mu|");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_flag("--embedding-check", o.embedding_check, "run the global embedding check");
  cmd->add_option("--seed", o.seed, "seed for sampled norms");
  cmd->add_option("--chart-angle", o.chart_angle, "rotation angle of the reference isometry");
}

lagmesh::PipelineConfig resolve(const Overrides& o) {
  lagmesh::PipelineConfig c = o.config_path.empty() ? lagmesh::PipelineConfig{}
                                                     : lagmesh::load_config(o.config_path);
  if (o.spec) c.spec = *o.spec;
  if (o.n) c.n = *o.n;
  if (o.tol) c.solver.tol = *o.tol;
  if (o.out) c.out_dir = *o.out;
  if (o.embedding_check) c.embedding_check = true;
  if (o.seed) c.seed = *o.seed;
  if (o.chart_angle) c.chart_angle = *o.chart_angle;
  if (o.projection) {
    const auto coords = lagmesh::parse_int_list(*o.projection);
    if (coords.size() != 3) throw lagmesh::ConfigError("--projection needs three coordinates");
    c.projection = std::array<int, 3>{coords[0], coords[1], coords[2]};
  }
  if (o.n_list) c.n_list = lagmesh::parse_int_list(*o.n_list);
  c.validate();
  return c;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw lagmesh::IoError("cannot write '" + path.string() + "'");
  out << text;
}

std::filesystem::path prepare_out(const lagmesh::PipelineConfig& c) {
  std::filesystem::path dir(c.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw lagmesh::IoError("cannot create '" + dir.string() + "': " + ec.message());
  return dir;
}

int run_stage(const Overrides& o, lagmesh::Stage stage, bool do_export) {
  const lagmesh::PipelineConfig c = resolve(o);
  const auto dir = prepare_out(c);
  const lagmesh::PipelineResult r = lagmesh::run_pipeline(c, stage);
  const std::string stem = (dir / lagmesh::stage_name(stage)).string();
  if (do_export) {
    lagmesh::export_mesh(r.output_map(), (dir / "mesh").string(),
                         c.projection.value_or(std::array<int, 3>{0, 1, 2}));
  } else {
    lagmesh::write_symmesh(lagmesh::to_symmesh(r.output_map()), stem + ".symmesh");
  }
  write_text(dir / "report.json", lagmesh::report_json(r, c).dump(2) + "\n");
  std::cout << lagmesh::stage_name(r.last_stage) << ": N=" << r.n << " facets=" << r.chart.cell_count()
            << " mu_c0=" << r.mu_c0;
  if (stage >= lagmesh::Stage::Solve) std::cout << " iterations=" << r.solve.iterations;
  if (stage >= lagmesh::Stage::Build) std::cout << " pl_c0=" << r.pl_c0 << " pl_c1=" << r.pl_c1;
  if (stage >= lagmesh::Stage::Verify) {
    std::cout << " isotropy=" << r.isotropy_max << " immersion=" << (r.immersion.passed ? "pass" : "fail")
              << " embedding=" << (!r.embedding ? "skipped" : r.embedding->passed ? "pass" : "fail");
  }
  std::cout << "\n";
  if (stage == lagmesh::Stage::Verify && !do_export && !r.certified()) return kCertification;
  return kOk;
}

int run_study(const Overrides& o) {
  const lagmesh::PipelineConfig c = resolve(o);
  const auto dir = prepare_out(c);
  const lagmesh::StudyResult study = lagmesh::convergence_study(c, c.n_list);
  std::ofstream table(dir / "study.csv");
  if (!table) throw lagmesh::IoError("cannot write study table");
  lagmesh::write_study_table(study, table);
  lagmesh::write_study_table(study, std::cout);
  write_text(dir / "study.json", lagmesh::study_json(study, c).dump(2) + "\n");
  for (const auto& row : study.rows) {
    if (row.failure) return kSolver;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Piecewise-linear isotropic tori: sample, project, refine, certify."};
  app.footer(lagmesh::config_reference() +
             "Exit codes: 0 success, 1 I/O error, 2 config error, 3 solver failure, 4 certification failure.");
  app.require_subcommand(1);

  Overrides o;
  struct Command {
    const char* name;
    const char* help;
    lagmesh::Stage stage;
  };
  const Command commands[] = {
      {"sample", "sample the smooth map on the grid", lagmesh::Stage::Sample},
      {"solve", "project the samples onto isotropic meshes", lagmesh::Stage::Solve},
      {"refine", "place optimal apexes", lagmesh::Stage::Refine},
      {"build", "build the PL map and measure distances", lagmesh::Stage::Build},
      {"verify", "certify isotropy, immersion and optionally embedding", lagmesh::Stage::Verify},
  };
  std::optional<lagmesh::Stage> chosen;
  bool do_export = false, do_study = false;
  for (const Command& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    add_common(sub, o);
    sub->callback([&chosen, stage = cmd.stage] { chosen = stage; });
  }
  CLI::App* exp = app.add_subcommand("export", "run the pipeline and write .symmesh and .obj files");
  add_common(exp, o);
  exp->add_option("--projection", o.projection, "three coordinates for the .obj projection, e.g. 0,1,2");
  exp->callback([&] { chosen = lagmesh::Stage::Verify; do_export = true; });
  CLI::App* study = app.add_subcommand("study", "convergence study over a list of N");
  add_common(study, o);
  study->add_option("--n-list", o.n_list, "comma-separated N values, each double the previous");
  study->callback([&] { do_study = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (do_study) return run_study(o);
    return run_stage(o, *chosen, do_export);
  } catch (const lagmesh::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const lagmesh::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const lagmesh::Error& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolver;
  }
}

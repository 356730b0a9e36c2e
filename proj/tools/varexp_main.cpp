// Command-line front end: simulation runs, certificate checks, constants,
// and the built-in Table-2 reproduction.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "varexp/certificates.hpp"
#include "varexp/config.hpp"
#include "varexp/driver.hpp"
#include "varexp/errors.hpp"
#include "varexp/report.hpp"

namespace {

using namespace varexp;

void emit_outputs(const RunResult& result, const RunConfig& cfg) {
  if (!cfg.csv_path.empty()) emit_csv(result, cfg.csv_path);
  if (!cfg.svg_path.empty()) emit_svg(result, cfg.svg_path);
  if (result.snapshots.empty()) return;
  const Mesh mesh = build_mesh(cfg.rect, cfg.nx, cfg.ny);
  for (const auto& [t, field] : result.snapshots) {
    char name[256];
    std::snprintf(name, sizeof(name), "%st%.9g.svg", cfg.snapshot_prefix.c_str(), t);
    emit_snapshot_svg(mesh, field, t, name);
  }
}

int cmd_run(const std::string& config_path, const std::string& csv_override,
            const std::string& svg_override) {
  RunConfig cfg = parse_config_file(config_path);
  if (!csv_override.empty()) cfg.csv_path = csv_override;
  if (!svg_override.empty()) cfg.svg_path = svg_override;
  const RunResult result = run(cfg);
  emit_outputs(result, cfg);
  std::cout << render_certificates(result.blowup, result.decay, result.constants);
  switch (result.termination) {
    case Termination::completed:
      std::cout << "run completed at t=" << result.termination_time << "\n";
      break;
    case Termination::overflow:
      std::cout << "run terminated by overflow: " << result.termination_detail
                << "\n";
      break;
    case Termination::solver_failure:
      std::cout << "run terminated by solver failure: "
                << result.termination_detail << "\n";
      return 2;
  }
  return 0;
}

struct Prepared {
  Mesh mesh;
  ExponentField p, q;
  double sigma = 0.0;
  SparseMatrix M, K, Mc, Kc;
  NodalField u0;
  ConstantsBundle constants;
};

Prepared prepare(const RunConfig& cfg) {
  Prepared pr{build_mesh(cfg.rect, cfg.nx, cfg.ny)};
  const QuadratureRule& rule = default_rule();
  pr.p = cfg.p_spec.make();
  pr.q = cfg.q_spec.make();
  resolve_bounds(pr.p, pr.mesh, rule);
  resolve_bounds(pr.q, pr.mesh, rule);
  const AdmissibilityReport probe = check_admissibility(pr.p, pr.q, 0.1, 2);
  pr.sigma = cfg.sigma.value_or(default_sigma(probe.p_star_inf, pr.q.sup));
  pr.M = assemble_mass(pr.mesh, rule);
  pr.K = assemble_stiffness(pr.mesh, rule);
  pr.Mc = pr.M;
  pr.Kc = pr.K;
  apply_dirichlet(pr.Mc, pr.mesh);
  apply_dirichlet(pr.Kc, pr.mesh);

  pr.u0 = interpolate_initial(cfg.u0, pr.mesh);

  ConstantsOptions copts;
  copts.lambda1_mode = cfg.lambda1_mode;
  copts.ascent.starts = cfg.ascent_starts;
  copts.ascent.steps = cfg.ascent_steps;
  copts.ascent.seed = cfg.seed;
  pr.constants = compute_constants(pr.mesh, pr.p, pr.q, pr.sigma, pr.M, pr.K,
                                   pr.Mc, pr.Kc, copts, rule);
  return pr;
}

int cmd_check_blowup(const std::string& config_path) {
  const Prepared pr = prepare(parse_config_file(config_path));
  const BlowupCertificate cert = check_blowup(
      pr.mesh, pr.p, pr.q, pr.M, pr.K, pr.u0, pr.constants, default_rule());
  std::cout << render_blowup_report(cert, pr.constants)
            << pr.constants.serialize("  const.");
  return 0;
}

int cmd_check_decay(const std::string& config_path) {
  const Prepared pr = prepare(parse_config_file(config_path));
  const DecayCertificate cert =
      check_decay(h01_norm(pr.M, pr.K, pr.u0), pr.constants);
  std::cout << render_decay_report(cert, pr.constants)
            << pr.constants.serialize("  const.");
  return 0;
}

int cmd_constants(const std::string& config_path) {
  const Prepared pr = prepare(parse_config_file(config_path));
  std::cout << pr.constants.serialize("");
  return 0;
}

int cmd_reproduce_table2(const std::string& outdir) {
  std::filesystem::create_directories(outdir);
  RunConfig cfg = paper_config();
  cfg.csv_path = outdir + "/diagnostics.csv";
  cfg.svg_path = outdir + "/decay.svg";
  cfg.snapshot_times = {0.0, 0.5, 1.0};
  cfg.snapshot_prefix = outdir + "/solution_";
  const RunResult result = run(cfg);
  emit_outputs(result, cfg);

  std::string table = "t,h01,delta\n";
  char buf[96];
  for (const DiagnosticsRecord& r : result.records) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g\n", r.t, r.h01,
                  r.delta ? *r.delta : 0.0);
    table += buf;
  }
  std::ofstream out(outdir + "/table2.csv", std::ios::binary);
  if (!out) throw IoError("cannot open " + outdir + "/table2.csv");
  out << table;
  std::cout << "wrote " << outdir << "/table2.csv, diagnostics.csv, decay.svg, "
            << "solution_t*.svg\n";
  return 0;
}

int cmd_mesh_info(const std::string& config_path, const std::string& dump) {
  const RunConfig cfg = parse_config_file(config_path);
  const Mesh mesh = build_mesh(cfg.rect, cfg.nx, cfg.ny);
  double area = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t)
    area += triangle_geometry(mesh, t).area;
  std::cout << "vertices " << mesh.num_vertices() << "\n"
            << "triangles " << mesh.num_triangles() << "\n"
            << "boundary_vertices " << mesh.num_boundary_vertices() << "\n"
            << "area " << area << "\n";
  if (!dump.empty()) write_mesh_dump(mesh, dump);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-implicit P1 solver for the pseudo-parabolic "
               "p(x)-Laplacian equation with logarithmic source, with "
               "blow-up and decay certificates"};
  app.require_subcommand(1);

  std::string config_path, csv_override, svg_override, outdir, dump_path;

  CLI::App* c_run = app.add_subcommand("run", "simulate and emit diagnostics");
  c_run->add_option("config", config_path, "config file")->required();
  c_run->add_option("--csv", csv_override, "override output.csv");
  c_run->add_option("--svg", svg_override, "override output.svg");

  CLI::App* c_blow = app.add_subcommand("check-blowup",
                                        "evaluate the blow-up certificate");
  c_blow->add_option("config", config_path, "config file")->required();

  CLI::App* c_decay = app.add_subcommand("check-decay",
                                         "evaluate the decay certificate");
  c_decay->add_option("config", config_path, "config file")->required();

  CLI::App* c_const = app.add_subcommand("constants",
                                         "print the constants bundle");
  c_const->add_option("config", config_path, "config file")->required();

  CLI::App* c_tab = app.add_subcommand("reproduce-table2",
                                       "built-in decay experiment");
  c_tab->add_option("outdir", outdir, "output directory")->required();

  CLI::App* c_mesh = app.add_subcommand("mesh-info", "mesh statistics");
  c_mesh->add_option("config", config_path, "config file")->required();
  c_mesh->add_option("--dump", dump_path, "write a plain-text mesh dump");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c_run->parsed()) return cmd_run(config_path, csv_override, svg_override);
    if (c_blow->parsed()) return cmd_check_blowup(config_path);
    if (c_decay->parsed()) return cmd_check_decay(config_path);
    if (c_const->parsed()) return cmd_constants(config_path);
    if (c_tab->parsed()) return cmd_reproduce_table2(outdir);
    if (c_mesh->parsed()) return cmd_mesh_info(config_path, dump_path);
  } catch (const varexp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const varexp::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const varexp::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

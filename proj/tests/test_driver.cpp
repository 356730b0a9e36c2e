#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "varexp/assembly.hpp"
#include "varexp/config.hpp"
#include "varexp/driver.hpp"
#include "varexp/errors.hpp"
#include "varexp/report.hpp"

using namespace varexp;

namespace {

RunConfig small_decay_config() {
  RunConfig cfg = paper_config();
  cfg.nx = cfg.ny = 8;
  cfg.T = 0.1;
  cfg.dt = 0.01;
  cfg.report_every = 0.05;
  cfg.ascent_starts = 3;
  cfg.ascent_steps = 40;
  return cfg;
}

struct StepFixture {
  Mesh mesh;
  ExponentField p, q;
  SparseMatrix M, K, S, Sc;

  StepFixture(const Rect& rect, int n, ExponentField pf, ExponentField qf)
      : mesh(build_mesh(rect, n, n)), p(std::move(pf)), q(std::move(qf)) {
    resolve_bounds(p, mesh, default_rule());
    resolve_bounds(q, mesh, default_rule());
    M = assemble_mass(mesh);
    K = assemble_stiffness(mesh);
    S = M.plus(K);
    Sc = S;
    apply_dirichlet(Sc, mesh);
  }
  StepContext ctx(bool with_source = true) {
    return {mesh, default_rule(), p, q, S, Sc, {1e-12, 0}, with_source, 0};
  }
};

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_SUITE("driver") {

TEST_CASE("config text parses key by key") {
  const std::string text =
      "# comment\n"
      "mesh.nx = 4\n"
      "mesh.ny = 5\n"
      "p.kind = constant\n"
      "p.value = 2.5\n"
      "q.kind = constant\n"
      "q.value = 6\n"
      "sigma = auto\n"
      "u0.kind = product_sine\n"
      "u0.amplitude = 0.3\n"
      "time.T = 0.2\n"
      "time.dt = 0.02  # trailing comment\n"
      "time.report_every = 0.04\n"
      "lambda1.mode = analytic\n"
      "output.snapshots = 0, 0.1\n";
  const RunConfig cfg = parse_config_text(text);
  CHECK(cfg.nx == 4);
  CHECK(cfg.ny == 5);
  CHECK(cfg.p_spec.kind == ExponentKind::constant);
  CHECK(cfg.p_spec.value == 2.5);
  CHECK_FALSE(cfg.sigma.has_value());
  CHECK(cfg.u0.kind == U0Kind::product_sine);
  CHECK(cfg.T == 0.2);
  CHECK(cfg.lambda1_mode == Lambda1Mode::analytic_rectangle);
  CHECK(cfg.snapshot_times.size() == 2);
}

TEST_CASE("unknown keys and malformed lines are rejected") {
  CHECK_THROWS_WITH_AS(parse_config_text("mesh.nz = 4\n"),
                       doctest::Contains("unknown key"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("mesh.nx\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("mesh.nx = pony\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_file("/nonexistent/path.cfg"), ConfigError);
}

TEST_CASE("config validation catches inconsistent time parameters") {
  RunConfig cfg = small_decay_config();
  cfg.dt = -0.01;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = small_decay_config();
  cfg.report_every = 0.013;  // not a multiple of dt
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = small_decay_config();
  cfg.T = 0.105;  // not a multiple of dt
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("zero state is a fixed point of the step") {
  StepFixture f({-1, 1, -1, 1}, 6, ExponentField::floor_form(0.2, 2.5),
                ExponentField::floor_form(0.1, 6.0));
  const NodalField zero(static_cast<std::size_t>(f.mesh.num_vertices()));
  const NodalField next = step(zero, 0.01, f.ctx());
  for (double v : next.values) CHECK(v == 0.0);
}

TEST_CASE("one linear step on the 2x2 mesh matches the dense hand value") {
  // p = 2, source off: interior update u1 = u0 - dt (M+K)^{-1} K u0 with
  // (M+K)_44 = 4.5 and (K u0)_4 = 4 for the center hat
  StepFixture f({-1, 1, -1, 1}, 2, ExponentField::constant(2.0),
                ExponentField::constant(6.0));
  NodalField hat(static_cast<std::size_t>(f.mesh.num_vertices()));
  hat[4] = 1.0;
  const NodalField next = step(hat, 0.1, f.ctx(false));
  CHECK(next[4] == doctest::Approx(1.0 - 0.1 * 4.0 / 4.5).epsilon(1e-12));
  for (int i = 0; i < f.mesh.num_vertices(); ++i)
    if (i != 4) CHECK(next[i] == 0.0);
}

TEST_CASE("one step from the published datum decreases the H01 norm") {
  StepFixture f({-1, 1, -1, 1}, 50, ExponentField::floor_form(0.2, 2.5),
                ExponentField::floor_form(0.1, 6.0));
  const NodalField u0 =
      interpolate_initial({U0Kind::gaussian, 0.25, 1.0, ""}, f.mesh);
  const NodalField u1 = step(u0, 0.01, f.ctx());
  CHECK(h01_norm(f.M, f.K, u1) < h01_norm(f.M, f.K, u0));
  for (int i = 0; i < f.mesh.num_vertices(); ++i)
    if (f.mesh.boundary[i]) CHECK(u1[i] == 0.0);
}

TEST_CASE("halving dt moves theta(1) by less than one percent") {
  StepFixture f({-1, 1, -1, 1}, 50, ExponentField::floor_form(0.2, 2.5),
                ExponentField::floor_form(0.1, 6.0));
  const NodalField u0 =
      interpolate_initial({U0Kind::gaussian, 0.25, 1.0, ""}, f.mesh);
  auto run_to_one = [&](double dt) {
    NodalField u = u0;
    const int n = static_cast<int>(std::llround(1.0 / dt));
    for (int k = 0; k < n; ++k) u = step(u, dt, f.ctx());
    const double h = h01_norm(f.M, f.K, u);
    return h * h;
  };
  const double coarse = run_to_one(0.01);
  const double fine = run_to_one(0.005);
  CHECK(std::abs(coarse - fine) < 0.01 * fine);
}

TEST_CASE("energy dissipates along every constrained step") {
  StepFixture f({-1, 1, -1, 1}, 24, ExponentField::floor_form(0.2, 2.5),
                ExponentField::floor_form(0.1, 6.0));
  const NodalField u0 =
      interpolate_initial({U0Kind::gaussian, 0.25, 1.0, ""}, f.mesh);
  NodalField u = step(u0, 0.01, f.ctx());  // project onto the BC manifold
  double prev = energy(f.mesh, f.p, f.q, u).E;
  const double tol = 1e-6 * (1.0 + std::abs(prev));
  for (int n = 0; n < 40; ++n) {
    u = step(u, 0.01, f.ctx());
    const double cur = energy(f.mesh, f.p, f.q, u).E;
    CHECK(cur <= prev + tol);
    prev = cur;
  }
}

TEST_CASE("T = 0 run produces a single record") {
  RunConfig cfg = small_decay_config();
  cfg.T = 0.0;
  const RunResult res = run(cfg);
  REQUIRE(res.records.size() == 1);
  CHECK(res.records[0].t == 0.0);
  CHECK(res.termination == Termination::completed);
  const std::string csv = format_csv(res);
  std::stringstream ss(csv);
  std::string line;
  int data_rows = 0, header_rows = 0;
  bool seen_header = false;
  while (std::getline(ss, line)) {
    if (line.rfind('#', 0) == 0) continue;
    if (!seen_header) {
      seen_header = true;
      CHECK(line == "t,theta,h01,phi,E,H,lux_grad_p,delta,maxabs");
      ++header_rows;
    } else {
      ++data_rows;
    }
  }
  CHECK(header_rows == 1);
  CHECK(data_rows == 1);
}

TEST_CASE("records respect the reporting stride and theta identities") {
  const RunConfig cfg = small_decay_config();
  const RunResult res = run(cfg);
  REQUIRE(res.records.size() == 3);  // t = 0, 0.05, 0.1
  for (std::size_t k = 0; k < res.records.size(); ++k) {
    const DiagnosticsRecord& r = res.records[k];
    CHECK(r.theta == doctest::Approx(r.h01 * r.h01).epsilon(1e-14));
    CHECK(r.phi == doctest::Approx(0.5 * r.theta).epsilon(1e-14));
    if (k > 0) CHECK(r.t > res.records[k - 1].t);
  }
  CHECK(res.termination == Termination::completed);
  // the decay run keeps shrinking in theta
  CHECK(res.records.back().theta < res.records.front().theta);
}

TEST_CASE("csv round-trips at the printed precision") {
  const RunConfig cfg = small_decay_config();
  const RunResult res = run(cfg);
  const std::string csv = format_csv(res);
  std::stringstream ss(csv);
  std::string line;
  bool seen_header = false;
  std::size_t row = 0;
  while (std::getline(ss, line)) {
    if (line.rfind('#', 0) == 0) continue;
    if (!seen_header) {
      seen_header = true;
      continue;
    }
    REQUIRE(row < res.records.size());
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    REQUIRE(fields.size() == 9);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", res.records[row].t);
    CHECK(fields[0] == buf);
    std::snprintf(buf, sizeof(buf), "%.9g", res.records[row].energy.E);
    CHECK(fields[4] == buf);
    // re-printing the parsed value reproduces the field exactly
    std::snprintf(buf, sizeof(buf), "%.9g", std::strtod(fields[1].c_str(), nullptr));
    CHECK(fields[1] == buf);
    ++row;
  }
  CHECK(row == res.records.size());
}

TEST_CASE("two runs with the same config emit byte-identical csv") {
  const RunConfig cfg = small_decay_config();
  const std::string a = format_csv(run(cfg));
  const std::string b = format_csv(run(cfg));
  CHECK(a == b);
}

TEST_CASE("amplified datum with constant exponents overflows through growth") {
  RunConfig cfg;
  cfg.nx = cfg.ny = 16;
  cfg.p_spec = {ExponentKind::constant, 2.5, 0.0, 0.0};
  cfg.q_spec = {ExponentKind::constant, 6.0, 0.0, 0.0};
  cfg.sigma = 0.1;
  cfg.u0 = {U0Kind::gaussian, 5.0, 1.0, ""};
  cfg.T = 1.0;
  cfg.dt = 0.01;
  cfg.report_every = 0.01;
  cfg.ascent_starts = 2;
  cfg.ascent_steps = 30;
  const RunResult res = run(cfg);
  CHECK(res.termination == Termination::overflow);
  CHECK(res.termination_time < 1.0);
  REQUIRE(res.records.size() >= 2);
  double max_seen = 0.0;
  for (std::size_t k = 1; k < res.records.size(); ++k) {
    CHECK(res.records[k].theta > res.records[k - 1].theta);
    max_seen = std::max(max_seen, res.records[k].maxabs);
  }
  CHECK(max_seen > 10.0 * 5.0);  // crosses ten times the initial amplitude
}

TEST_CASE("svg plot contains both series and keeps the envelope above the norm") {
  const RunConfig cfg = small_decay_config();
  const RunResult res = run(cfg);
  REQUIRE(res.decay.has_envelope);
  for (const DiagnosticsRecord& r : res.records) {
    REQUIRE(r.delta.has_value());
    CHECK(r.h01 <= *r.delta * (1.0 + 1e-12));
  }
  const std::string path = "plot_test.svg";
  emit_svg(res, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string svg = ss.str();
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("delta envelope") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("snapshot svg paints the peak at the mesh center") {
  const Mesh mesh = build_mesh({-1, 1, -1, 1}, 8, 8);
  NodalField u(static_cast<std::size_t>(mesh.num_vertices()));
  for (int i = 0; i < mesh.num_vertices(); ++i) {
    const Point& v = mesh.vertices[i];
    u[i] = 0.25 * std::exp(-v.x * v.x - v.y * v.y);
  }
  const std::string path = "snapshot_test.svg";
  emit_snapshot_svg(mesh, u, 0.0, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string svg = ss.str();
  const auto pos = svg.find("fill=\"rgb(255,255,255)\"");
  REQUIRE(pos != std::string::npos);
  // the brightest polygon's first coordinate sits near the canvas center
  const auto points_pos = svg.rfind("points=\"", pos);
  REQUIRE(points_pos != std::string::npos);
  const double x = std::strtod(svg.c_str() + points_pos + 8, nullptr);
  CHECK(std::abs(x - 280.0) < 90.0);
  std::remove(path.c_str());
}

TEST_CASE("snapshots are captured at the requested times") {
  RunConfig cfg = small_decay_config();
  cfg.snapshot_times = {0.0, 0.05};
  const RunResult res = run(cfg);
  REQUIRE(res.snapshots.size() == 2);
  CHECK(res.snapshots[0].first == 0.0);
  CHECK(res.snapshots[1].first == doctest::Approx(0.05));
}

TEST_CASE("emit_svg with no records throws") {
  RunResult empty;
  CHECK_THROWS_AS(emit_svg(empty, "unused.svg"), ConfigError);
}

TEST_CASE("csv write failure raises IoError") {
  const RunConfig cfg = small_decay_config();
  RunResult res;
  res.records.push_back({});
  CHECK_THROWS_AS(emit_csv(res, "/nonexistent_dir/x.csv"), IoError);
}

}  // TEST_SUITE

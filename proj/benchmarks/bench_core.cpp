#include <benchmark/benchmark.h>

#include <cmath>

#include "varexp/assembly.hpp"
#include "varexp/driver.hpp"
#include "varexp/functionals.hpp"

using namespace varexp;

namespace {

struct Setup {
  Mesh mesh;
  ExponentField p, q;
  SparseMatrix M, K, S, Sc;
  NodalField u0;

  explicit Setup(int n) : mesh(build_mesh({-1, 1, -1, 1}, n, n)) {
    p = ExponentField::floor_form(0.2, 2.5);
    q = ExponentField::floor_form(0.1, 6.0);
    resolve_bounds(p, mesh, default_rule());
    resolve_bounds(q, mesh, default_rule());
    M = assemble_mass(mesh);
    K = assemble_stiffness(mesh);
    S = M.plus(K);
    Sc = S;
    apply_dirichlet(Sc, mesh);
    u0 = interpolate_initial({U0Kind::gaussian, 0.25, 1.0, ""}, mesh);
  }
};

Setup& setup50() {
  static Setup s(50);
  return s;
}

}  // namespace

static void BM_build_mesh(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(build_mesh({-1, 1, -1, 1}, n, n));
}
BENCHMARK(BM_build_mesh)->Arg(50)->Arg(100);

static void BM_assemble_mass(benchmark::State& state) {
  Setup& s = setup50();
  for (auto _ : state) benchmark::DoNotOptimize(assemble_mass(s.mesh));
}
BENCHMARK(BM_assemble_mass);

static void BM_assemble_plaplacian(benchmark::State& state) {
  Setup& s = setup50();
  for (auto _ : state)
    benchmark::DoNotOptimize(assemble_plaplacian(s.mesh, s.p, s.u0));
}
BENCHMARK(BM_assemble_plaplacian);

static void BM_assemble_logsource(benchmark::State& state) {
  Setup& s = setup50();
  for (auto _ : state)
    benchmark::DoNotOptimize(assemble_logsource(s.mesh, s.q, s.u0));
}
BENCHMARK(BM_assemble_logsource);

static void BM_cg_solve(benchmark::State& state) {
  Setup& s = setup50();
  NodalField rhs = s.S.multiply(s.u0);
  for (int i = 0; i < s.mesh.num_vertices(); ++i)
    if (s.mesh.boundary[i]) rhs[i] = 0.0;
  for (auto _ : state)
    benchmark::DoNotOptimize(cg_solve(s.Sc, rhs, {1e-10, 0}));
}
BENCHMARK(BM_cg_solve);

static void BM_luxemburg_norm(benchmark::State& state) {
  Setup& s = setup50();
  for (auto _ : state)
    benchmark::DoNotOptimize(luxemburg_norm(s.mesh, s.p, s.u0, true));
}
BENCHMARK(BM_luxemburg_norm);

static void BM_energy(benchmark::State& state) {
  Setup& s = setup50();
  for (auto _ : state)
    benchmark::DoNotOptimize(energy(s.mesh, s.p, s.q, s.u0));
}
BENCHMARK(BM_energy);

static void BM_step(benchmark::State& state) {
  Setup& s = setup50();
  const StepContext ctx{s.mesh, default_rule(), s.p,      s.q,
                        s.S,    s.Sc,           {1e-10, 0}, true, 0};
  for (auto _ : state) benchmark::DoNotOptimize(step(s.u0, 0.01, ctx));
}
BENCHMARK(BM_step);

BENCHMARK_MAIN();

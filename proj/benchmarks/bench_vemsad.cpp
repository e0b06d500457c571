#include <benchmark/benchmark.h>

#include "vemsad/adaptivity.hpp"

namespace {

using namespace vemsad;

std::shared_ptr<const Discretisation> voronoi_disc(int n, Orders orders) {
  const auto prob = example1(ModelParameters{});
  return std::make_shared<const Discretisation>(
      std::make_shared<const PolyMesh>(generate_mesh(MeshFamily::Voronoi, n, prob->classifier())), orders);
}

void BM_Discretisation(benchmark::State& st) {
  const auto mesh = std::make_shared<const PolyMesh>(generate_mesh(MeshFamily::Voronoi, static_cast<int>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(Discretisation(mesh, {2, 1}).num_dofs());
  st.SetItemsProcessed(st.iterations() * static_cast<long>(mesh->num_cells()));
}
BENCHMARK(BM_Discretisation)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_AssembleDiffusion(benchmark::State& st) {
  const auto prob = example1(ModelParameters{});
  const auto d = voronoi_disc(static_cast<int>(st.range(0)), {2, 1});
  const ProblemData data = prob->data();
  const SystemState s = interpolate_state(d, *prob);
  for (auto _ : st) benchmark::DoNotOptimize(assemble_diffusion(*d, data, s).matrix.nonZeros());
}
BENCHMARK(BM_AssembleDiffusion)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_PicardSolve(benchmark::State& st) {
  const auto prob = example1(ModelParameters{});
  const auto d = voronoi_disc(static_cast<int>(st.range(0)), {2, 1});
  const ProblemData data = prob->data();
  for (auto _ : st) benchmark::DoNotOptimize(picard_solve(d, data).iterations());
}
BENCHMARK(BM_PicardSolve)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Estimator(benchmark::State& st) {
  const auto prob = example1(ModelParameters{});
  const auto d = voronoi_disc(static_cast<int>(st.range(0)), {2, 1});
  const ProblemData data = prob->data();
  const SystemState s = interpolate_state(d, *prob);
  for (auto _ : st) benchmark::DoNotOptimize(local_indicators(s, data).size());
}
BENCHMARK(BM_Estimator)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Refine(benchmark::State& st) {
  const PolyMesh mesh = generate_mesh(MeshFamily::Voronoi, static_cast<int>(st.range(0)));
  std::vector<int> marked;
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); c += 3) marked.push_back(c);
  for (auto _ : st) benchmark::DoNotOptimize(refine_cells(mesh, marked).num_cells());
}
BENCHMARK(BM_Refine)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

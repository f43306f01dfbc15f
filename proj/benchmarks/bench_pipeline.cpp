#include <benchmark/benchmark.h>

#include "gutscat/catalog.hpp"
#include "gutscat/jsj_gluing.hpp"
#include "gutscat/normal_surface.hpp"
#include "gutscat/seifert.hpp"
#include "gutscat/triangulation.hpp"

using namespace gutscat;

namespace {

Triangulation data(const char* name) { return load_triangulation(std::string(GUTSCAT_DATA_DIR) + "/" + name); }

void BM_Enumerate(benchmark::State& state) {
  const auto tri = data("three_tet_a.tri");
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_admissible(tri, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Enumerate)->Arg(1)->Arg(2);

void BM_Catalog(benchmark::State& state) {
  const auto tri = data("two_tet_a.tri");
  CatalogOptions opts;
  opts.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_catalog(tri, 2, opts));
}
BENCHMARK(BM_Catalog)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Census(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(census(Rational(1)));
}
BENCHMARK(BM_Census)->Unit(benchmark::kMillisecond);

void BM_TreeAssembly(benchmark::State& state) {
  const auto tree = load_tree(std::string(GUTSCAT_DATA_DIR) + "/trees/knot_exterior.tree");
  for (auto _ : state) benchmark::DoNotOptimize(assemble_tree(tree));
}
BENCHMARK(BM_TreeAssembly);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <map>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "fkpp/discretization.hpp"
#include "fkpp/evolve.hpp"
#include "fkpp/kernels.hpp"
#include "fkpp/validate.hpp"

using namespace fkpp;

namespace {

struct Fixture {
  std::shared_ptr<const Discretization> mesh;
  std::vector<double> u, w, out;
  std::span<const double> mass;

  explicit Fixture(double h)
      : mesh(std::make_shared<const Discretization>(to_graph({4.0, {3.0, 2.0, 1.0}}), h)) {
    const auto n = mesh->node_count();
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    u.resize(n);
    w.resize(n);
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = d(rng);
      w[i] = d(rng);
    }
    mass = {mesh->mass().data(), n};
  }
};

Fixture& fixture(long cells_per_unit) {
  static std::map<long, std::unique_ptr<Fixture>> cache;
  auto& f = cache[cells_per_unit];
  if (!f) f = std::make_unique<Fixture>(1.0 / static_cast<double>(cells_per_unit));
  return *f;
}

template <bool Parallel>
void BM_explicit_reaction(benchmark::State& state) {
  auto& f = fixture(state.range(0));
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::explicit_reaction(f.u, f.mass, 0.1, f.out);
    } else {
      kernels::explicit_reaction_serial(f.u, f.mass, 0.1, f.out);
    }
    benchmark::DoNotOptimize(f.out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.u.size()));
}

template <bool Parallel>
void BM_matvec(benchmark::State& state) {
  auto& f = fixture(state.range(0));
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::matvec(f.mesh->stiffness(), f.u, f.out);
    } else {
      kernels::matvec_serial(f.mesh->stiffness(), f.u, f.out);
    }
    benchmark::DoNotOptimize(f.out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.u.size()));
}

template <bool Parallel>
void BM_free_energy(benchmark::State& state) {
  auto& f = fixture(state.range(0));
  for (auto _ : state) {
    const double h = Parallel ? kernels::free_energy(f.mesh->stiffness(), f.mass, f.u)
                              : kernels::free_energy_serial(f.mesh->stiffness(), f.mass, f.u);
    benchmark::DoNotOptimize(h);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.u.size()));
}

template <bool Parallel>
void BM_max_abs_diff(benchmark::State& state) {
  auto& f = fixture(state.range(0));
  for (auto _ : state) {
    const double d = Parallel ? kernels::max_abs_diff(f.u, f.w) : kernels::max_abs_diff_serial(f.u, f.w);
    benchmark::DoNotOptimize(d);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.u.size()));
}

template <bool Parallel>
void BM_evolve_step(benchmark::State& state) {
  auto& f = fixture(state.range(0));
  Evolver ev(f.mesh, Parallel);
  Field u = hat_field(f.mesh, 0.5);
  for (auto _ : state) {
    u = ev.step(u, 0.1);
    benchmark::DoNotOptimize(u.values.data());
  }
}

void BM_dichotomy_sweep(benchmark::State& state) {
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto r = run_suite("dichotomy", 1, jobs);
    benchmark::DoNotOptimize(r.checks.data());
  }
}

}  // namespace

#define FKPP_SIZES ->Arg(1000)->Arg(10000)->Arg(100000)

BENCHMARK(BM_explicit_reaction<false>) FKPP_SIZES;
BENCHMARK(BM_explicit_reaction<true>) FKPP_SIZES;
BENCHMARK(BM_matvec<false>) FKPP_SIZES;
BENCHMARK(BM_matvec<true>) FKPP_SIZES;
BENCHMARK(BM_free_energy<false>) FKPP_SIZES;
BENCHMARK(BM_free_energy<true>) FKPP_SIZES;
BENCHMARK(BM_max_abs_diff<false>) FKPP_SIZES;
BENCHMARK(BM_max_abs_diff<true>) FKPP_SIZES;
BENCHMARK(BM_evolve_step<false>)->Arg(1000)->Arg(10000);
BENCHMARK(BM_evolve_step<true>)->Arg(1000)->Arg(10000);
BENCHMARK(BM_dichotomy_sweep)->Arg(1)->Arg(2)->Arg(4)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

// Serial (workers = 1) versus OpenMP-parallel kernels on the 16-vehicle
// synthetic roundabout.

#include <benchmark/benchmark.h>

#include <thread>

#include "roundabout/admm.hpp"
#include "roundabout/convexify.hpp"
#include "roundabout/coordinator.hpp"
#include "roundabout/generator.hpp"
#include "roundabout/kinematics.hpp"

namespace {

using namespace roundabout;

const Scenario& scenario() {
  static const Scenario sc = build_scenario(generate_roundabout({}));
  return sc;
}

struct InnerFixture {
  std::vector<Trajectory> nominal;
  ConstraintSystem system;
  std::vector<TrackingCost> costs;
  std::vector<std::vector<kinematics::LinearizedDynamics>> dynamics;
  std::vector<admm::VehicleSubproblem> subproblems;

  InnerFixture() {
    const auto& sc = scenario();
    const auto& p = sc.params;
    nominal = initialize_trajectories(sc);
    system = build_constraint_system(nominal, sc.boundary, p);
    const int n = sc.num_vehicles();
    costs.resize(n);
    dynamics.resize(n);
    subproblems.resize(n);
    for (int i = 0; i < n; ++i) {
      for (int t = 0; t < p.horizon_T; ++t)
        dynamics[i].push_back(kinematics::linearize(nominal[i].states[t], nominal[i].inputs[t], p));
      costs[i] = build_tracking_cost(nominal[i], assign_references(nominal[i], sc.vehicles[i].path), p);
      subproblems[i] = {&costs[i], dynamics[i]};
    }
  }
};

void BM_InnerIteration(benchmark::State& state) {
  static const InnerFixture fx;
  const int workers = static_cast<int>(state.range(0));
  const auto cfg = admm::AdmmConfig::from(scenario().params, scenario().num_vehicles());
  std::vector<admm::AdmmWorkerState> states(scenario().num_vehicles(), admm::AdmmWorkerState::cold(fx.system.size()));
  for (auto _ : state) {
    auto primal = admm::inner_iteration(states, fx.system, fx.subproblems, cfg, workers);
    benchmark::DoNotOptimize(primal);
  }
}

void BM_ConstraintSystem(benchmark::State& state) {
  static const InnerFixture fx;
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto sys = build_constraint_system(fx.nominal, scenario().boundary, scenario().params, workers);
    benchmark::DoNotOptimize(sys);
  }
}

void BM_Solve(benchmark::State& state) {
  CoordinatorOptions opts;
  opts.workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto res = solve(scenario(), opts);
    benchmark::DoNotOptimize(res);
  }
}

void worker_counts(benchmark::internal::Benchmark* b) {
  b->Arg(1);
  const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  for (int w : {2, 4, 8, 16})
    if (w <= std::max(hw, 2)) b->Arg(w);
}

}  // namespace

BENCHMARK(BM_InnerIteration)->Apply(worker_counts)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConstraintSystem)->Apply(worker_counts)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Solve)->Apply(worker_counts)->Unit(benchmark::kMillisecond)->Iterations(1);

BENCHMARK_MAIN();

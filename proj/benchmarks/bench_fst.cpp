#include <benchmark/benchmark.h>

#include "fst/diagnostics.hpp"
#include "fst/solver.hpp"

namespace {

const fst::AsymptoticData kData =
    fst::AsymptoticData::create(1.0, -1.0, -0.4, 0.4, 1.0, 1.0);

fst::SolverConfig bench_cfg(double T) {
    fst::SolverConfig cfg;
    cfg.step = 0.02;
    cfg.t_end = 0.0;
    cfg.T_schedule = {T};
    cfg.tol_global = std::numeric_limits<double>::infinity();
    return cfg;
}

const fst::ConditionalSolution& converged_pair() {
    static const fst::ConditionalSolution sol =
        fst::solve_conditional(kData, -60.0, bench_cfg(-60.0));
    return sol;
}

void BM_SolveCone(benchmark::State& state) {
    const fst::TrajectoryPair& pair = converged_pair().pair;
    double t = -40.0;
    for (auto _ : state) {
        const fst::ConeResult r =
            fst::solve_cone(pair, {fst::Particle::A, fst::ConeSign::advanced, t});
        benchmark::DoNotOptimize(r.cone_time);
        t = t >= -5.0 ? -40.0 : t + 0.01;
    }
}
BENCHMARK(BM_SolveCone);

void BM_ForceEval(benchmark::State& state) {
    const fst::TrajectoryPair& pair = converged_pair().pair;
    const fst::DynamicsContext ctx = fst::DynamicsContext::from(kData);
    fst::ConeSeeds seeds;
    double t = -40.0;
    for (auto _ : state) {
        const fst::ForceEval f = fst::force_on(pair, fst::Particle::A, t, ctx, &seeds);
        benchmark::DoNotOptimize(f.dpdt);
        t = t >= -5.0 ? -40.0 : t + 0.01;
    }
}
BENCHMARK(BM_ForceEval);

void BM_IntegrateSweep(benchmark::State& state) {
    const fst::TrajectoryPair& pair = converged_pair().pair;
    const fst::DynamicsContext ctx = fst::DynamicsContext::from(kData);
    const fst::Kinematics x0 = fst::asymptote_eval(kData, fst::Particle::A, -60.0);
    for (auto _ : state) {
        fst::ConeSeeds seeds;
        auto nodes = fst::integrate_state(
            -60.0, x0.pos, fst::momentum_from_velocity(x0.vel), 0.02,
            static_cast<std::size_t>(state.range(0)), [&](double t) {
                return fst::force_on(pair, fst::Particle::A, t, ctx, &seeds).dpdt;
            });
        benchmark::DoNotOptimize(nodes.back().pos);
    }
}
BENCHMARK(BM_IntegrateSweep)->Arg(256)->Arg(1024);

void BM_PairNorm(benchmark::State& state) {
    const fst::TrajectoryPair& pair = converged_pair().pair;
    const auto probe = fst::make_probe_grid(pair, pair, -60.0, 0.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fst::pair_norm_distance(pair, pair, probe));
    }
}
BENCHMARK(BM_PairNorm);

void BM_SolveConditional(benchmark::State& state) {
    for (auto _ : state) {
        const fst::ConditionalSolution sol =
            fst::solve_conditional(kData, -30.0, bench_cfg(-30.0));
        benchmark::DoNotOptimize(sol.final_update_norm);
    }
}
BENCHMARK(BM_SolveConditional)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

#include <doctest.h>

#include <cmath>
#include <random>

#include "fst/dynamics.hpp"
#include "fst/solver.hpp"
#include "support.hpp"

using namespace fst;
using fst::testing::constant_trajectory;
using fst::testing::linear_example_pair;

TEST_CASE("momentum/velocity conversions") {
    CHECK(momentum_from_velocity(0.0) == 0.0);
    CHECK(momentum_from_velocity(0.6) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(velocity_from_momentum(0.75) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK_THROWS_AS(momentum_from_velocity(1.0), SuperluminalInput);
    CHECK_THROWS_AS(momentum_from_velocity(-1.2), SuperluminalInput);
}

TEST_CASE("momentum/velocity round trip on 1e4 random subluminal samples") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> dv(-0.999, 0.999);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double v = dv(gen);
        worst = std::max(worst,
                         std::abs(velocity_from_momentum(momentum_from_velocity(v)) - v));
    }
    CHECK(worst <= 1e-14);
}

TEST_CASE("static pair force values") {
    TrajectoryPair p{constant_trajectory(-8.0, 8.0, 0.5, 1.0),
                     constant_trajectory(-8.0, 8.0, 0.5, -1.0)};
    SUBCASE("particle a with unit coupling") {
        const DynamicsContext ctx{1.0, 1.0, 1e-12, 1e-6};
        const ForceEval f = force_on(p, Particle::A, 0.7, ctx);
        CHECK(f.dpdt == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(f.acc == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(f.ret_term > 0.0);
        CHECK(f.adv_term > 0.0);
    }
    SUBCASE("zero coupling gives zero force") {
        const DynamicsContext ctx{0.0, 0.0, 1e-12, 1e-6};
        const ForceEval f = force_on(p, Particle::A, 0.0, ctx);
        CHECK(f.dpdt == 0.0);
        CHECK(f.acc == 0.0);
    }
    SUBCASE("particle b mirrors with the opposite sign") {
        const DynamicsContext ctx{1.0, 1.0, 1e-12, 1e-6};
        const ForceEval f = force_on(p, Particle::B, 0.0, ctx);
        CHECK(f.dpdt == doctest::Approx(-0.25).epsilon(1e-12));
        CHECK(f.ret_term < 0.0);
        CHECK(f.adv_term < 0.0);
    }
}

TEST_CASE("acc carries the (1 - v^2)^{3/2} factor") {
    const TrajectoryPair p = linear_example_pair();
    const DynamicsContext ctx{1.3, 0.8, 1e-12, 1e-6};
    for (double t : {-1.0, 0.0, 2.0}) {
        for (Particle part : {Particle::A, Particle::B}) {
            const ForceEval f = force_on(p, part, t, ctx);
            const double v =
                (part == Particle::A ? p.a : p.b).eval(t).vel;
            CHECK(f.acc ==
                  doctest::Approx(std::pow(1.0 - v * v, 1.5) * f.dpdt).epsilon(1e-13));
        }
    }
}

TEST_CASE("separation underflow guard") {
    TrajectoryPair p{constant_trajectory(-4.0, 4.0, 0.5, 2.5e-7),
                     constant_trajectory(-4.0, 4.0, 0.5, -2.5e-7)};
    const DynamicsContext ctx{1.0, 1.0, 1e-12, 1e-6};
    CHECK_THROWS_AS(force_on(p, Particle::A, 0.0, ctx), SeparationUnderflow);
}

TEST_CASE("integrated residual vanishes on straight free-motion lines") {
    TrajectoryPair p{fst::testing::linear_trajectory(-20.0, 5.0, 0.25, 2.0, -0.25),
                     fst::testing::linear_trajectory(-20.0, 5.0, 0.25, -3.0, 0.5)};
    const DynamicsContext ctx{0.0, 0.0, 1e-12, 1e-6};
    const double r = integrated_velocity_residual(p, Particle::A, -15.0, 0.0, 0.1, ctx);
    CHECK(std::abs(r) <= 1e-14);
}

namespace {

// Independent composite-Simpson oracle used to cross-check the library
// quadrature on a perturbed pair.
double simpson_acc(const TrajectoryPair& p, Particle part, double lo, double hi,
                   std::size_t m, const DynamicsContext& ctx) {
    if (m % 2 == 1) ++m;
    const double h = (hi - lo) / static_cast<double>(m);
    double sum = 0.0;
    for (std::size_t k = 0; k <= m; ++k) {
        const double w = (k == 0 || k == m) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        sum += w * force_on(p, part, lo + h * static_cast<double>(k), ctx).acc;
    }
    return sum * h / 3.0;
}

TrajectoryPair shifted_velocity_pair(const TrajectoryPair& p, double dv) {
    TrajectoryBuilder ba(p.a.grid_start(), p.a.step());
    ba.set_right_edge(p.a.right_edge());
    for (std::size_t i = 0; i < p.a.size(); ++i)
        ba.append_node(p.a.node_time(i), p.a.node_pos(i), p.a.node_vel(i) + dv);
    TrajectoryBuilder bb(p.b.grid_start(), p.b.step());
    bb.set_right_edge(p.b.right_edge());
    for (std::size_t i = 0; i < p.b.size(); ++i)
        bb.append_node(p.b.node_time(i), p.b.node_pos(i), p.b.node_vel(i));
    return {ba.freeze(), bb.freeze()};
}

}  // namespace

TEST_CASE("constant velocity offsets cancel in the residual difference") {
    const TrajectoryPair p = linear_example_pair();
    const TrajectoryPair q = shifted_velocity_pair(p, 0.01);
    const DynamicsContext ctx{1.0, 1.0, 1e-12, 1e-6};
    const double T = -2.0, t = 2.0;
    const double r = integrated_velocity_residual(q, Particle::A, T, t, 0.05, ctx);
    // Oracle: vdot(t) - vdot(T) cancels the constant, so the residual must
    // equal minus the independently quadratured bracket of the shifted pair
    // (both sides carry their own Simpson error).
    const double own = -simpson_acc(q, Particle::A, T, t, 320, ctx);
    CHECK(r == doctest::Approx(own).epsilon(1e-6));
}

namespace {

SolverConfig small_cfg() {
    SolverConfig cfg;
    cfg.step = 0.02;
    cfg.t_end = 0.0;
    cfg.tol_fix = 1e-11;
    cfg.T_schedule = {-30.0};
    cfg.tol_global = std::numeric_limits<double>::infinity();
    return cfg;
}

}  // namespace

TEST_CASE("decomposition at t = T collapses to the boundary cancellation") {
    const auto data = AsymptoticData::create(1.0, -1.0, -0.4, 0.4, 1.0, 1.0);
    const SolverConfig cfg = small_cfg();
    const ConditionalSolution sol = solve_conditional(data, -30.0, cfg);
    const DynamicsContext ctx = DynamicsContext::from(data);

    const WfintTerms w = wfint_terms(sol.pair, data, sol.T, sol.T, 0.01, ctx);
    CHECK(w.a1 == 0.0);
    CHECK(w.a4 == 0.0);
    CHECK(w.a5 == 0.0);
    CHECK(w.a2 == doctest::Approx(w.a3).epsilon(1e-12));
    CHECK(w.lhs_gap <= 1e-12);
    CHECK(std::abs(w.identity_error) <= 1e-12);
}

TEST_CASE("decomposition reconstructs a(t) - x(t) inside the window") {
    const auto data = AsymptoticData::create(1.0, -1.0, -0.4, 0.4, 1.0, 1.0);
    const SolverConfig cfg = small_cfg();
    const ConditionalSolution sol = solve_conditional(data, -30.0, cfg);
    const DynamicsContext ctx = DynamicsContext::from(data);

    for (double t : {-25.0, -20.0, -15.0}) {
        const WfintTerms w = wfint_terms(sol.pair, data, sol.T, t, 0.01, ctx);
        CHECK(w.lhs_gap <= w.sum_bound + 1e-6);
        CHECK(std::abs(w.identity_error) <= 1e-6);
    }
}

TEST_CASE("force signs on a converged pair") {
    const auto data = AsymptoticData::create(1.0, -1.0, -0.4, 0.4, 1.0, 1.0);
    const SolverConfig cfg = small_cfg();
    const ConditionalSolution sol = solve_conditional(data, -30.0, cfg);
    const DynamicsContext ctx = DynamicsContext::from(data);
    for (double t = -29.0; t < 0.0; t += 1.7) {
        const ForceEval fa = force_on(sol.pair, Particle::A, t, ctx);
        CHECK(fa.dpdt > 0.0);
        CHECK(fa.ret_term > 0.0);
        CHECK(fa.adv_term > 0.0);
        const ForceEval fb = force_on(sol.pair, Particle::B, t, ctx);
        CHECK(fb.dpdt < 0.0);
    }
}

TEST_CASE("cone-time ratio envelope from the mean value theorem") {
    const auto data = AsymptoticData::create(1.0, -1.0, -0.4, 0.4, 1.0, 1.0);
    const SolverConfig cfg = small_cfg();
    const ConditionalSolution sol = solve_conditional(data, -30.0, cfg);
    const TrajectoryPair& p = sol.pair;

    for (double t : {-25.0, -12.0, -5.0}) {
        const double gap_over_t = (p.a.eval(t).pos - p.b.eval(t).pos) / t;
        for (ConeSign sign : {ConeSign::advanced, ConeSign::retarded}) {
            const double dir = sign == ConeSign::advanced ? 1.0 : -1.0;
            const ConeResult c = solve_cone(p, {Particle::A, sign, t});
            const double value = t / c.separation;
            // bdot extremes between t and the cone time
            const double lo_t = std::min(t, c.cone_time);
            const double hi_t = std::max(t, c.cone_time);
            double bd_min = 1.0, bd_max = -1.0;
            for (double s = lo_t; s <= hi_t + 1e-12; s += (hi_t - lo_t) / 64.0) {
                const double bd = p.b.eval(std::min(s, hi_t)).vel;
                bd_min = std::min(bd_min, bd);
                bd_max = std::max(bd_max, bd);
            }
            const double cand1 = (1.0 + dir * bd_min) / gap_over_t;
            const double cand2 = (1.0 + dir * bd_max) / gap_over_t;
            const double lo_b = std::min(cand1, cand2) - 1e-9;
            const double hi_b = std::max(cand1, cand2) + 1e-9;
            CHECK(value >= lo_b);
            CHECK(value <= hi_b);
        }
    }
}

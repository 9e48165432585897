#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "fst/csv.hpp"
#include "fst/trajectory.hpp"
#include "support.hpp"

using namespace fst;
using fst::testing::sampled_trajectory;

TEST_CASE("eval reproduces stored samples at nodes") {
    auto traj = sampled_trajectory(
        -2.0, 2.0, 0.5, [](double t) { return 0.5 * std::sin(t); },
        [](double t) { return 0.5 * std::cos(t); });
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const PhaseSample s = traj.eval(traj.node_time(i));
        CHECK(s.pos == traj.node_pos(i));
        CHECK(s.vel == traj.node_vel(i));
    }
}

TEST_CASE("tail queries delegate to the closed form exactly") {
    auto data = AsymptoticData::create(1.0, -1.0, -0.5, 0.5, 1.0, 1.0);
    const AsymptoteTail tail = AsymptoteTail::from(data, Particle::A);
    TrajectoryBuilder b(-10.0, 0.5);
    b.set_tail(tail);
    for (int i = 0; i <= 8; ++i) {
        const double t = -10.0 + 0.5 * i;
        const Kinematics k = tail.eval(t);
        b.append_node(t, k.pos, k.vel);
    }
    const Trajectory traj = b.freeze();
    const double t = -15.0;  // grid_start - 5
    const PhaseSample s = traj.eval(t);
    const Kinematics expect = asymptote_eval(data, Particle::A, t);
    CHECK(s.pos == expect.pos);
    CHECK(s.vel == expect.vel);
}

TEST_CASE("position interpolation is exact on cubics") {
    auto p = [](double t) {
        return 0.25 * (0.3 + 1.2 * t - 0.7 * t * t + 0.25 * t * t * t);
    };
    auto dp = [](double t) { return 0.25 * (1.2 - 1.4 * t + 0.75 * t * t); };
    auto traj = sampled_trajectory(-0.8, 0.8, 0.2, p, dp);
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> dt(-0.8, 0.8);
    for (int i = 0; i < 300; ++i) {
        const double t = dt(gen);
        CHECK(traj.eval(t).pos == doctest::Approx(p(t)).epsilon(1e-13));
    }
}

TEST_CASE("position interpolation converges at fourth order on smooth data") {
    auto p = [](double t) { return 0.5 * std::sin(t); };
    auto dp = [](double t) { return 0.5 * std::cos(t); };
    auto worst = [&](double h) {
        auto traj = sampled_trajectory(0.0, 2.0, h, p, dp);
        double e = 0.0;
        for (double t = 0.5 * h; t < 2.0; t += h)
            e = std::max(e, std::abs(traj.eval(t).pos - p(t)));
        return e;
    };
    const double e1 = worst(0.1);
    const double e2 = worst(0.05);
    CHECK(e1 / e2 >= 8.0);  // expect ~16
}

TEST_CASE("builder rejects superluminal samples") {
    TrajectoryBuilder b(0.0, 0.1);
    b.append_node(0.0, 0.0, 0.5);
    CHECK_THROWS_AS(b.append_node(0.1, 0.05, 1.0), SuperluminalSample);
}

TEST_CASE("builder rejects non-uniform steps") {
    TrajectoryBuilder b(0.0, 0.1);
    b.append_node(0.0, 0.0, 0.0);
    CHECK_THROWS_AS(b.append_node(0.15, 0.0, 0.0), NonUniformStep);
}

TEST_CASE("freeze validates tail continuity") {
    auto data = AsymptoticData::create(1.0, -1.0, -0.5, 0.5, 1.0, 1.0);
    const AsymptoteTail tail = AsymptoteTail::from(data, Particle::A);

    SUBCASE("nodes sampled from the tail itself pass") {
        TrajectoryBuilder b(-8.0, 0.25);
        b.set_tail(tail);
        for (int i = 0; i <= 4; ++i) {
            const double t = -8.0 + 0.25 * i;
            const Kinematics k = tail.eval(t);
            b.append_node(t, k.pos, k.vel);
        }
        CHECK_NOTHROW(b.freeze());
    }
    SUBCASE("a 1e-6 offset in the first sample is a mismatch") {
        TrajectoryBuilder b(-8.0, 0.25);
        b.set_tail(tail);
        for (int i = 0; i <= 4; ++i) {
            const double t = -8.0 + 0.25 * i;
            const Kinematics k = tail.eval(t);
            b.append_node(t, k.pos + (i == 0 ? 1e-6 : 0.0), k.vel);
        }
        CHECK_THROWS_AS(b.freeze(), TailMismatch);
    }
}

TEST_CASE("queries beyond the declared margin raise OutOfDomain") {
    auto traj = sampled_trajectory(
        0.0, 1.0, 0.5, [](double) { return 0.0; }, [](double) { return 0.0; },
        /*extrap_width=*/2.0);
    CHECK_NOTHROW(traj.eval(3.0));
    CHECK_THROWS_AS(traj.eval(3.1), OutOfDomain);
    CHECK_NOTHROW(traj.eval(-2.0));
    CHECK_THROWS_AS(traj.eval(-2.1), OutOfDomain);
}

namespace {

TrajectoryPair smooth_pair() {
    auto a = sampled_trajectory(
        -4.0, 4.0, 0.25, [](double t) { return 1.0 + 0.1 * std::sin(t); },
        [](double t) { return 0.1 * std::cos(t); });
    auto b = sampled_trajectory(
        -4.0, 4.0, 0.25, [](double t) { return -1.0 + 0.2 * t; },
        [](double) { return 0.2; });
    return {std::move(a), std::move(b)};
}

TrajectoryPair perturbed(const TrajectoryPair& p, double dpos_a, double dvel_a) {
    TrajectoryBuilder ba(p.a.grid_start(), p.a.step());
    ba.set_right_edge(p.a.right_edge());
    for (std::size_t i = 0; i < p.a.size(); ++i) {
        const double t = p.a.node_time(i);
        ba.append_node(t, p.a.node_pos(i) + dpos_a,
                       p.a.node_vel(i) +
                           dvel_a * std::sin(0.5 * std::numbers::pi * t));
    }
    TrajectoryBuilder bb(p.b.grid_start(), p.b.step());
    bb.set_right_edge(p.b.right_edge());
    for (std::size_t i = 0; i < p.b.size(); ++i)
        bb.append_node(p.b.node_time(i), p.b.node_pos(i), p.b.node_vel(i));
    return {ba.freeze(), bb.freeze()};
}

}  // namespace

TEST_CASE("pair norm distance of a pair to itself is zero") {
    const TrajectoryPair p = smooth_pair();
    const auto probe = make_probe_grid(p, p, -4.0, 4.0);
    CHECK(pair_norm_distance(p, p, probe) == 0.0);
}

TEST_CASE("pair norm distance sees a pure position shift through a(0)") {
    const TrajectoryPair p1 = smooth_pair();
    const TrajectoryPair p2 = perturbed(p1, 0.3, 0.0);
    const auto probe = make_probe_grid(p1, p2, -4.0, 4.0);
    CHECK(pair_norm_distance(p1, p2, probe) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("pair norm distance sees a nodewise velocity perturbation") {
    const TrajectoryPair p1 = smooth_pair();
    // 0.01 sin(pi t / 2) hits +-1 exactly at odd nodes of the 0.25 grid.
    const TrajectoryPair p2 = perturbed(p1, 0.0, 0.01);
    const auto probe = make_probe_grid(p1, p2, -4.0, 4.0);
    CHECK(pair_norm_distance(p1, p2, probe) ==
          doctest::Approx(0.01).epsilon(1e-9));
}

TEST_CASE("pair norm distance is a pseudometric on random triples") {
    std::mt19937_64 gen(19);
    std::uniform_real_distribution<double> dv(-0.4, 0.4);
    auto random_pair = [&]() {
        TrajectoryBuilder ba(-2.0, 0.5), bb(-2.0, 0.5);
        ba.set_right_edge({10.0});
        bb.set_right_edge({10.0});
        for (int i = 0; i <= 8; ++i) {
            const double t = -2.0 + 0.5 * i;
            ba.append_node(t, 1.0 + dv(gen), dv(gen));
            bb.append_node(t, -1.0 + dv(gen), dv(gen));
        }
        return TrajectoryPair{ba.freeze(), bb.freeze()};
    };
    for (int rep = 0; rep < 50; ++rep) {
        const TrajectoryPair p1 = random_pair(), p2 = random_pair(),
                             p3 = random_pair();
        const auto probe = make_probe_grid(p1, p2, -2.0, 2.0);
        const double d12 = pair_norm_distance(p1, p2, probe);
        const double d21 = pair_norm_distance(p2, p1, probe);
        const double d13 = pair_norm_distance(p1, p3, probe);
        const double d32 = pair_norm_distance(p3, p2, probe);
        CHECK(d12 == d21);
        CHECK(d12 <= d13 + d32 + 1e-12);
    }
}

TEST_CASE("interpolated velocities stay subluminal when nodes do") {
    // Node velocities bounded by V with h * max|acc| < (1-V)/2.
    const double V = 0.8;
    auto traj = sampled_trajectory(
        -3.0, 3.0, 0.1, [&](double t) { return -V * std::cos(1.3 * t) / 1.3; },
        [&](double t) { return V * std::sin(1.3 * t); });
    for (double t = -3.0; t <= 3.0; t += 0.013)
        CHECK(std::abs(traj.eval(t).vel) < 1.0);
}

TEST_CASE("norm distance requires 0 in the evaluable domains") {
    auto a = sampled_trajectory(
        -10.0, -5.0, 0.5, [](double t) { return 1.0 - 0.1 * t; },
        [](double) { return -0.1; }, /*extrap_width=*/1.0);
    auto b = sampled_trajectory(
        -10.0, -5.0, 0.5, [](double t) { return -1.0 + 0.1 * t; },
        [](double) { return 0.1; }, /*extrap_width=*/1.0);
    TrajectoryPair p{a, b};
    const auto probe = make_probe_grid(p, p, -10.0, -5.0);
    CHECK_THROWS_AS(pair_norm_distance(p, p, probe), IncompatibleDomains);
}

TEST_CASE("trajectory CSV round trip is bit exact at the nodes") {
    auto data = AsymptoticData::create(2.0, -3.0, -0.25, 0.5, 0.0, 0.0);
    const AsymptoteTail ta = AsymptoteTail::from(data, Particle::A);
    const AsymptoteTail tb = AsymptoteTail::from(data, Particle::B);
    TrajectoryBuilder ba(-10.0, 0.25), bb(-10.0, 0.25);
    ba.set_tail(ta).set_right_edge({5.0});
    bb.set_tail(tb).set_right_edge({5.0});
    for (int i = 0; i <= 60; ++i) {
        const double t = -10.0 + 0.25 * i;
        const Kinematics ka = ta.eval(t), kb = tb.eval(t);
        ba.append_node(t, ka.pos, ka.vel);
        bb.append_node(t, kb.pos, kb.vel);
    }
    const TrajectoryPair pair{ba.freeze(), bb.freeze()};

    std::ostringstream os;
    write_trajectory_csv(os, pair, -10.0, 5.0);
    std::istringstream is(os.str());
    const TrajectoryCsv csv = read_trajectory_csv(is);
    const TrajectoryPair back = pair_from_csv(csv, data, 5.0);

    REQUIRE(back.a.size() == pair.a.size());
    for (std::size_t i = 0; i < pair.a.size(); ++i) {
        CHECK(back.a.node_pos(i) == pair.a.node_pos(i));
        CHECK(back.a.node_vel(i) == pair.a.node_vel(i));
        CHECK(back.b.node_pos(i) == pair.b.node_pos(i));
        CHECK(back.b.node_vel(i) == pair.b.node_vel(i));
    }
}

TEST_CASE("CSV schema violations are rejected") {
    {
        std::istringstream is("time,a,adot,b,bdot\n0,1,0,-1,0\n");
        CHECK_THROWS_AS(read_trajectory_csv(is), Error);
    }
    {
        std::istringstream is("t,a,adot,b,bdot\n0,1,0,-1\n");
        CHECK_THROWS_AS(read_trajectory_csv(is), Error);
    }
    {
        std::istringstream is("t,a,adot,b,bdot\n0,1,zz,-1,0\n0.5,1,0,-1,0\n");
        CHECK_THROWS_AS(read_trajectory_csv(is), Error);
    }
}

#include "fst/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <sstream>

namespace fst {

int SolverConfig::resolved_threads() const {
    if (threads > 0) return threads;
    if (const char* env = std::getenv("FST_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 2;
}

void SolverConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (!(step > 0.0)) fail("solver.step must be positive");
    if (!(t_end >= 0.0))
        fail("solver.t_end must be >= 0 (the norm is anchored at t = 0)");
    if (!(margin >= 0.0)) fail("solver.margin must be nonnegative");
    if (!(tol_fix > 0.0)) fail("solver.tol_fix must be positive");
    if (max_picard < 1) fail("solver.max_picard must be at least 1");
    if (!(damping > 0.0) || damping > 1.0) fail("solver.damping must be in (0, 1]");
    if (!(tol_cone > 0.0)) fail("solver.tol_cone must be positive");
    if (T_schedule.empty()) fail("solver.T_schedule must not be empty");
    for (std::size_t i = 0; i < T_schedule.size(); ++i) {
        if (!(T_schedule[i] < -1.0))
            fail("solver.T_schedule entries must be < -1");
        if (i > 0 && !(T_schedule[i] < T_schedule[i - 1]))
            fail("solver.T_schedule must be strictly decreasing");
    }
    if (!(tol_global >= 0.0)) fail("solver.tol_global must be nonnegative");
    if (quad_step < 0.0) fail("solver.quad_step must be nonnegative");
    if (!(separation_floor > 0.0)) fail("solver.separation_floor must be positive");
}

namespace {

inline void kahan_add(double& sum, double& comp, double inc) {
    const double y = inc - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
}

}  // namespace

std::vector<IntegrationNode> integrate_state(
    double t0, double pos0, double momentum0, double step, std::size_t n_steps,
    const std::function<double(double)>& dpdt) {
    std::vector<IntegrationNode> nodes;
    nodes.reserve(n_steps + 1);

    double q = pos0, p = momentum0;
    double cq = 0.0, cp = 0.0;
    nodes.push_back({t0, q, p, velocity_from_momentum(p)});

    double f1 = dpdt(t0);
    for (std::size_t i = 0; i < n_steps; ++i) {
        const double t = t0 + step * static_cast<double>(i);
        const double t_next = t0 + step * static_cast<double>(i + 1);
        const double f2 = dpdt(t + 0.5 * step);
        const double f4 = dpdt(t_next);

        const double k1q = velocity_from_momentum(p);
        const double k2q = velocity_from_momentum(p + 0.5 * step * f1);
        const double k3q = velocity_from_momentum(p + 0.5 * step * f2);
        const double k4q = velocity_from_momentum(p + step * f2);

        kahan_add(q, cq, step / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q));
        kahan_add(p, cp, step / 6.0 * (f1 + 4.0 * f2 + f4));
        f1 = f4;
        nodes.push_back({t_next, q, p, velocity_from_momentum(p)});
    }
    return nodes;
}

namespace {

struct GridPlan {
    double T = 0.0;
    double T_minus = 0.0;
    double T_plus = 0.0;
    double a_end = 0.0;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    double margin = 0.0;
    double extrap_width = 0.0;
    double cut_a = 0.0;  // time where the seed switches from tail to line
    double cut_b = 0.0;
};

// Seed velocity/gap estimates from the tails, capped away from light speed.
constexpr double kSeedVelCap = 0.99;

double tail_cutover(const AsymptoteTail& tail, double step) {
    double cut = -1.0 - step;
    if (tail.log_coeff != 0.0) {
        // |vel| <= kSeedVelCap; vel = slope + log_coeff/t approaches slope,
        // worst near t = -1.
        const double excess = std::abs(tail.log_coeff) / (kSeedVelCap - std::abs(tail.slope));
        cut = std::min(cut, -excess);
    }
    return cut;
}

Kinematics seed_eval(const AsymptoteTail& tail, double cut, double t) {
    if (t <= cut) return tail.eval(t);
    const Kinematics at_cut = tail.eval(cut);
    Kinematics k;
    k.pos = at_cut.pos + at_cut.vel * (t - cut);
    k.vel = at_cut.vel;
    k.acc = 0.0;
    return k;
}

GridPlan plan_grids(const AsymptoticData& data, double T, const SolverConfig& cfg) {
    GridPlan plan;
    plan.T = T;
    plan.T_minus = asymptote_cone_time(data, T, ConeSign::retarded);
    plan.T_plus = asymptote_cone_time(data, T, ConeSign::advanced);

    const AsymptoteTail tail_a = AsymptoteTail::from(data, Particle::A);
    const AsymptoteTail tail_b = AsymptoteTail::from(data, Particle::B);
    plan.cut_a = std::max(tail_cutover(tail_a, cfg.step), T);
    plan.cut_b = std::max(tail_cutover(tail_b, cfg.step), plan.T_plus);

    const double V0 = std::min(
        kSeedVelCap,
        std::max({std::abs(data.u_minus_inf), std::abs(data.v_minus_inf),
                  std::abs(seed_eval(tail_a, plan.cut_a, plan.cut_a).vel),
                  std::abs(seed_eval(tail_b, plan.cut_b, plan.cut_b).vel)}));

    auto seed_gap = [&](double t) {
        return seed_eval(tail_a, plan.cut_a, t).pos -
               seed_eval(tail_b, plan.cut_b, t).pos;
    };

    // Converged velocities grow past the seed estimate as the particles
    // accelerate outward, so size the buffer with headroom.
    const double V_est = std::min(0.95, V0 + 0.25);
    double margin = cfg.margin;
    if (margin <= 0.0) {
        margin = 2.0 * std::max(1.0, seed_gap(cfg.t_end)) / (1.0 - V_est);
        margin = std::ceil(margin / cfg.step) * cfg.step;
    }
    plan.margin = margin;
    plan.a_end = cfg.t_end + margin;
    plan.n_a = static_cast<std::size_t>(std::llround((plan.a_end - T) / cfg.step));
    plan.a_end = T + cfg.step * static_cast<double>(plan.n_a);
    plan.n_b = static_cast<std::size_t>(
        std::ceil((plan.a_end - plan.T_plus) / cfg.step - 1e-9));
    if (plan.n_b < 2) plan.n_b = 2;
    // The linear extension is a query limit, not storage; bound the cone
    // reach by light speed across the buffer and leave a wide allowance.
    const double gap_bound =
        std::max(1.0, seed_gap(cfg.t_end)) + 2.0 * (plan.a_end - cfg.t_end);
    plan.extrap_width = std::max(64.0, 24.0 * gap_bound);
    return plan;
}

Trajectory build_seed(const AsymptoteTail& tail, double start, std::size_t n,
                      double step, double cut, double extrap_width,
                      const TrajectoryPair* warm, Particle particle) {
    TrajectoryBuilder builder(start, step);
    builder.set_tail(tail).set_right_edge({extrap_width});
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = start + step * static_cast<double>(i);
        if (warm) {
            const Trajectory& src = (particle == Particle::A) ? warm->a : warm->b;
            const PhaseSample s = src.eval(t);
            builder.append_node(t, s.pos, s.vel);
        } else {
            const Kinematics k = seed_eval(tail, cut, t);
            builder.append_node(t, k.pos, k.vel);
        }
    }
    return builder.freeze();
}

Trajectory nodes_to_trajectory(const std::vector<IntegrationNode>& nodes,
                               const AsymptoteTail& tail, double extrap_width) {
    TrajectoryBuilder builder(nodes.front().t, nodes[1].t - nodes[0].t);
    builder.set_tail(tail).set_right_edge({extrap_width});
    for (const IntegrationNode& n : nodes) builder.append_node(n.t, n.pos, n.vel);
    return builder.freeze();
}

Trajectory blend(const Trajectory& fresh, const Trajectory& frozen, double d) {
    TrajectoryBuilder builder(fresh.grid_start(), fresh.step());
    if (fresh.has_tail()) builder.set_tail(fresh.tail());
    builder.set_right_edge(fresh.right_edge());
    for (std::size_t i = 0; i < fresh.size(); ++i) {
        builder.append_node(fresh.node_time(i),
                            d * fresh.node_pos(i) + (1.0 - d) * frozen.node_pos(i),
                            d * fresh.node_vel(i) + (1.0 - d) * frozen.node_vel(i));
    }
    return builder.freeze();
}

}  // namespace

ConditionalSolution solve_conditional(const AsymptoticData& data, double T,
                                      const SolverConfig& cfg,
                                      const TrajectoryPair* warm_seed) {
    cfg.validate();
    if (!(T < -1.0)) throw ConfigError("conditional start time must be < -1");
    {
        const double ratio = T / cfg.step;
        if (std::abs(ratio - std::llround(ratio)) > 1e-6)
            throw ConfigError("conditional start time must sit on the grid");
        const double ratio_end = cfg.t_end / cfg.step;
        if (std::abs(ratio_end - std::llround(ratio_end)) > 1e-6)
            throw ConfigError("solver.t_end must sit on the grid");
    }

    const AsymptoteTail tail_a = AsymptoteTail::from(data, Particle::A);
    const AsymptoteTail tail_b = AsymptoteTail::from(data, Particle::B);
    const Kinematics xT = tail_a.eval(T);
    const Kinematics yT = tail_b.eval(T);

    // Scattering precondition at the start time.
    const double mu = data.mu();
    if (!(xT.pos - yT.pos > mu * T) || !(xT.vel - yT.vel < mu)) {
        std::ostringstream os;
        os << "scattering precondition fails at T=" << T
           << ": need x-y > mu*T and xdot-ydot < mu";
        throw NonScattering(os.str());
    }

    const GridPlan plan = plan_grids(data, T, cfg);
    const DynamicsContext ctx{data.kappa_a, data.kappa_b, cfg.tol_cone,
                              cfg.separation_floor};

    TrajectoryPair cur{
        build_seed(tail_a, T, plan.n_a, cfg.step, plan.cut_a, plan.extrap_width,
                   warm_seed, Particle::A),
        build_seed(tail_b, plan.T_plus, plan.n_b, cfg.step, plan.cut_b,
                   plan.extrap_width, warm_seed, Particle::B)};

    const Kinematics yTp = tail_b.eval(plan.T_plus);
    const double p_a0 = momentum_from_velocity(xT.vel);
    const double p_b0 = momentum_from_velocity(yTp.vel);

    const std::vector<double> probe = make_probe_grid(cur, cur, T, cfg.t_end);

    const bool parallel =
        cfg.sweep == SweepMode::jacobi && cfg.resolved_threads() >= 2;

    double damping = cfg.damping;
    double delta = std::numeric_limits<double>::infinity();
    double prev_delta = std::numeric_limits<double>::infinity();
    int grow = 0, halvings = 0, iterations = 0;
    std::vector<double> update_norms;

    for (int k = 0; k < cfg.max_picard; ++k) {
        auto sweep_a = [&, frozen = &cur]() {
            ConeSeeds seeds;
            auto dpdt = [&](double t) {
                return force_on(*frozen, Particle::A, t, ctx, &seeds).dpdt;
            };
            return integrate_state(T, xT.pos, p_a0, cfg.step, plan.n_a, dpdt);
        };
        auto sweep_b = [&](const TrajectoryPair& field) {
            ConeSeeds seeds;
            auto dpdt = [&](double t) {
                return force_on(field, Particle::B, t, ctx, &seeds).dpdt;
            };
            return integrate_state(plan.T_plus, yTp.pos, p_b0, cfg.step, plan.n_b,
                                   dpdt);
        };

        TrajectoryPair next;
        if (cfg.sweep == SweepMode::gauss_seidel) {
            next.a = blend(
                nodes_to_trajectory(sweep_a(), tail_a, plan.extrap_width), cur.a,
                damping);
            const TrajectoryPair field{next.a, cur.b};
            next.b = blend(
                nodes_to_trajectory(sweep_b(field), tail_b, plan.extrap_width),
                cur.b, damping);
        } else {
            std::vector<IntegrationNode> nodes_a, nodes_b;
            if (parallel) {
                auto fa = std::async(std::launch::async, sweep_a);
                nodes_b = sweep_b(cur);
                nodes_a = fa.get();
            } else {
                nodes_a = sweep_a();
                nodes_b = sweep_b(cur);
            }
            next.a = blend(nodes_to_trajectory(nodes_a, tail_a, plan.extrap_width),
                           cur.a, damping);
            next.b = blend(nodes_to_trajectory(nodes_b, tail_b, plan.extrap_width),
                           cur.b, damping);
        }

        delta = pair_norm_distance(next, cur, probe);
        cur = std::move(next);
        iterations = k + 1;
        update_norms.push_back(delta);
        if (delta < cfg.tol_fix) break;

        if (delta > prev_delta * (1.0 + 1e-12)) {
            ++grow;
            if (grow >= 5)
                throw PicardDivergence(
                    "relaxation update norm grew for 5 consecutive iterations");
            if (grow >= 2 && halvings < 3) {
                damping *= 0.5;
                ++halvings;
                grow = 0;
            }
        } else {
            grow = 0;
        }
        prev_delta = delta;
    }

    ConditionalSolution sol;
    sol.pair = std::move(cur);
    sol.T = T;
    sol.T_minus = plan.T_minus;
    sol.T_plus = plan.T_plus;
    sol.picard_iterations = iterations;
    sol.final_update_norm = delta;
    sol.update_norms = std::move(update_norms);
    return sol;
}

GlobalRun solve_global(const AsymptoticData& data, const SolverConfig& cfg) {
    cfg.validate();
    const double T0 = find_T0(data, cfg.step);
    for (double T : cfg.T_schedule) {
        if (T > T0 + 1e-9) {
            std::ostringstream os;
            os << "schedule entry T=" << T
               << " violates the scattering start bound T0=" << T0;
            throw ConfigError(os.str());
        }
    }

    GlobalRun run;
    run.config = cfg;
    run.data = data;
    run.family.reserve(cfg.T_schedule.size());
    for (std::size_t n = 0; n < cfg.T_schedule.size(); ++n) {
        const TrajectoryPair* warm =
            (cfg.warm_family && n > 0) ? &run.family[n - 1].pair : nullptr;
        run.family.push_back(solve_conditional(data, cfg.T_schedule[n], cfg, warm));
        if (n > 0) {
            const TrajectoryPair& p1 = run.family[n - 1].pair;
            const TrajectoryPair& p2 = run.family[n].pair;
            const std::vector<double> probe =
                make_probe_grid(p1, p2, cfg.T_schedule[n], cfg.t_end);
            run.deltas.push_back(pair_norm_distance(p1, p2, probe));
        }
    }
    run.converged = std::isinf(cfg.tol_global) ||
                    (!run.deltas.empty() && run.deltas.back() < cfg.tol_global);
    if (!run.converged) {
        std::ostringstream os;
        os << "family did not reach tol_global=" << cfg.tol_global
           << " within the schedule";
        throw ScheduleExhausted(os.str(), std::move(run));
    }
    return run;
}

}  // namespace fst

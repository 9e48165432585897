#include "fst/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace fst {

double decay_model_value(DecayModel m, double t) {
    const double at = std::abs(t);
    switch (m) {
        case DecayModel::c_over_t: return 1.0 / at;
        case DecayModel::c_logt_over_t: return std::log(at) / at;
        case DecayModel::c_over_sqrt_t: return 1.0 / std::sqrt(at);
    }
    return 0.0;
}

FitOutcome fit_bound(std::span<const std::pair<double, double>> samples,
                     DecayModel model) {
    if (samples.size() < 10)
        throw EmptySamples("fit_bound needs at least 10 samples");
    FitOutcome out;
    for (const auto& [t, value] : samples) {
        if (!(std::abs(t) > 1.0))
            throw EmptySamples("fit_bound samples must satisfy |t| > 1");
        out.C = std::max(out.C, value / decay_model_value(model, t));
    }
    out.worst_violation = validate_bound(out.C, model, samples);
    return out;
}

double validate_bound(double C, DecayModel model,
                      std::span<const std::pair<double, double>> samples) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& [t, value] : samples)
        worst = std::max(worst, value - C * decay_model_value(model, t));
    return worst;
}

bool DiagnosticsReport::all_pass() const {
    for (const CheckResult& c : checks)
        if (!c.pass) return false;
    return true;
}

const CheckResult* DiagnosticsReport::find(const std::string& name) const {
    for (const CheckResult& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

namespace {

using Samples = std::vector<std::pair<double, double>>;

struct MemberView {
    const TrajectoryPair* pair = nullptr;
    double T = 0.0;
    double T_plus = 0.0;
};

struct Context {
    std::vector<MemberView> members;
    AsymptoticData data;
    DynamicsContext dyn;
    double step = 0.0;
    double t_end = 0.0;
    double quad_step = 0.0;
    double t0 = 0.0;
    DiagnosticsConfig cfg;
    bool family = true;  // held-out members available
};

// Sample times for one member: a-node times in [T, hi], strided to the
// configured budget, all left of -1.
std::vector<double> window_times(const Context& ctx, const MemberView& m,
                                 double hi) {
    std::vector<double> times;
    const Trajectory& a = m.pair->a;
    const double lo = m.T;
    std::size_t count = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double t = a.node_time(i);
        if (t < lo - 1e-12 || t > hi + 1e-12 || !(t < -1.0)) continue;
        ++count;
    }
    if (count == 0) return times;
    const std::size_t stride =
        std::max<std::size_t>(1, count / static_cast<std::size_t>(
                                             ctx.cfg.max_samples_per_member));
    std::size_t seen = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double t = a.node_time(i);
        if (t < lo - 1e-12 || t > hi + 1e-12 || !(t < -1.0)) continue;
        if (seen % stride == 0) times.push_back(t);
        ++seen;
    }
    return times;
}

// One decaying quantity fitted on the first member and validated on the
// rest, with a relative-violation pass rule.
struct BoundCheckSpec {
    std::string name;
    DecayModel model = DecayModel::c_over_t;
    std::function<double(const MemberView&, double)> value;
    double spread_tol = 0.0;  // 0: no per-member stability requirement
};

CheckResult bound_check(const Context& ctx, const BoundCheckSpec& spec) {
    CheckResult res;
    res.name = spec.name;
    res.window_lo = ctx.members.back().T;
    res.window_hi = ctx.t0;

    std::vector<Samples> per_member;
    for (const MemberView& m : ctx.members) {
        Samples s;
        for (double t : window_times(ctx, m, ctx.t0))
            s.emplace_back(t, spec.value(m, t));
        per_member.push_back(std::move(s));
    }

    const FitOutcome fit = fit_bound(per_member.front(), spec.model);
    res.fitted_constants["C"] = fit.C;
    res.samples = per_member.front();

    double worst_rel = 0.0;
    for (std::size_t i = 1; i < per_member.size(); ++i) {
        for (const auto& [t, value] : per_member[i]) {
            const double bound = fit.C * decay_model_value(spec.model, t);
            const double viol = value - bound;
            worst_rel = std::max(viol / std::max(bound, 1e-12), worst_rel);
        }
    }
    res.validated = per_member.size() > 1;
    res.worst_margin = ctx.cfg.rel_slack - worst_rel;
    res.pass = res.worst_margin >= 0.0;

    if (spec.spread_tol > 0.0 && per_member.size() > 1) {
        double cmin = fit.C, cmax = fit.C;
        for (std::size_t i = 1; i < per_member.size(); ++i) {
            const double ci = fit_bound(per_member[i], spec.model).C;
            cmin = std::min(cmin, ci);
            cmax = std::max(cmax, ci);
        }
        const double spread =
            cmax < 1e-12 ? 0.0 : (cmax - cmin) / std::max(cmax, 1e-12);
        res.fitted_constants["C_spread"] = spread;
        res.pass = res.pass && spread <= spec.spread_tol;
        res.worst_margin = std::min(res.worst_margin, spec.spread_tol - spread);
    }
    return res;
}

// An inequality that must hold sample-wise; margin is the normalized room.
struct MarginCheckSpec {
    std::string name;
    std::function<double(const MemberView&, double)> margin;  // >= 0 required
};

CheckResult margin_check(const Context& ctx, const MarginCheckSpec& spec) {
    CheckResult res;
    res.name = spec.name;
    res.window_lo = ctx.members.back().T;
    res.window_hi = ctx.t0;
    double worst = std::numeric_limits<double>::infinity();
    for (const MemberView& m : ctx.members) {
        for (double t : window_times(ctx, m, ctx.t0)) {
            const double g = spec.margin(m, t);
            if (g < worst) worst = g;
            if (res.samples.size() < 400) res.samples.emplace_back(t, g);
        }
    }
    res.worst_margin = worst;
    res.pass = worst >= -1e-9;
    return res;
}

double vel_at(const MemberView& m, Particle p, double t) {
    const Trajectory& traj = (p == Particle::A) ? m.pair->a : m.pair->b;
    return traj.eval(t).vel;
}

ConeResult cone_at(const Context& ctx, const MemberView& m, Particle vertex,
                   ConeSign sign, double t) {
    return solve_cone(*m.pair, {vertex, sign, t}, ctx.dyn.tol_cone);
}

// |kappa (1-udot^2)^{3/2}(1-wdot^2)/(udot-wdot)^2 - eta|, maximized over the
// two cone branches; udot is the vertex particle's velocity at t and wdot
// the other particle's velocity across the cone.
double eta_closeness_value(const Context& ctx, const MemberView& m, Particle p,
                           double t) {
    const double kappa = (p == Particle::A) ? ctx.dyn.kappa_a : ctx.dyn.kappa_b;
    const double eta = (p == Particle::A) ? ctx.data.eta1 : ctx.data.eta2;
    const double u = vel_at(m, p, t);
    const Particle other = (p == Particle::A) ? Particle::B : Particle::A;
    double worst = 0.0;
    for (ConeSign sign : {ConeSign::retarded, ConeSign::advanced}) {
        const ConeResult c = cone_at(ctx, m, p, sign, t);
        const double w = vel_at(m, other, c.cone_time);
        const double d = u - w;
        const double val =
            kappa * std::pow(1.0 - u * u, 1.5) * (1.0 - w * w) / (d * d);
        worst = std::max(worst, std::abs(val - eta));
    }
    return worst;
}

CheckResult uniform_bounds_check(const Context& ctx) {
    CheckResult res;
    res.name = "uniform_bounds";
    res.window_lo = ctx.members.back().T;
    res.window_hi = ctx.t_end;

    double V_all = 0.0, D_all = std::numeric_limits<double>::infinity();
    double V_min_member = std::numeric_limits<double>::infinity(), V_max_member = 0.0;
    for (const MemberView& m : ctx.members) {
        double V_m = 0.0;
        const Trajectory& a = m.pair->a;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double t = a.node_time(i);
            if (t > ctx.t_end + 1e-12) break;
            V_m = std::max(V_m, std::abs(a.node_vel(i)));
            V_m = std::max(V_m, std::abs(m.pair->b.eval(t).vel));
            const double gap = a.node_pos(i) - m.pair->b.eval(t).pos;
            D_all = std::min(D_all, gap / (1.0 + std::abs(t)));
        }
        // Tail region: sample the asymptote gap on a geometric ladder and
        // include the t -> -inf limit |u - v|.
        double t = m.T;
        for (int k = 0; k < 48; ++k) {
            const double gap = asymptote_gap(ctx.data, t);
            D_all = std::min(D_all, gap / (1.0 + std::abs(t)));
            t *= 1.5;
        }
        D_all = std::min(D_all,
                         ctx.data.v_minus_inf - ctx.data.u_minus_inf);
        V_m = std::max(V_m, std::abs(ctx.data.u_minus_inf));
        V_m = std::max(V_m, std::abs(ctx.data.v_minus_inf));
        V_all = std::max(V_all, V_m);
        V_min_member = std::min(V_min_member, V_m);
        V_max_member = std::max(V_max_member, V_m);
    }
    const double spread =
        V_max_member < 1e-12 ? 0.0 : (V_max_member - V_min_member) / V_max_member;
    res.fitted_constants["V"] = V_all;
    res.fitted_constants["D"] = D_all;
    res.fitted_constants["V_spread"] = spread;
    res.pass = V_all < 1.0 && D_all > 0.0 &&
               (ctx.members.size() < 2 || spread <= ctx.cfg.v_spread_tol);
    res.worst_margin = std::min(1.0 - V_all, D_all);
    res.validated = ctx.members.size() > 1;
    return res;
}

CheckResult monotone_check(const Context& ctx) {
    CheckResult res;
    res.name = "monotone_velocities";
    res.window_lo = ctx.members.back().T;
    res.window_hi = ctx.t_end;
    double worst_a = std::numeric_limits<double>::infinity();
    double worst_b = std::numeric_limits<double>::infinity();
    for (const MemberView& m : ctx.members) {
        const Trajectory& a = m.pair->a;
        const Trajectory& b = m.pair->b;
        for (std::size_t i = 0; i + 1 < a.size(); ++i) {
            if (a.node_time(i + 1) > ctx.t_end + 1e-12) break;
            worst_a = std::min(worst_a, a.node_vel(i + 1) - a.node_vel(i));
        }
        for (std::size_t i = 0; i + 1 < b.size(); ++i) {
            if (b.node_time(i + 1) > ctx.t_end + 1e-12) break;
            worst_b = std::min(worst_b, b.node_vel(i) - b.node_vel(i + 1));
        }
    }
    const bool strict_a = ctx.dyn.kappa_a > 0.0;
    const bool strict_b = ctx.dyn.kappa_b > 0.0;
    res.fitted_constants["min_a_increment"] = worst_a;
    res.fitted_constants["min_b_decrement"] = worst_b;
    res.pass = (strict_a ? worst_a > 0.0 : worst_a >= 0.0) &&
               (strict_b ? worst_b > 0.0 : worst_b >= 0.0);
    res.worst_margin = std::min(worst_a, worst_b);
    return res;
}

CheckResult decomposition_checks(const Context& ctx, CheckResult* identity_out) {
    CheckResult res;
    res.name = "decomposition_decay";
    res.window_lo = ctx.members.back().T;
    res.window_hi = ctx.t0;

    struct TermSeries {
        Samples a1, a2, a3, a4, a5, envelope;
    };
    std::vector<TermSeries> series(ctx.members.size());
    double worst_identity = 0.0;
    double worst_ineq_margin = std::numeric_limits<double>::infinity();

    for (std::size_t i = 0; i < ctx.members.size(); ++i) {
        const MemberView& m = ctx.members[i];
        for (double frac : ctx.cfg.wfint_fractions) {
            const double t = m.T * frac;
            if (!(t < -1.0)) continue;
            const WfintTerms w = wfint_terms(*m.pair, ctx.data, m.T, t,
                                             ctx.quad_step, ctx.dyn);
            series[i].a1.emplace_back(t, std::abs(w.a1));
            series[i].a2.emplace_back(t, std::abs(w.a2));
            series[i].a3.emplace_back(t, std::abs(w.a3));
            series[i].a4.emplace_back(t, std::abs(w.a4));
            series[i].a5.emplace_back(t, std::abs(w.a5));
            series[i].envelope.emplace_back(
                t, std::max({std::abs(w.a1), std::abs(w.a2), std::abs(w.a3),
                             std::abs(w.a4), std::abs(w.a5)}));
            worst_identity = std::max(worst_identity, std::abs(w.identity_error));
            worst_ineq_margin =
                std::min(worst_ineq_margin,
                         w.sum_bound + ctx.cfg.identity_tol - w.lhs_gap);
            if (res.samples.size() < 400) res.samples.emplace_back(t, w.lhs_gap);
        }
    }

    // The wfint ladder is short per member; pool the fit over all ladder
    // points of the first member and validate against the other members.
    struct TermFit {
        const char* key;
        DecayModel model;
        Samples TermSeries::*field;
    };
    const TermFit fits[] = {
        {"C1", DecayModel::c_logt_over_t, &TermSeries::a1},
        {"C2", DecayModel::c_logt_over_t, &TermSeries::a2},
        {"C3", DecayModel::c_logt_over_t, &TermSeries::a3},
        {"C4", DecayModel::c_logt_over_t, &TermSeries::a4},
        {"C5", DecayModel::c_over_t, &TermSeries::a5},
        {"C_sqrt", DecayModel::c_over_sqrt_t, &TermSeries::envelope},
    };

    double worst_rel = 0.0;
    for (const TermFit& tf : fits) {
        Samples fit_set = series.front().*tf.field;
        // Ladders are shorter than the generic 10-sample rule; pad with the
        // second member when fitting a family so the fit stays meaningful.
        if (fit_set.size() < 10 && series.size() > 1) {
            const Samples& more = series[1].*tf.field;
            fit_set.insert(fit_set.end(), more.begin(), more.end());
        }
        double C = 0.0;
        for (const auto& [t, v] : fit_set)
            C = std::max(C, v / decay_model_value(tf.model, t));
        res.fitted_constants[tf.key] = C;
        for (std::size_t i = 1; i < series.size(); ++i) {
            for (const auto& [t, v] : series[i].*tf.field) {
                const double bound = C * decay_model_value(tf.model, t);
                worst_rel =
                    std::max(worst_rel, (v - bound) / std::max(bound, 1e-12));
            }
        }
    }
    res.validated = ctx.members.size() > 1;
    res.worst_margin = ctx.cfg.rel_slack - worst_rel;
    res.pass = res.worst_margin >= 0.0;

    if (identity_out) {
        identity_out->name = "decomposition_identity";
        identity_out->window_lo = res.window_lo;
        identity_out->window_hi = res.window_hi;
        identity_out->fitted_constants["max_identity_error"] = worst_identity;
        identity_out->worst_margin =
            std::min(worst_ineq_margin, ctx.cfg.identity_tol - worst_identity);
        identity_out->pass = identity_out->worst_margin >= 0.0;
    }
    return res;
}

CheckResult ratio_check(const Context& ctx, Particle p) {
    CheckResult res;
    res.name = p == Particle::A ? "asymptote_ratio_a" : "asymptote_ratio_b";
    res.window_lo = ctx.members.back().T;
    res.window_hi = ctx.members.front().T / 2.0;

    const AsymptoteTail tail = AsymptoteTail::from(ctx.data, p);
    auto ratio_at = [&](const MemberView& m, double t) {
        const Trajectory& traj = (p == Particle::A) ? m.pair->a : m.pair->b;
        const double gap = std::abs(traj.eval(t).pos - tail.eval(t).pos);
        return gap * std::abs(t) / std::log(std::abs(t));
    };

    double first = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < ctx.members.size(); ++i) {
        const double t = ctx.members[i].T / 2.0;
        if (!(t < -std::exp(1.0))) continue;  // need ln|t| > 1 territory
        const double r = ratio_at(ctx.members[i], t);
        if (i == 0) first = r;
        worst = std::max(worst, r);
        res.samples.emplace_back(t, r);
    }
    res.fitted_constants["first"] = first;
    res.fitted_constants["max"] = worst;
    res.pass = worst <= ctx.cfg.ratio_growth * first + 1e-12;
    res.worst_margin = ctx.cfg.ratio_growth * first + 1e-12 - worst;
    res.validated = ctx.members.size() > 1;
    return res;
}

CheckResult residual_check(const Context& ctx, Particle p) {
    CheckResult res;
    res.name = p == Particle::A ? "equation_residual_a" : "equation_residual_b";
    const MemberView& m = ctx.members.back();
    const double start = (p == Particle::A)
                             ? m.T
                             : std::min(std::ceil(m.T_plus), ctx.t_end - 1.0);
    res.window_lo = start;
    res.window_hi = ctx.t_end;

    double worst = 0.0;
    double w = start;
    while (w < ctx.t_end - 1e-9) {
        const double hi = std::min(w + 1.0, ctx.t_end);
        const double r = std::abs(integrated_velocity_residual(
            *m.pair, p, w, hi, ctx.quad_step, ctx.dyn));
        worst = std::max(worst, r);
        if (res.samples.size() < 400) res.samples.emplace_back(w, r);
        w += 1.0;
    }
    res.fitted_constants["max_residual"] = worst;
    res.worst_margin = (ctx.cfg.residual_tol - worst) / ctx.cfg.residual_tol;
    res.pass = res.worst_margin >= 0.0;
    return res;
}

DiagnosticsReport run_context(const Context& ctx) {
    DiagnosticsReport report;
    const AsymptoticData& d = ctx.data;
    const double mu = d.mu();

    report.constants["eta1"] = d.eta1;
    report.constants["eta2"] = d.eta2;
    report.constants["mu"] = mu;

    // 1. velocity brackets
    report.checks.push_back(bound_check(
        ctx, {"velocity_bracket_a", DecayModel::c_over_t,
              [&](const MemberView& m, double t) {
                  return vel_at(m, Particle::A, t) - d.u_minus_inf;
              }}));
    report.checks.push_back(bound_check(
        ctx, {"velocity_bracket_b", DecayModel::c_over_t,
              [&](const MemberView& m, double t) {
                  return d.v_minus_inf - vel_at(m, Particle::B, t);
              }}));
    // Strict side of the brackets.
    report.checks.push_back(margin_check(
        ctx, {"velocity_bracket_sign",
              [&](const MemberView& m, double t) {
                  return std::min(vel_at(m, Particle::A, t) - d.u_minus_inf,
                                  d.v_minus_inf - vel_at(m, Particle::B, t));
              }}));

    // 2. closeness to the asymptotes
    const AsymptoteTail tail_a = AsymptoteTail::from(d, Particle::A);
    const AsymptoteTail tail_b = AsymptoteTail::from(d, Particle::B);
    report.checks.push_back(bound_check(
        ctx, {"asymptote_closeness_a", DecayModel::c_logt_over_t,
              [&](const MemberView& m, double t) {
                  return std::abs(m.pair->a.eval(t).pos - tail_a.eval(t).pos);
              }}));
    report.checks.push_back(bound_check(
        ctx, {"asymptote_closeness_b", DecayModel::c_logt_over_t,
              [&](const MemberView& m, double t) {
                  return std::abs(m.pair->b.eval(t).pos - tail_b.eval(t).pos);
              }}));

    // 3. scattering window
    report.checks.push_back(margin_check(
        ctx, {"scattering_window",
              [&](const MemberView& m, double t) {
                  const double gap =
                      m.pair->a.eval(t).pos - m.pair->b.eval(t).pos;
                  const double m1 =
                      (gap - mu * t) / std::max(1.0, std::abs(mu * t));
                  const double dv = vel_at(m, Particle::A, t) -
                                    vel_at(m, Particle::B, t);
                  const double m2 = (mu - dv) / std::abs(mu);
                  return std::min(m1, m2);
              }}));

    // 4. uniform velocity and separation bounds
    report.checks.push_back(uniform_bounds_check(ctx));

    // 5. cone velocity gaps
    report.checks.push_back(bound_check(
        ctx, {"cone_velocity_gap_a", DecayModel::c_over_t,
              [&](const MemberView& m, double t) {
                  const ConeResult c =
                      cone_at(ctx, m, Particle::B, ConeSign::advanced, t);
                  return vel_at(m, Particle::A, c.cone_time) -
                         vel_at(m, Particle::A, t);
              }}));
    report.checks.push_back(bound_check(
        ctx, {"cone_velocity_gap_b", DecayModel::c_over_t,
              [&](const MemberView& m, double t) {
                  const ConeResult c =
                      cone_at(ctx, m, Particle::A, ConeSign::advanced, t);
                  return vel_at(m, Particle::B, t) -
                         vel_at(m, Particle::B, c.cone_time);
              }}));
    report.checks.push_back(margin_check(
        ctx, {"relative_velocity_retarded",
              [&](const MemberView& m, double t) {
                  const ConeResult c =
                      cone_at(ctx, m, Particle::A, ConeSign::retarded, t);
                  const double q = vel_at(m, Particle::A, t) -
                                   vel_at(m, Particle::B, c.cone_time);
                  return (mu - q) / std::abs(mu);
              }}));
    report.checks.push_back(margin_check(
        ctx, {"relative_velocity_advanced",
              [&](const MemberView& m, double t) {
                  const ConeResult c =
                      cone_at(ctx, m, Particle::A, ConeSign::advanced, t);
                  const double q = vel_at(m, Particle::A, t) -
                                   vel_at(m, Particle::B, c.cone_time);
                  return (0.5 * mu - q) / std::abs(0.5 * mu);
              }}));

    // 6. closeness of the momentum bracket to the eta limit
    report.checks.push_back(
        bound_check(ctx, {"eta_closeness_a", DecayModel::c_over_t,
                          [&](const MemberView& m, double t) {
                              return eta_closeness_value(ctx, m, Particle::A, t);
                          },
                          ctx.cfg.eta_spread_tol}));
    report.checks.push_back(
        bound_check(ctx, {"eta_closeness_b", DecayModel::c_over_t,
                          [&](const MemberView& m, double t) {
                              return eta_closeness_value(ctx, m, Particle::B, t);
                          },
                          ctx.cfg.eta_spread_tol}));

    // 7. decomposition decay and reconstruction identity
    {
        CheckResult identity;
        CheckResult decay = decomposition_checks(ctx, &identity);
        report.checks.push_back(std::move(decay));
        report.checks.push_back(std::move(identity));
    }

    // 8. asymptote ratio across the family
    if (ctx.family) {
        report.checks.push_back(ratio_check(ctx, Particle::A));
        report.checks.push_back(ratio_check(ctx, Particle::B));
    }

    // 9. integrated equation residuals on the last member
    report.checks.push_back(residual_check(ctx, Particle::A));
    report.checks.push_back(residual_check(ctx, Particle::B));

    // 10. velocity monotonicity (discrete acceleration signs)
    report.checks.push_back(monotone_check(ctx));

    const CheckResult* ub = report.find("uniform_bounds");
    if (ub) {
        report.constants["V"] = ub->fitted_constants.at("V");
        report.constants["D"] = ub->fitted_constants.at("D");
    }
    return report;
}

Context make_context(const std::vector<MemberView>& members,
                     const AsymptoticData& data, const SolverConfig& scfg,
                     const DiagnosticsConfig& cfg, bool family) {
    Context ctx;
    ctx.members = members;
    ctx.data = data;
    ctx.dyn = DynamicsContext{data.kappa_a, data.kappa_b, scfg.tol_cone,
                              scfg.separation_floor};
    ctx.step = scfg.step;
    ctx.t_end = scfg.t_end;
    ctx.quad_step = cfg.quad_step > 0.0 ? cfg.quad_step : scfg.resolved_quad_step();
    ctx.t0 = std::isnan(cfg.t0) ? members.front().T / 2.0 : cfg.t0;
    ctx.cfg = cfg;
    ctx.family = family;
    return ctx;
}

}  // namespace

DiagnosticsReport run_all(const GlobalRun& run, const AsymptoticData& data,
                          const DiagnosticsConfig& cfg) {
    if (run.family.size() < 2)
        throw InsufficientFamily("diagnostics need at least two family members");
    std::vector<MemberView> members;
    members.reserve(run.family.size());
    for (const ConditionalSolution& s : run.family)
        members.push_back({&s.pair, s.T, s.T_plus});
    return run_context(make_context(members, data, run.config, cfg, true));
}

DiagnosticsReport run_single(const ConditionalSolution& member,
                             const AsymptoticData& data,
                             const SolverConfig& solver_cfg,
                             const DiagnosticsConfig& cfg) {
    std::vector<MemberView> members{{&member.pair, member.T, member.T_plus}};
    return run_context(make_context(members, data, solver_cfg, cfg, false));
}

std::string report_to_json(const DiagnosticsReport& report) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["checks"] = nlohmann::json::array();
    nlohmann::json samples = nlohmann::json::object();
    for (const CheckResult& c : report.checks) {
        nlohmann::json jc;
        jc["name"] = c.name;
        jc["window"] = {c.window_lo, c.window_hi};
        jc["fitted_constants"] = c.fitted_constants;
        jc["worst_margin"] = c.worst_margin;
        jc["pass"] = c.pass;
        jc["validated"] = c.validated;
        j["checks"].push_back(std::move(jc));
        if (!c.samples.empty()) {
            nlohmann::json tbl = nlohmann::json::array();
            for (const auto& [t, v] : c.samples) tbl.push_back({t, v});
            samples[c.name] = std::move(tbl);
        }
    }
    j["constants"] = report.constants;
    j["samples"] = std::move(samples);
    j["all_pass"] = report.all_pass();
    return j.dump(2);
}

}  // namespace fst

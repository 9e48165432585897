#include "fst/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace fst {

double momentum_from_velocity(double v) {
    if (!(std::abs(v) < 1.0)) {
        std::ostringstream os;
        os << "velocity " << v << " is not subluminal";
        throw SuperluminalInput(os.str());
    }
    return v / std::sqrt((1.0 - v) * (1.0 + v));
}

double velocity_from_momentum(double p) { return p / std::hypot(1.0, p); }

namespace {

double gamma_factor(double v) { return std::pow((1.0 - v) * (1.0 + v), 1.5); }

void check_separation(double sep, double floor, double t) {
    if (sep < floor) {
        std::ostringstream os;
        os << "cone separation " << sep << " at t=" << t
           << " under the configured floor " << floor;
        throw SeparationUnderflow(os.str());
    }
}

ForceEval force_from_cones(const TrajectoryPair& pair, Particle particle,
                           double t, const DynamicsContext& ctx,
                           const ConeResult& ret, const ConeResult& adv) {
    check_separation(ret.separation, ctx.separation_floor, t);
    check_separation(adv.separation, ctx.separation_floor, t);

    ForceEval f;
    f.cone_ret = ret;
    f.cone_adv = adv;
    if (particle == Particle::A) {
        const double wr = pair.b.eval(ret.cone_time).vel;
        const double wa = pair.b.eval(adv.cone_time).vel;
        f.ret_term = 0.5 * ctx.kappa_a * ((1.0 + wr) / (1.0 - wr)) /
                     (ret.separation * ret.separation);
        f.adv_term = 0.5 * ctx.kappa_a * ((1.0 - wa) / (1.0 + wa)) /
                     (adv.separation * adv.separation);
        f.dpdt = f.ret_term + f.adv_term;
        f.acc = gamma_factor(pair.a.eval(t).vel) * f.dpdt;
    } else {
        const double wr = pair.a.eval(ret.cone_time).vel;
        const double wa = pair.a.eval(adv.cone_time).vel;
        f.ret_term = -0.5 * ctx.kappa_b * ((1.0 - wr) / (1.0 + wr)) /
                     (ret.separation * ret.separation);
        f.adv_term = -0.5 * ctx.kappa_b * ((1.0 + wa) / (1.0 - wa)) /
                     (adv.separation * adv.separation);
        f.dpdt = f.ret_term + f.adv_term;
        f.acc = gamma_factor(pair.b.eval(t).vel) * f.dpdt;
    }
    return f;
}

}  // namespace

ForceEval force_on(const TrajectoryPair& pair, Particle particle, double t,
                   const DynamicsContext& ctx, ConeSeeds* seeds) {
    const ConeSeeds local;
    const ConeSeeds* s = seeds ? seeds : &local;
    ConeResult ret =
        solve_cone(pair, {particle, ConeSign::retarded, t}, ctx.tol_cone, s->retarded);
    ConeResult adv =
        solve_cone(pair, {particle, ConeSign::advanced, t}, ctx.tol_cone, s->advanced);
    if (seeds) {
        seeds->retarded = ret.cone_time;
        seeds->advanced = adv.cone_time;
    }
    return force_from_cones(pair, particle, t, ctx, ret, adv);
}

double acceleration_at(const TrajectoryPair& pair, Particle particle, double tau,
                       double eq_start, const DynamicsContext& ctx,
                       ConeSeeds* seeds) {
    if (tau < eq_start) {
        const Trajectory& traj = (particle == Particle::A) ? pair.a : pair.b;
        if (traj.has_tail()) return traj.tail().eval(tau).acc;
        return 0.0;
    }
    return force_on(pair, particle, tau, ctx, seeds).acc;
}

double integrated_velocity_residual(const TrajectoryPair& pair, Particle particle,
                                    double T, double t, double quad_step,
                                    const DynamicsContext& ctx) {
    const Trajectory& traj = (particle == Particle::A) ? pair.a : pair.b;
    if (t == T) return 0.0;
    if (!(t > T)) throw DomainError("residual window needs T <= t");
    if (!(quad_step > 0.0)) throw DomainError("quad_step must be positive");

    std::size_t m = static_cast<std::size_t>(std::ceil((t - T) / quad_step - 1e-12));
    if (m % 2 == 1) ++m;
    if (m < 2) m = 2;
    const double hq = (t - T) / static_cast<double>(m);

    ConeSeeds seeds;
    double sum = 0.0;
    for (std::size_t k = 0; k <= m; ++k) {
        const double s = T + hq * static_cast<double>(k);
        const double acc = force_on(pair, particle, s, ctx, &seeds).acc;
        const double w = (k == 0 || k == m) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        sum += w * acc;
    }
    const double integral = sum * hq / 3.0;
    return traj.eval(t).vel - traj.eval(T).vel - integral;
}

namespace {

// Partial derivatives of (1-u^2)^{3/2} (1-w^2) / (u-w)^2.
double dQ_du(double u, double w) {
    const double d = u - w;
    return std::sqrt(1.0 - u * u) * (1.0 - w * w) *
           (-u * u + 3.0 * u * w - 2.0) / (d * d * d);
}
double dQ_dw(double u, double w) {
    const double d = u - w;
    return 2.0 * std::pow(1.0 - u * u, 1.5) * (1.0 - u * w) / (d * d * d);
}

// Partial derivatives of (1-u^2)^{3/2} (1 - sigma*w) / (u-w); sigma = +1 for
// the advanced branch, -1 for the retarded one.
double dR_du(double u, double w, double sigma) {
    const double d = u - w;
    return std::sqrt(1.0 - u * u) * (1.0 - sigma * w) *
           (-2.0 * u * u + 3.0 * u * w - 1.0) / (d * d);
}
double dR_dw(double u, double w, double sigma) {
    const double d = u - w;
    return std::pow(1.0 - u * u, 1.5) * (1.0 - sigma * u) / (d * d);
}

struct WfintSweepState {
    ConeSeeds outer;        // vertex-a cones at the quadrature time
    ConeSeeds inner_ret;    // cones of force_on(b, t2-)
    ConeSeeds inner_adv;    // cones of force_on(b, t2+)
};

// Integrands of the A4 and A5 terms at quadrature time s.
struct WfintIntegrand {
    double a4 = 0.0;
    double a5 = 0.0;
};

WfintIntegrand wfint_integrand(const TrajectoryPair& pair, double s,
                               double t_plus, const DynamicsContext& ctx,
                               WfintSweepState& st) {
    ConeResult ret = solve_cone(pair, {Particle::A, ConeSign::retarded, s},
                                ctx.tol_cone, st.outer.retarded);
    ConeResult adv = solve_cone(pair, {Particle::A, ConeSign::advanced, s},
                                ctx.tol_cone, st.outer.advanced);
    st.outer.retarded = ret.cone_time;
    st.outer.advanced = adv.cone_time;

    const double u = pair.a.eval(s).vel;
    const double w_ret = pair.b.eval(ret.cone_time).vel;
    const double w_adv = pair.b.eval(adv.cone_time).vel;

    const double acc_a = force_from_cones(pair, Particle::A, s, ctx, ret, adv).acc;
    const double acc_b_ret = acceleration_at(pair, Particle::B, ret.cone_time,
                                             t_plus, ctx, &st.inner_ret);
    const double acc_b_adv = acceleration_at(pair, Particle::B, adv.cone_time,
                                             t_plus, ctx, &st.inner_adv);

    const double tdot_ret = (1.0 - u) / (1.0 - w_ret);
    const double tdot_adv = (1.0 + u) / (1.0 + w_adv);

    WfintIntegrand g;
    {
        const double dq_ret =
            acc_a * dQ_du(u, w_ret) + acc_b_ret * tdot_ret * dQ_dw(u, w_ret);
        const double dq_adv =
            acc_a * dQ_du(u, w_adv) + acc_b_adv * tdot_adv * dQ_dw(u, w_adv);
        g.a4 = dq_ret * std::log(ret.separation) + dq_adv * std::log(adv.separation);
    }
    {
        const double dr_ret = acc_a * dR_du(u, w_ret, -1.0) +
                              acc_b_ret * tdot_ret * dR_dw(u, w_ret, -1.0);
        const double dr_adv = acc_a * dR_du(u, w_adv, 1.0) +
                              acc_b_adv * tdot_adv * dR_dw(u, w_adv, 1.0);
        g.a5 = dr_ret / ret.separation + dr_adv / adv.separation;
    }
    return g;
}

// The log-weighted boundary bracket of the decomposition at time tau:
//   kappa_a/2 (1-adot^2)^{3/2} sum_± (1-bdot(t2±)^2)/(adot-bdot(t2±))^2
//                                  * ln(a(tau)-b(t2±))
double boundary_bracket(const TrajectoryPair& pair, double tau,
                        const DynamicsContext& ctx) {
    const ConeResult ret =
        solve_cone(pair, {Particle::A, ConeSign::retarded, tau}, ctx.tol_cone);
    const ConeResult adv =
        solve_cone(pair, {Particle::A, ConeSign::advanced, tau}, ctx.tol_cone);
    const double u = pair.a.eval(tau).vel;
    const double w_ret = pair.b.eval(ret.cone_time).vel;
    const double w_adv = pair.b.eval(adv.cone_time).vel;
    const double g32 = std::pow(1.0 - u * u, 1.5);
    const double term_ret = (1.0 - w_ret * w_ret) / ((u - w_ret) * (u - w_ret)) *
                            std::log(ret.separation);
    const double term_adv = (1.0 - w_adv * w_adv) / ((u - w_adv) * (u - w_adv)) *
                            std::log(adv.separation);
    return 0.5 * ctx.kappa_a * g32 * (term_ret + term_adv);
}

}  // namespace

WfintTerms wfint_terms(const TrajectoryPair& pair, const AsymptoticData& data,
                       double T, double t, double quad_step,
                       const DynamicsContext& ctx) {
    if (!(t >= T)) throw DomainError("wfint_terms needs T <= t");
    if (!(quad_step > 0.0)) throw DomainError("quad_step must be positive");
    if (!(t < -1.0) || !(T < -1.0))
        throw DomainError("wfint_terms probes require t, T < -1");

    const double u_inf = data.u_minus_inf;
    const double v_inf = data.v_minus_inf;
    const double du = u_inf - v_inf;
    // Constant absorbed by the log-separation terms at t -> -inf.
    const double c0 =
        0.5 * data.eta1 * std::log(du * du / (1.0 - v_inf * v_inf));
    const double t_plus = asymptote_cone_time(data, T, ConeSign::advanced);

    WfintTerms out;

    // A1: boundary momentum bracket at T against eta1, weighted by (t-T)/T.
    {
        const ConeResult ret =
            solve_cone(pair, {Particle::A, ConeSign::retarded, T}, ctx.tol_cone);
        const ConeResult adv =
            solve_cone(pair, {Particle::A, ConeSign::advanced, T}, ctx.tol_cone);
        const double uT = pair.a.eval(T).vel;
        const double w_ret = pair.b.eval(ret.cone_time).vel;
        const double w_adv = pair.b.eval(adv.cone_time).vel;
        const double g32 = std::pow(1.0 - uT * uT, 1.5);
        const double bracket =
            (1.0 + w_ret) / (uT - w_ret) * (T / ret.separation) +
            (1.0 - w_adv) / (uT - w_adv) * (T / adv.separation);
        const double weight = (t - T) / T;
        out.a1 = (0.5 * ctx.kappa_a * g32 * bracket - data.eta1) * weight;
    }

    // A2 at t, A3 = A2 evaluated at T.
    out.a2 = boundary_bracket(pair, t, ctx) - data.eta1 * std::log(-t) - c0;
    out.a3 = boundary_bracket(pair, T, ctx) - data.eta1 * std::log(-T) - c0;

    // A4 and A5 by composite Simpson over [T, t]; the double integral of A5
    // collapses to a (t-r)-weighted single one.
    if (t > T) {
        std::size_t m =
            static_cast<std::size_t>(std::ceil((t - T) / quad_step - 1e-12));
        if (m % 2 == 1) ++m;
        if (m < 2) m = 2;
        const double hq = (t - T) / static_cast<double>(m);
        WfintSweepState st;
        double sum4 = 0.0, sum5 = 0.0;
        for (std::size_t k = 0; k <= m; ++k) {
            const double s = T + hq * static_cast<double>(k);
            const WfintIntegrand g = wfint_integrand(pair, s, t_plus, ctx, st);
            const double w = (k == 0 || k == m) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
            sum4 += w * g.a4;
            sum5 += w * (t - s) * g.a5;
        }
        out.a4 = 0.5 * ctx.kappa_a * sum4 * hq / 3.0;
        out.a5 = 0.5 * ctx.kappa_a * sum5 * hq / 3.0;
    }

    out.sum_bound = std::abs(out.a1) + std::abs(out.a2) + std::abs(out.a3) +
                    std::abs(out.a4) + std::abs(out.a5);
    const double x_t = AsymptoteTail::from(data, Particle::A).eval(t).pos;
    const double gap = pair.a.eval(t).pos - x_t;
    out.lhs_gap = std::abs(gap);
    out.identity_error = gap - (out.a1 - out.a2 + out.a3 + out.a4 + out.a5);
    return out;
}

}  // namespace fst

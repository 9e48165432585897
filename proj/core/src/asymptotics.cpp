#include "fst/asymptotics.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

namespace fst {

namespace {

void check_velocities(double u, double v) {
    if (!(std::abs(u) < 1.0) || !(std::abs(v) < 1.0) || !(u < v)) {
        std::ostringstream os;
        os << "asymptotic velocities must satisfy -1 < u < v < 1, got u=" << u
           << " v=" << v;
        throw DegenerateVelocities(os.str());
    }
}

}  // namespace

std::pair<double, double> compute_etas(double kappa_a, double kappa_b,
                                       double u, double v) {
    check_velocities(u, v);
    if (kappa_a < 0.0 || kappa_b < 0.0)
        throw DomainError("coupling constants must be nonnegative");
    const double du2 = (u - v) * (u - v);
    const double one_u = 1.0 - u * u;
    const double one_v = 1.0 - v * v;
    const double eta1 = kappa_a * std::pow(one_u, 1.5) * one_v / du2;
    const double eta2 = kappa_b * std::pow(one_v, 1.5) * one_u / du2;
    return {eta1, eta2};
}

AsymptoticData AsymptoticData::create(double x_inf, double y_inf, double u,
                                      double v, double kappa_a,
                                      double kappa_b) {
    auto [eta1, eta2] = compute_etas(kappa_a, kappa_b, u, v);
    AsymptoticData d;
    d.x_minus_inf = x_inf;
    d.y_minus_inf = y_inf;
    d.u_minus_inf = u;
    d.v_minus_inf = v;
    d.kappa_a = kappa_a;
    d.kappa_b = kappa_b;
    d.eta1 = eta1;
    d.eta2 = eta2;
    return d;
}

Kinematics asymptote_eval(const AsymptoticData& data, Particle p, double t) {
    if (!(t < -1.0))
        throw DomainError("asymptotes are defined for t < -1 only");
    Kinematics k;
    const double lg = std::log(-t);
    if (p == Particle::A) {
        k.pos = data.x_minus_inf + data.u_minus_inf * t - data.eta1 * lg;
        k.vel = data.u_minus_inf - data.eta1 / t;
        k.acc = data.eta1 / (t * t);
    } else {
        k.pos = data.y_minus_inf + data.v_minus_inf * t + data.eta2 * lg;
        k.vel = data.v_minus_inf + data.eta2 / t;
        k.acc = -data.eta2 / (t * t);
    }
    return k;
}

double asymptote_gap(const AsymptoticData& data, double t) {
    if (!(t < -1.0))
        throw DomainError("asymptotes are defined for t < -1 only");
    const double rel = data.u_minus_inf - data.v_minus_inf;
    return (data.x_minus_inf - data.y_minus_inf) + rel * t -
           (data.eta1 + data.eta2) * std::log(-t);
}

namespace {

// y and ydot as plain functions; with eta2 == 0 the line is valid everywhere.
double y_pos(const AsymptoticData& d, double t) {
    double p = d.y_minus_inf + d.v_minus_inf * t;
    if (d.eta2 != 0.0) p += d.eta2 * std::log(-t);
    return p;
}

double y_vel(const AsymptoticData& d, double t) {
    return d.eta2 == 0.0 ? d.v_minus_inf : d.v_minus_inf + d.eta2 / t;
}

double x_pos(const AsymptoticData& d, double t) {
    double p = d.x_minus_inf + d.u_minus_inf * t;
    if (d.eta1 != 0.0) p -= d.eta1 * std::log(-t);
    return p;
}

double x_vel(const AsymptoticData& d, double t) {
    return d.eta1 == 0.0 ? d.u_minus_inf : d.u_minus_inf - d.eta1 / t;
}

}  // namespace

double asymptote_cone_time(const AsymptoticData& data, double T,
                           ConeSign sign) {
    if (!(T < -1.0))
        throw DomainError("strip endpoints require T < -1");
    const double xT = x_pos(data, T);
    const double gap = xT - y_pos(data, T);
    if (!(gap > 0.0))
        throw DomainError("asymptotes are not ordered x > y at T");

    // F(s) = s - T -/+ (x(T) - y(s)); strictly increasing where |ydot| < 1.
    const double dir = (sign == ConeSign::advanced) ? 1.0 : -1.0;
    auto f = [&](double s) { return s - T - dir * (xT - y_pos(data, s)); };

    double lo = T, hi = T;
    double width = gap;
    if (sign == ConeSign::advanced) {
        // f(T) = -gap < 0; expand right. The formula holds for s <= -1 unless
        // eta2 == 0 (then y is a global straight line). f is increasing where
        // |ydot| < 1, so a nonpositive value at the ceiling means the cone
        // leaves the asymptote domain.
        const double ceiling =
            data.eta2 == 0.0 ? std::numeric_limits<double>::infinity() : -1.0;
        hi = std::min(T + width, ceiling);
        while (f(hi) < 0.0) {
            if (hi >= ceiling)
                throw DomainError(
                    "advanced strip endpoint leaves the asymptote domain");
            width *= 2.0;
            hi = std::min(T + width, ceiling);
        }
    } else {
        // f(T) = +gap > 0; expand left.
        lo = T - width;
        while (f(lo) > 0.0) {
            width *= 2.0;
            lo = T - width;
        }
        hi = T;
    }
    for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(T));
         ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

// Scattering preconditions on the whole half-line t <= T, decided through
// monotonicity of the closed forms.
bool t0_conditions(const AsymptoticData& d, double T, double slack) {
    if (!(T < -1.0)) return false;
    const double u = d.u_minus_inf, v = d.v_minus_inf;
    const double s_eta = d.eta1 + d.eta2;
    const double mu = d.mu();

    // |xdot| < 1 on (-inf, T]: xdot = u + eta1/|t| increases toward t = 0,
    // so the maximum over the half-line sits at T.
    if (!(x_vel(d, T) < 1.0)) return false;

    // gap(t) > 0 on (-inf, T]: decreasing left of the vertex -s_eta/(v-u),
    // increasing right of it; without log terms it decreases everywhere.
    {
        const double vertex = -s_eta / (v - u);
        const double at = (s_eta > 0.0 && vertex < -1.0 && T > vertex) ? vertex : T;
        if (!(asymptote_gap(d, at) > 0.0)) return false;
    }

    // Relative-velocity margin with slack: xdot - ydot <= slack*mu; the left
    // side increases in t, so checking at T covers the half-line.
    if (!(x_vel(d, T) - y_vel(d, T) <= slack * mu)) return false;

    // Distance margin with slack: gap(t) - slack*mu*t > 0 on (-inf, T].
    {
        const double rate = (2.0 - slack) * mu;  // coefficient of t in m(t)
        const double vertex = s_eta / rate;
        const double at = (s_eta > 0.0 && vertex < -1.0 && T > vertex) ? vertex : T;
        if (!(asymptote_gap(d, at) - slack * mu * at > 0.0)) return false;
    }

    // Advanced strip endpoint: widen the cone by the slack factor and demand
    // a subluminal ydot there. With eta2 == 0, ydot is constant and the
    // condition is void.
    if (d.eta2 > 0.0) {
        double t_plus;
        try {
            t_plus = asymptote_cone_time(d, T, ConeSign::advanced);
        } catch (const DomainError&) {
            return false;
        }
        const double widened = T + slack * (t_plus - T);
        if (!(widened < -1.0)) return false;
        if (!(y_vel(d, widened) > -1.0)) return false;
    }
    return true;
}

}  // namespace

double find_T0(const AsymptoticData& data, double step, double floor) {
    if (!(step > 0.0)) throw DomainError("find_T0 requires step > 0");
    const double slack = 1.1;

    // First grid-aligned candidate strictly left of -1.
    std::int64_t n0 = static_cast<std::int64_t>(std::floor(1.0 / step)) + 1;
    while (!(-static_cast<double>(n0) * step < -1.0)) ++n0;

    auto pass = [&](std::int64_t n) {
        return t0_conditions(data, -static_cast<double>(n) * step, slack);
    };

    if (pass(n0)) return -static_cast<double>(n0) * step;

    std::int64_t lo = n0;  // failing
    std::int64_t hi = n0;
    do {
        lo = hi;
        hi *= 2;
        if (-static_cast<double>(hi) * step < floor)
            throw NoValidT0("no admissible T0 above the configured floor");
    } while (!pass(hi));

    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (pass(mid))
            hi = mid;
        else
            lo = mid;
    }
    return -static_cast<double>(hi) * step;
}

}  // namespace fst

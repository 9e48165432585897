#ifndef FST_ASYMPTOTICS_HPP
#define FST_ASYMPTOTICS_HPP

#include <utility>

#include "fst/errors.hpp"
#include "fst/types.hpp"

namespace fst {

/// Scattering data of the remote past: asymptotic positions, asymptotic
/// velocities and coupling constants, plus the derived log-correction
/// amplitudes eta1 (particle a) and eta2 (particle b).
///
/// The asymptotes read, for t < -1,
///     x(t) = x_minus_inf + u_minus_inf * t - eta1 * ln|t|
///     y(t) = y_minus_inf + v_minus_inf * t + eta2 * ln|t|
struct AsymptoticData {
    double x_minus_inf = 0.0;
    double y_minus_inf = 0.0;
    double u_minus_inf = 0.0;
    double v_minus_inf = 0.0;
    double kappa_a = 0.0;
    double kappa_b = 0.0;
    double eta1 = 0.0;
    double eta2 = 0.0;

    /// Validates -1 < u < v < 1 and kappa >= 0, computes eta1/eta2.
    static AsymptoticData create(double x_inf, double y_inf, double u, double v,
                                 double kappa_a, double kappa_b);

    /// Half the asymptotic relative velocity, mu = (u - v)/2 < 0.
    double mu() const { return 0.5 * (u_minus_inf - v_minus_inf); }
};

/// Closed-form log-correction amplitudes:
///   eta1 = kappa_a (1-u^2)^{3/2} (1-v^2) / (u-v)^2
///   eta2 = kappa_b (1-v^2)^{3/2} (1-u^2) / (u-v)^2
/// Throws DegenerateVelocities unless -1 < u < v < 1.
std::pair<double, double> compute_etas(double kappa_a, double kappa_b,
                                       double u, double v);

/// Position, velocity and acceleration of the requested asymptote at t < -1.
/// Throws DomainError for t >= -1; the formulas are meaningless there.
Kinematics asymptote_eval(const AsymptoticData& data, Particle p, double t);

/// Gap x(t) - y(t) between the asymptotes, t < -1.
double asymptote_gap(const AsymptoticData& data, double t);

/// Intersection time of the light cone with vertex (T, x(T)) and the
/// asymptote y: solves s = T +/- (x(T) - y(s)) on the closed forms.
/// Used for the strip endpoints T^- and T^+ of the initial data.
double asymptote_cone_time(const AsymptoticData& data, double T, ConeSign sign);

/// Largest grid-aligned T0 < -1 (an integer multiple of `step`) such that the
/// whole half-line t <= T0 satisfies: x(t) > y(t), |xdot(t)| < 1, the
/// advanced strip endpoint stays in the asymptote domain with subluminal
/// ydot, and the scattering margins
///     x(t) - y(t) > mu t,   xdot(t) - ydot(t) < mu
/// hold with 10% slack. All conditions are checked through monotonicity of
/// the closed forms; the boundary is located by bisection.
/// Throws NoValidT0 if nothing above `floor` qualifies.
double find_T0(const AsymptoticData& data, double step, double floor = -1.0e7);

}  // namespace fst

#endif

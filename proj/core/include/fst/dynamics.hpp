#ifndef FST_DYNAMICS_HPP
#define FST_DYNAMICS_HPP

#include "fst/asymptotics.hpp"
#include "fst/lightcone.hpp"
#include "fst/trajectory.hpp"

namespace fst {

/// Coupling constants and numeric guards needed by force evaluation.
struct DynamicsContext {
    double kappa_a = 0.0;
    double kappa_b = 0.0;
    double tol_cone = 1e-12;
    double separation_floor = 1e-6;

    static DynamicsContext from(const AsymptoticData& data, double tol_cone = 1e-12,
                                double separation_floor = 1e-6) {
        return {data.kappa_a, data.kappa_b, tol_cone, separation_floor};
    }
};

/// p = v / sqrt(1 - v^2). Throws SuperluminalInput for |v| >= 1.
double momentum_from_velocity(double v);

/// v = p / sqrt(1 + p^2); inverse of momentum_from_velocity, |v| < 1 always.
double velocity_from_momentum(double p);

/// Warm-start seeds for the two cone solves of a force evaluation; useful
/// when sweeping t monotonically.
struct ConeSeeds {
    double retarded = std::numeric_limits<double>::quiet_NaN();
    double advanced = std::numeric_limits<double>::quiet_NaN();
};

/// One force evaluation: rate of the relativistic momentum, the resulting
/// acceleration, the two signed cone contributions and the cone solutions.
struct ForceEval {
    double dpdt = 0.0;
    double acc = 0.0;
    double adv_term = 0.0;
    double ret_term = 0.0;
    ConeResult cone_adv;
    ConeResult cone_ret;
};

/// Momentum rate on `particle` at time t:
///   a:  +kappa_a/2 [ (1+bdot(t2-))/(1-bdot(t2-)) / (a(t)-b(t2-))^2
///                  + (1-bdot(t2+))/(1+bdot(t2+)) / (a(t)-b(t2+))^2 ]
///   b:  the mirrored expression with cones on a and an overall minus sign.
/// Throws SeparationUnderflow when a cone separation drops below the floor.
ForceEval force_on(const TrajectoryPair& pair, Particle particle, double t,
                   const DynamicsContext& ctx, ConeSeeds* seeds = nullptr);

/// Acceleration of `particle` at time tau. Left of the particle's equation
/// window (tau < eq_start) the attached tail's closed-form acceleration is
/// used; from eq_start on the force formula applies.
double acceleration_at(const TrajectoryPair& pair, Particle particle, double tau,
                       double eq_start, const DynamicsContext& ctx,
                       ConeSeeds* seeds = nullptr);

/// Defect of the once-integrated equation of motion over [T, t]:
///   vdot(t) - vdot(T) - integral of the closed-form acceleration,
/// with composite Simpson quadrature at `quad_step`.
double integrated_velocity_residual(const TrajectoryPair& pair, Particle particle,
                                    double T, double t, double quad_step,
                                    const DynamicsContext& ctx);

/// The five terms of the twice-integrated equation rearranged against the
/// asymptote, together with the reconstruction defect. Up to quadrature and
/// interpolation error,
///   a(t) - x(t) = A1 - A2 + A3 + A4 + A5,
/// so |a(t) - x(t)| <= sum_bound always holds within tolerance.
struct WfintTerms {
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    double a4 = 0.0;
    double a5 = 0.0;
    double sum_bound = 0.0;       ///< |A1| + ... + |A5|
    double lhs_gap = 0.0;         ///< |a(t) - x(t)|
    double identity_error = 0.0;  ///< (a(t)-x(t)) - (A1 - A2 + A3 + A4 + A5)
};

/// Evaluates the decomposition for particle a of a conditional solution with
/// start time T at probe time t in [T, t*]. Time derivatives inside the A4
/// and A5 integrands are expanded analytically through the chain rule with
/// accelerations from the equation of motion (or the tail, left of the
/// equation window).
WfintTerms wfint_terms(const TrajectoryPair& pair, const AsymptoticData& data,
                       double T, double t, double quad_step,
                       const DynamicsContext& ctx);

}  // namespace fst

#endif

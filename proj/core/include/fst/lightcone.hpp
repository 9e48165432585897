#ifndef FST_LIGHTCONE_HPP
#define FST_LIGHTCONE_HPP

#include <limits>

#include "fst/trajectory.hpp"
#include "fst/types.hpp"

namespace fst {

/// A cone-time request: whose worldline carries the vertex event, which
/// branch of the cone, and the vertex time.
struct ConeQuery {
    Particle vertex = Particle::A;
    ConeSign sign = ConeSign::advanced;
    double t = 0.0;
};

struct ConeResult {
    double cone_time = 0.0;   ///< solved intersection time on the other worldline
    double separation = 0.0;  ///< spatial distance across the cone, always > 0
    double derivative = 0.0;  ///< d(cone_time)/dt of the implicit solution
    double residual = 0.0;    ///< defect of the cone equation at cone_time
    int iterations = 0;
};

/// Solves the implicit cone-time equation by fixed-point iteration
///     s <- t +/- (a(t) - b(s))        (vertex on a)
///     s <- t +/- (a(s) - b(t))        (vertex on b)
/// seeded with s0 = t +/- (a(t) - b(t)) unless `seed` is finite. The map
/// contracts geometrically with rate bounded by the other worldline's
/// velocity bound. The returned derivative follows the implicit relation
///     d t2+-/dt = (1 +/- adot(t)) / (1 +/- bdot(t2+-))
/// and its mirror for vertex b.
ConeResult solve_cone(const TrajectoryPair& pair, const ConeQuery& q,
                      double tol_cone = 1e-12,
                      double seed = std::numeric_limits<double>::quiet_NaN(),
                      int max_iterations = 400);

/// True iff the separation obeys (a(t)-b(t))/2 <= sep <= (a(t)-b(t))/(1-V).
bool cone_bounds_check(const TrajectoryPair& pair, const ConeResult& res,
                       double t, double V);

}  // namespace fst

#endif

#include "fst/lightcone.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace fst {

ConeResult solve_cone(const TrajectoryPair& pair, const ConeQuery& q,
                      double tol_cone, double seed, int max_iterations) {
    const double dir = (q.sign == ConeSign::advanced) ? 1.0 : -1.0;
    const Trajectory& vertex_traj = (q.vertex == Particle::A) ? pair.a : pair.b;
    const Trajectory& other = (q.vertex == Particle::A) ? pair.b : pair.a;
    // Vertex on a looks up b across the cone and the separation is
    // a(t) - b(s); vertex on b looks up a and the separation is a(s) - b(t).
    const double vsign = (q.vertex == Particle::A) ? 1.0 : -1.0;

    const PhaseSample vx = vertex_traj.eval(q.t);

    auto next = [&](double s) {
        return q.t + dir * vsign * (vx.pos - other.eval(s).pos);
    };

    double s = std::isfinite(seed) ? seed : next(q.t);
    int it = 0;
    double update = std::numeric_limits<double>::infinity();
    try {
        for (; it < max_iterations; ++it) {
            const double s_next = next(s);
            update = std::abs(s_next - s);
            s = s_next;
            if (update <= 0.5 * tol_cone) break;
        }
    } catch (const OutOfDomain& e) {
        std::ostringstream os;
        os << "cone iteration left the evaluable domain: " << e.what();
        throw DomainExceeded(os.str());
    }
    if (update > 0.5 * tol_cone) {
        std::ostringstream os;
        os << "cone solve did not reach tol=" << tol_cone << " after "
           << max_iterations << " iterations (vertex velocity data near 1?)";
        throw NoConvergence(os.str());
    }

    ConeResult r;
    r.cone_time = s;
    const PhaseSample ox = other.eval(s);
    r.separation = vsign * (vx.pos - ox.pos);
    r.residual = std::abs(s - q.t - dir * r.separation);
    r.iterations = it + 1;
    if (q.vertex == Particle::A) {
        r.derivative = (1.0 + dir * vx.vel) / (1.0 + dir * ox.vel);
    } else {
        r.derivative = (1.0 - dir * vx.vel) / (1.0 - dir * ox.vel);
    }
    if (!(r.separation > 0.0)) {
        std::ostringstream os;
        os << "cone solve found non-positive separation " << r.separation
           << " at t=" << q.t << " (trajectories not ordered a > b?)";
        throw DomainExceeded(os.str());
    }
    return r;
}

bool cone_bounds_check(const TrajectoryPair& pair, const ConeResult& res,
                       double t, double V) {
    const double gap = pair.a.eval(t).pos - pair.b.eval(t).pos;
    return 0.5 * gap <= res.separation && res.separation <= gap / (1.0 - V);
}

}  // namespace fst

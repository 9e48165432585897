#ifndef FST_TESTS_SUPPORT_HPP
#define FST_TESTS_SUPPORT_HPP

#include <cmath>
#include <functional>
#include <random>

#include "fst/trajectory.hpp"

namespace fst::testing {

/// Samples pos/vel callables onto a uniform grid; no tail, wide linear
/// extrapolation on both edges so cone queries can roam.
inline Trajectory sampled_trajectory(double lo, double hi, double step,
                                     const std::function<double(double)>& pos,
                                     const std::function<double(double)>& vel,
                                     double extrap_width = 1e6) {
    TrajectoryBuilder b(lo, step);
    b.set_right_edge({extrap_width});
    const auto n = static_cast<std::size_t>(std::llround((hi - lo) / step));
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = lo + step * static_cast<double>(i);
        b.append_node(t, pos(t), vel(t));
    }
    return b.freeze();
}

inline Trajectory constant_trajectory(double lo, double hi, double step,
                                      double value) {
    return sampled_trajectory(
        lo, hi, step, [&](double) { return value; }, [](double) { return 0.0; });
}

inline Trajectory linear_trajectory(double lo, double hi, double step,
                                    double p0, double v) {
    return sampled_trajectory(
        lo, hi, step, [&](double t) { return p0 + v * t; },
        [&](double) { return v; });
}

/// The canonical pair of the cone examples: a == 1, b == -1 + 0.5 t.
inline TrajectoryPair linear_example_pair() {
    return {constant_trajectory(-8.0, 8.0, 0.25, 1.0),
            linear_trajectory(-8.0, 8.0, 0.25, -1.0, 0.5)};
}

inline std::mt19937_64 rng(unsigned seed = 42) { return std::mt19937_64{seed}; }

}  // namespace fst::testing

#endif

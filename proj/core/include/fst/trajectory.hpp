#ifndef FST_TRAJECTORY_HPP
#define FST_TRAJECTORY_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fst/asymptotics.hpp"
#include "fst/errors.hpp"
#include "fst/types.hpp"

namespace fst {

/// Closed-form source for times left of the grid:
///     pos(t) = offset + slope * t + log_coeff * ln(-t)
/// For particle a the coefficient is -eta1, for particle b it is +eta2.
/// With log_coeff == 0 the tail is a global straight line; otherwise it is
/// only defined for t < -1.
struct AsymptoteTail {
    double offset = 0.0;
    double slope = 0.0;
    double log_coeff = 0.0;

    static AsymptoteTail from(const AsymptoticData& data, Particle p);
    Kinematics eval(double t) const;
};

/// How far past grid_end (and, for tail-less trajectories, before
/// grid_start) linear extrapolation with the terminal node's velocity is
/// allowed. Queries beyond raise OutOfDomain.
struct RightEdgePolicy {
    double extrap_width = 0.0;
};

/// Immutable dense C^1 trajectory on a uniform grid. Positions are
/// interpolated by cubic Hermite splines with the stored node velocities as
/// slopes; velocities are interpolated linearly between nodes. Left of the
/// grid the attached asymptote tail (when present) is exact.
class Trajectory {
public:
    /// Empty trajectory; only assignable, not evaluable.
    Trajectory() = default;

    double grid_start() const { return grid_start_; }
    double grid_end() const { return grid_start_ + step_ * static_cast<double>(pos_.size() - 1); }
    double step() const { return step_; }
    std::size_t size() const { return pos_.size(); }

    double node_time(std::size_t i) const { return grid_start_ + step_ * static_cast<double>(i); }
    double node_pos(std::size_t i) const { return pos_[i]; }
    double node_vel(std::size_t i) const { return vel_[i]; }
    std::span<const double> positions() const { return pos_; }
    std::span<const double> velocities() const { return vel_; }

    bool has_tail() const { return tail_.has_value(); }
    const AsymptoteTail& tail() const { return *tail_; }
    const RightEdgePolicy& right_edge() const { return edge_; }

    /// Rightmost evaluable time (grid_end plus the declared margin).
    double max_eval_time() const { return grid_end() + edge_.extrap_width; }
    /// Leftmost evaluable time: unboundedly negative with a tail, otherwise
    /// grid_start minus the declared margin.
    double min_eval_time() const;

    PhaseSample eval(double t) const;

private:
    friend class TrajectoryBuilder;

    double grid_start_ = 0.0;
    double step_ = 1.0;
    std::vector<double> pos_;
    std::vector<double> vel_;
    std::optional<AsymptoteTail> tail_;
    RightEdgePolicy edge_;
};

/// Single-owner builder; freeze() validates all invariants and yields the
/// immutable trajectory.
class TrajectoryBuilder {
public:
    TrajectoryBuilder(double grid_start, double step);

    TrajectoryBuilder& set_tail(const AsymptoteTail& tail);
    TrajectoryBuilder& set_right_edge(const RightEdgePolicy& edge);

    /// Appends the next node; t must advance by exactly `step`.
    void append_node(double t, double pos, double vel);

    Trajectory freeze();

private:
    Trajectory traj_;
    bool frozen_ = false;
};

struct TrajectoryPair {
    Trajectory a;
    Trajectory b;
};

/// Discretized Banach-space distance between two trajectory pairs:
///   max(|a1(0)-a2(0)|, |b1(0)-b2(0)|,
///       sup over probe of |adot1-adot2|, sup over probe of |bdot1-bdot2|)
/// plus the closed-form supremum of the tail velocity differences left of
/// both grids. Throws IncompatibleDomains when 0 is not evaluable.
double pair_norm_distance(const TrajectoryPair& p1, const TrajectoryPair& p2,
                          std::span<const double> probe_grid);

/// Union of both pairs' grid nodes within [lo, hi] plus interval midpoints.
std::vector<double> make_probe_grid(const TrajectoryPair& p1,
                                    const TrajectoryPair& p2, double lo,
                                    double hi);

}  // namespace fst

#endif

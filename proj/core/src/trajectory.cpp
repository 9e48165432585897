#include "fst/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fst {

AsymptoteTail AsymptoteTail::from(const AsymptoticData& data, Particle p) {
    AsymptoteTail t;
    if (p == Particle::A) {
        t.offset = data.x_minus_inf;
        t.slope = data.u_minus_inf;
        t.log_coeff = -data.eta1;
    } else {
        t.offset = data.y_minus_inf;
        t.slope = data.v_minus_inf;
        t.log_coeff = data.eta2;
    }
    return t;
}

Kinematics AsymptoteTail::eval(double t) const {
    Kinematics k;
    if (log_coeff == 0.0) {
        k.pos = offset + slope * t;
        k.vel = slope;
        k.acc = 0.0;
        return k;
    }
    if (!(t < -1.0))
        throw OutOfDomain("asymptote tail queried at t >= -1");
    k.pos = offset + slope * t + log_coeff * std::log(-t);
    k.vel = slope + log_coeff / t;
    k.acc = -log_coeff / (t * t);
    return k;
}

double Trajectory::min_eval_time() const {
    if (tail_) return -std::numeric_limits<double>::infinity();
    return grid_start_ - edge_.extrap_width;
}

PhaseSample Trajectory::eval(double t) const {
    const std::size_t n = pos_.size();
    if (n < 2) throw OutOfDomain("trajectory has no nodes");
    const double end = grid_end();

    if (t < grid_start_) {
        if (tail_) {
            const Kinematics k = tail_->eval(t);
            return {k.pos, k.vel};
        }
        if (grid_start_ - t > edge_.extrap_width + 1e-12) {
            std::ostringstream os;
            os << "query t=" << t << " left of evaluable domain start "
               << grid_start_ - edge_.extrap_width;
            throw OutOfDomain(os.str());
        }
        return {pos_.front() + vel_.front() * (t - grid_start_), vel_.front()};
    }
    if (t > end) {
        if (t - end > edge_.extrap_width + 1e-12) {
            std::ostringstream os;
            os << "query t=" << t << " beyond evaluable domain end "
               << end + edge_.extrap_width;
            throw OutOfDomain(os.str());
        }
        return {pos_.back() + vel_.back() * (t - end), vel_.back()};
    }

    std::size_t i = static_cast<std::size_t>((t - grid_start_) / step_);
    if (i >= n - 1) i = n - 2;
    const double t_i = grid_start_ + step_ * static_cast<double>(i);
    const double xi = (t - t_i) / step_;

    const double p0 = pos_[i], p1 = pos_[i + 1];
    const double v0 = vel_[i], v1 = vel_[i + 1];

    const double xi2 = xi * xi;
    const double xi3 = xi2 * xi;
    const double h00 = 1.0 - 3.0 * xi2 + 2.0 * xi3;
    const double h10 = xi - 2.0 * xi2 + xi3;
    const double h01 = 3.0 * xi2 - 2.0 * xi3;
    const double h11 = xi3 - xi2;

    PhaseSample s;
    s.pos = h00 * p0 + h10 * step_ * v0 + h01 * p1 + h11 * step_ * v1;
    s.vel = (1.0 - xi) * v0 + xi * v1;
    return s;
}

TrajectoryBuilder::TrajectoryBuilder(double grid_start, double step) {
    if (!(step > 0.0)) throw NonUniformStep("step must be positive");
    traj_.grid_start_ = grid_start;
    traj_.step_ = step;
}

TrajectoryBuilder& TrajectoryBuilder::set_tail(const AsymptoteTail& tail) {
    traj_.tail_ = tail;
    return *this;
}

TrajectoryBuilder& TrajectoryBuilder::set_right_edge(const RightEdgePolicy& edge) {
    traj_.edge_ = edge;
    return *this;
}

void TrajectoryBuilder::append_node(double t, double pos, double vel) {
    const double expected =
        traj_.grid_start_ + traj_.step_ * static_cast<double>(traj_.pos_.size());
    if (std::abs(t - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
        std::ostringstream os;
        os << "node time " << t << " does not advance the grid by one step"
           << " (expected " << expected << ")";
        throw NonUniformStep(os.str());
    }
    if (!(std::abs(vel) < 1.0)) {
        std::ostringstream os;
        os << "node velocity " << vel << " at t=" << t << " is not subluminal";
        throw SuperluminalSample(os.str());
    }
    traj_.pos_.push_back(pos);
    traj_.vel_.push_back(vel);
}

Trajectory TrajectoryBuilder::freeze() {
    if (frozen_) throw Error("builder already frozen");
    if (traj_.pos_.size() < 2)
        throw Error("trajectory needs at least two nodes");
    if (traj_.tail_) {
        const Kinematics k = traj_.tail_->eval(traj_.grid_start_);
        const double dp = std::abs(traj_.pos_.front() - k.pos);
        const double dv = std::abs(traj_.vel_.front() - k.vel);
        if (dp > 1e-12 * std::max(1.0, std::abs(k.pos)) ||
            dv > 1e-12 * std::max(1.0, std::abs(k.vel))) {
            std::ostringstream os;
            os << "first node (" << traj_.pos_.front() << ", "
               << traj_.vel_.front() << ") does not continue the tail ("
               << k.pos << ", " << k.vel << ") at t=" << traj_.grid_start_;
            throw TailMismatch(os.str());
        }
    }
    frozen_ = true;
    return std::move(traj_);
}

namespace {

// sup over t <= t_min of |c + d/t|; the map 1/t is monotone on (-inf, t_min],
// so the supremum sits at an endpoint.
double tail_vel_sup(double c, double d, double t_min) {
    return std::max(std::abs(c), std::abs(c + d / t_min));
}

double tail_pair_sup(const Trajectory& t1, const Trajectory& t2) {
    if (!t1.has_tail() || !t2.has_tail()) return 0.0;
    const double t_min = std::min(t1.grid_start(), t2.grid_start());
    const double dc = t1.tail().slope - t2.tail().slope;
    const double dd = t1.tail().log_coeff - t2.tail().log_coeff;
    if (dc == 0.0 && dd == 0.0) return 0.0;
    return tail_vel_sup(dc, dd, t_min);
}

}  // namespace

double pair_norm_distance(const TrajectoryPair& p1, const TrajectoryPair& p2,
                          std::span<const double> probe_grid) {
    for (const Trajectory* t : {&p1.a, &p1.b, &p2.a, &p2.b}) {
        if (0.0 > t->max_eval_time() || 0.0 < t->min_eval_time())
            throw IncompatibleDomains("t = 0 is outside an evaluable domain");
    }
    double d = std::abs(p1.a.eval(0.0).pos - p2.a.eval(0.0).pos);
    d = std::max(d, std::abs(p1.b.eval(0.0).pos - p2.b.eval(0.0).pos));
    for (double t : probe_grid) {
        d = std::max(d, std::abs(p1.a.eval(t).vel - p2.a.eval(t).vel));
        d = std::max(d, std::abs(p1.b.eval(t).vel - p2.b.eval(t).vel));
    }
    d = std::max(d, tail_pair_sup(p1.a, p2.a));
    d = std::max(d, tail_pair_sup(p1.b, p2.b));
    return d;
}

std::vector<double> make_probe_grid(const TrajectoryPair& p1,
                                    const TrajectoryPair& p2, double lo,
                                    double hi) {
    std::vector<double> nodes;
    for (const Trajectory* t : {&p1.a, &p1.b, &p2.a, &p2.b}) {
        const std::size_t n = t->size();
        for (std::size_t i = 0; i < n; ++i) {
            const double tt = t->node_time(i);
            if (tt >= lo && tt <= hi) nodes.push_back(tt);
        }
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end(),
                            [](double a, double b) {
                                return std::abs(a - b) < 1e-12;
                            }),
                nodes.end());

    std::vector<double> probe;
    probe.reserve(2 * nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        probe.push_back(nodes[i]);
        if (i + 1 < nodes.size())
            probe.push_back(0.5 * (nodes[i] + nodes[i + 1]));
    }

    // Keep the probe bounded for very long grids.
    constexpr std::size_t kMaxProbe = 800000;
    if (probe.size() > kMaxProbe) {
        std::vector<double> thin;
        const std::size_t stride = probe.size() / kMaxProbe + 1;
        for (std::size_t i = 0; i < probe.size(); i += stride)
            thin.push_back(probe[i]);
        probe.swap(thin);
    }
    return probe;
}

}  // namespace fst

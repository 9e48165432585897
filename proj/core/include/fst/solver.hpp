#ifndef FST_SOLVER_HPP
#define FST_SOLVER_HPP

#include <functional>
#include <vector>

#include "fst/asymptotics.hpp"
#include "fst/dynamics.hpp"
#include "fst/trajectory.hpp"

namespace fst {

enum class SweepMode { jacobi, gauss_seidel };

struct SolverConfig {
    double step = 1e-2;
    double t_end = 0.0;        ///< right edge of the reported window, >= 0
    double margin = 0.0;       ///< right-edge buffer; 0 selects the automatic width
    double tol_fix = 1e-10;    ///< relaxation stop, in norm units
    int max_picard = 80;
    double damping = 1.0;      ///< in (0, 1]; halved automatically on divergence
    double tol_cone = 1e-12;
    std::vector<double> T_schedule = {-100.0, -200.0, -400.0, -800.0};
    double tol_global = 1e-3;
    double quad_step = 0.0;    ///< 0 selects step/2
    double separation_floor = 1e-6;
    SweepMode sweep = SweepMode::jacobi;
    bool warm_family = true;   ///< seed each family member from the previous one
    int threads = 0;           ///< 0: FST_THREADS env var, else 2

    double resolved_quad_step() const { return quad_step > 0.0 ? quad_step : 0.5 * step; }
    int resolved_threads() const;
    void validate() const;     ///< throws ConfigError on malformed settings
};

/// A trajectory pair solving the equations of motion for t >= T (particle a)
/// and t >= T_plus (particle b), extended by the asymptotes into the past.
struct ConditionalSolution {
    TrajectoryPair pair;
    double T = 0.0;
    double T_minus = 0.0;
    double T_plus = 0.0;
    int picard_iterations = 0;
    double final_update_norm = 0.0;
    std::vector<double> update_norms;  ///< one entry per relaxation sweep
};

/// The T -> -inf family and the distances between successive members.
struct GlobalRun {
    std::vector<ConditionalSolution> family;
    std::vector<double> deltas;
    bool converged = false;
    SolverConfig config;
    AsymptoticData data;

    const TrajectoryPair& final_pair() const { return family.back().pair; }
};

/// Non-convergence of the family within the configured schedule; carries the
/// partial run so callers can still inspect and persist it.
class ScheduleExhausted : public Error {
public:
    ScheduleExhausted(const std::string& what, GlobalRun run)
        : Error(what), run_(std::move(run)) {}
    const GlobalRun& run() const { return run_; }

private:
    GlobalRun run_;
};

/// One node of the relativistic state integration.
struct IntegrationNode {
    double t = 0.0;
    double pos = 0.0;
    double momentum = 0.0;
    double vel = 0.0;
};

/// Fixed-step classical Runge-Kutta in (position, momentum) for
///   posdot = v(momentum),  momentumdot = dpdt(t),
/// with a momentum rate that depends on time only (frozen delay fields).
/// The momentum form keeps every stage subluminal structurally. Sums are
/// compensated so that long free-motion runs stay at roundoff accuracy.
std::vector<IntegrationNode> integrate_state(
    double t0, double pos0, double momentum0, double step, std::size_t n_steps,
    const std::function<double(double)>& dpdt);

/// Builds the conditional solution for start time T by waveform relaxation:
/// both particles are integrated against the frozen previous iterate until
/// the pair stabilizes in the norm. The seed (`iterate 0`) is the asymptote
/// pair extended linearly to the right, unless `warm_seed` is given.
ConditionalSolution solve_conditional(const AsymptoticData& data, double T,
                                      const SolverConfig& cfg,
                                      const TrajectoryPair* warm_seed = nullptr);

/// Runs the whole T-schedule and records the Cauchy distances between
/// successive members. Throws ScheduleExhausted when the final distance
/// does not reach tol_global.
GlobalRun solve_global(const AsymptoticData& data, const SolverConfig& cfg);

}  // namespace fst

#endif

#ifndef FST_DIAGNOSTICS_HPP
#define FST_DIAGNOSTICS_HPP

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fst/solver.hpp"

namespace fst {

/// Decay envelopes the estimates are fitted against.
enum class DecayModel { c_over_t, c_logt_over_t, c_over_sqrt_t };

double decay_model_value(DecayModel m, double t);

struct FitOutcome {
    double C = 0.0;
    double worst_violation = 0.0;  ///< 0 by construction on the fit set
};

/// C = max over samples of value / model(t). Turns a "there exists C"
/// statement into a reproducible number. Requires at least 10 samples with
/// |t| > 1; throws EmptySamples otherwise.
FitOutcome fit_bound(std::span<const std::pair<double, double>> samples,
                     DecayModel model);

/// max over samples of value - C * model(t); positive means the frozen
/// bound fails on this (validation) set.
double validate_bound(double C, DecayModel model,
                      std::span<const std::pair<double, double>> samples);

struct CheckResult {
    std::string name;
    double window_lo = 0.0;
    double window_hi = 0.0;
    std::map<std::string, double> fitted_constants;
    double worst_margin = 0.0;  ///< positive: satisfied with room
    bool pass = false;
    bool validated = true;  ///< false when no held-out member was available
    std::vector<std::pair<double, double>> samples;
};

struct DiagnosticsConfig {
    /// Right edge of the far-past windows; NaN selects T_schedule.front()/2.
    double t0 = std::numeric_limits<double>::quiet_NaN();
    double residual_tol = 1e-4;
    double quad_step = 0.0;  ///< 0: the solver's resolved quadrature step
    int max_samples_per_member = 400;
    double rel_slack = 0.25;      ///< allowed relative violation on held-out members
    double eta_spread_tol = 0.20; ///< per-member constant stability
    double v_spread_tol = 0.05;
    double identity_tol = 1e-6;
    double ratio_growth = 1.5;
    std::vector<double> wfint_fractions = {0.9, 0.8, 0.7, 0.6, 0.5};
};

struct DiagnosticsReport {
    std::vector<CheckResult> checks;
    std::map<std::string, double> constants;

    bool all_pass() const;
    const CheckResult* find(const std::string& name) const;
};

/// Runs the full suite over a converged family (at least two members):
/// velocity brackets, closeness to the asymptotes, the scattering window,
/// uniform velocity/separation bounds, cone velocity gaps, the eta-limit
/// closeness, decay of the decomposition terms, the asymptote ratio across
/// the family, integrated equation residuals and velocity monotonicity.
/// Constants are fitted on the first member and validated on the others.
DiagnosticsReport run_all(const GlobalRun& run, const AsymptoticData& data,
                          const DiagnosticsConfig& cfg);

/// Subset of the suite for a single ingested pair; fitted bounds cannot be
/// validated on held-out members and are marked accordingly.
DiagnosticsReport run_single(const ConditionalSolution& member,
                             const AsymptoticData& data,
                             const SolverConfig& solver_cfg,
                             const DiagnosticsConfig& cfg);

/// JSON document with top-level keys schema_version, checks, constants,
/// samples.
std::string report_to_json(const DiagnosticsReport& report);

}  // namespace fst

#endif

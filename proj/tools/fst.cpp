#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fst/csv.hpp"
#include "fst/diagnostics.hpp"
#include "fst/solver.hpp"
#include "config.hpp"
#include "svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoConvergence = 2;
constexpr int kExitNumeric = 3;

std::string family_file_name(double T) {
    std::ostringstream os;
    os << "family_T" << T << ".csv";
    return os.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw fst::Error("cannot write '" + path.string() + "'");
    out << content;
}

void write_pair_csv(const fs::path& path, const fst::TrajectoryPair& pair,
                    double t_lo, double t_hi) {
    std::ofstream out(path);
    if (!out) throw fst::Error("cannot write '" + path.string() + "'");
    fst::write_trajectory_csv(out, pair, t_lo, t_hi);
}

fst::cli::Series sampled_series(const fst::Trajectory& traj, double lo,
                                double hi, const std::string& label,
                                const std::string& color, bool dashed = false,
                                int max_points = 600) {
    fst::cli::Series s;
    s.label = label;
    s.color = color;
    s.dashed = dashed;
    const double span = hi - lo;
    for (int i = 0; i <= max_points; ++i) {
        const double t = lo + span * i / max_points;
        s.points.emplace_back(t, traj.eval(t).pos);
    }
    return s;
}

void emit_worldlines_svg(const fs::path& path, const fst::GlobalRun& run) {
    const fst::ConditionalSolution& last = run.family.back();
    const double lo = last.T;
    const double hi = run.config.t_end;
    std::vector<fst::cli::Series> series;
    series.push_back(sampled_series(last.pair.a, lo, hi, "a", "#b23a1f"));
    series.push_back(sampled_series(last.pair.b, lo, hi, "b", "#1f6fb2"));

    const fst::AsymptoteTail xa =
        fst::AsymptoteTail::from(run.data, fst::Particle::A);
    const fst::AsymptoteTail yb =
        fst::AsymptoteTail::from(run.data, fst::Particle::B);
    fst::cli::Series sx{"x asymptote", "#e0906f", true, {}};
    fst::cli::Series sy{"y asymptote", "#6fa5d4", true, {}};
    const double hi_asym = std::min(hi, -1.5);
    for (int i = 0; i <= 400; ++i) {
        const double t = lo + (hi_asym - lo) * i / 400.0;
        sx.points.emplace_back(t, xa.eval(t).pos);
        sy.points.emplace_back(t, yb.eval(t).pos);
    }
    series.push_back(std::move(sx));
    series.push_back(std::move(sy));

    std::ostringstream os;
    fst::cli::write_svg_plot(os, {"worldlines and asymptotes", "t", "position"},
                             series);
    write_file(path, os.str());
}

void emit_gap_svg(const fs::path& path, const fst::GlobalRun& run) {
    const fst::ConditionalSolution& last = run.family.back();
    const fst::AsymptoteTail xa =
        fst::AsymptoteTail::from(run.data, fst::Particle::A);
    const fst::AsymptoteTail yb =
        fst::AsymptoteTail::from(run.data, fst::Particle::B);
    fst::cli::Series sa{"|a - x|", "#b23a1f", false, {}};
    fst::cli::Series sb{"|b - y|", "#1f6fb2", false, {}};
    const double lo = last.T, hi = std::min(run.config.t_end, -1.5);
    for (int i = 0; i <= 500; ++i) {
        const double t = lo + (hi - lo) * i / 500.0;
        sa.points.emplace_back(t, std::abs(last.pair.a.eval(t).pos - xa.eval(t).pos));
        sb.points.emplace_back(t, std::abs(last.pair.b.eval(t).pos - yb.eval(t).pos));
    }
    std::ostringstream os;
    fst::cli::PlotSpec spec{"gap to the asymptotes", "t", "distance"};
    spec.log_y = true;
    fst::cli::write_svg_plot(os, spec, {sa, sb});
    write_file(path, os.str());
}

void emit_decay_svg(const fs::path& path, const fst::DiagnosticsReport& report) {
    static const char* kColors[] = {"#b23a1f", "#1f6fb2", "#3a9e4e",
                                    "#8b5fb4", "#c28f1e"};
    std::vector<fst::cli::Series> series;
    int ci = 0;
    for (const char* name :
         {"velocity_bracket_a", "asymptote_closeness_a", "eta_closeness_a",
          "equation_residual_a", "decomposition_decay"}) {
        const fst::CheckResult* c = report.find(name);
        if (!c || c->samples.empty()) continue;
        fst::cli::Series s;
        s.label = name;
        s.color = kColors[ci++ % 5];
        for (auto [t, v] : c->samples) s.points.emplace_back(std::abs(t), v);
        std::sort(s.points.begin(), s.points.end());
        series.push_back(std::move(s));
    }
    if (series.empty()) return;
    std::ostringstream os;
    fst::cli::PlotSpec spec{"diagnostic decay curves", "|t|", "value"};
    spec.log_y = true;
    fst::cli::write_svg_plot(os, spec, series);
    write_file(path, os.str());
}

json convergence_json(const fst::GlobalRun& run, bool family_csv) {
    json j;
    j["schema_version"] = 1;
    j["converged"] = run.converged;
    j["t_end"] = run.config.t_end;
    j["step"] = run.config.step;
    j["T"] = json::array();
    j["deltas"] = run.deltas;
    j["picard_iterations"] = json::array();
    j["family_files"] = json::object();
    for (const fst::ConditionalSolution& s : run.family) {
        j["T"].push_back(s.T);
        j["picard_iterations"].push_back(s.picard_iterations);
        if (family_csv) j["family_files"][std::to_string(s.T)] = family_file_name(s.T);
    }
    return j;
}

void write_outputs(const fst::GlobalRun& run, const fst::cli::RunConfig& cfg,
                   const fs::path& out_dir) {
    fs::create_directories(out_dir);
    const fst::ConditionalSolution& last = run.family.back();
    if (cfg.output.csv) {
        write_pair_csv(out_dir / "trajectory.csv", last.pair, last.T,
                       run.config.t_end);
        if (cfg.output.family_csv) {
            for (const fst::ConditionalSolution& s : run.family)
                write_pair_csv(out_dir / family_file_name(s.T), s.pair, s.T,
                               run.config.t_end);
        }
    }
    if (cfg.output.json) {
        write_file(out_dir / "convergence.json",
                   convergence_json(run, cfg.output.csv && cfg.output.family_csv)
                       .dump(2));
    }
    if (cfg.output.svg) {
        if (cfg.output.plots.count("worldlines"))
            emit_worldlines_svg(out_dir / "trajectories.svg", run);
        if (cfg.output.plots.count("gap"))
            emit_gap_svg(out_dir / "gap.svg", run);
    }
}

int cmd_solve(const std::string& config_path, const std::string& out_override) {
    fst::cli::RunConfig cfg;
    try {
        cfg = fst::cli::load_run_config(config_path);
    } catch (const fst::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    }
    const fs::path out_dir =
        out_override.empty() ? fs::path(cfg.output.directory) : fs::path(out_override);

    try {
        const fst::GlobalRun run = fst::solve_global(cfg.data, cfg.solver);
        write_outputs(run, cfg, out_dir);
        std::cout << "converged: final delta = "
                  << (run.deltas.empty() ? 0.0 : run.deltas.back()) << " over "
                  << run.family.size() << " family members\n";
        return kExitOk;
    } catch (const fst::ScheduleExhausted& e) {
        write_outputs(e.run(), cfg, out_dir);
        std::cerr << "no convergence: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const fst::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const fst::Error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
}

fst::TrajectoryPair load_pair(const fs::path& csv_path,
                              const fst::AsymptoticData& data,
                              double extrap_width) {
    std::ifstream in(csv_path);
    if (!in) throw fst::ConfigError("cannot open '" + csv_path.string() + "'");
    const fst::TrajectoryCsv csv = fst::read_trajectory_csv(in);
    return fst::pair_from_csv(csv, data, extrap_width);
}

fst::ConditionalSolution member_from_pair(fst::TrajectoryPair pair,
                                          const fst::AsymptoticData& data) {
    fst::ConditionalSolution member;
    member.T = pair.a.grid_start();
    member.T_minus = fst::asymptote_cone_time(data, member.T, fst::ConeSign::retarded);
    member.T_plus = fst::asymptote_cone_time(data, member.T, fst::ConeSign::advanced);
    member.pair = std::move(pair);
    return member;
}

int cmd_check(const std::string& traj_path, const std::string& config_path,
              const std::string& out_override) {
    fst::cli::RunConfig cfg;
    try {
        cfg = fst::cli::load_run_config(config_path);
    } catch (const fst::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    }
    const fs::path traj(traj_path);
    const fs::path out_dir =
        out_override.empty() ? traj.parent_path() : fs::path(out_override);

    try {
        const double width = 50.0;
        fst::TrajectoryPair pair = load_pair(traj, cfg.data, width);

        // Align the solver view with the stored grid.
        fst::SolverConfig scfg = cfg.solver;
        scfg.step = pair.a.step();
        scfg.t_end = pair.a.grid_end();

        // A sibling convergence manifest turns the check into a full family
        // run; without one only the single-pair subset executes.
        fst::DiagnosticsReport report;
        const fs::path manifest = traj.parent_path() / "convergence.json";
        bool family_mode = false;
        if (fs::exists(manifest)) {
            std::ifstream mf(manifest);
            json j = json::parse(std::string((std::istreambuf_iterator<char>(mf)),
                                             std::istreambuf_iterator<char>()),
                                 nullptr, true, true);
            if (j.contains("family_files") && j["family_files"].size() >= 2) {
                fst::GlobalRun run;
                run.data = cfg.data;
                run.config = scfg;
                for (const auto& [key, file] : j["family_files"].items()) {
                    const fs::path p = traj.parent_path() / file.get<std::string>();
                    run.family.push_back(member_from_pair(
                        load_pair(p, cfg.data, width), cfg.data));
                }
                std::sort(run.family.begin(), run.family.end(),
                          [](const auto& x, const auto& y) { return x.T > y.T; });
                run.config.T_schedule.clear();
                for (const auto& m : run.family)
                    run.config.T_schedule.push_back(m.T);
                family_mode = true;
                report = fst::run_all(run, cfg.data, cfg.diagnostics);
            }
        }
        if (!family_mode) {
            const fst::ConditionalSolution member =
                member_from_pair(std::move(pair), cfg.data);
            report = fst::run_single(member, cfg.data, scfg, cfg.diagnostics);
        }

        fs::create_directories(out_dir);
        write_file(out_dir / "report.json", fst::report_to_json(report));
        if (cfg.output.svg && cfg.output.plots.count("decay"))
            emit_decay_svg(out_dir / "decay.svg", report);

        int failed = 0;
        for (const fst::CheckResult& c : report.checks) {
            std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name
                      << " (margin " << c.worst_margin << ")\n";
            if (!c.pass) ++failed;
        }
        std::cout << (failed == 0 ? "all checks passed" : "checks failed")
                  << " (" << report.checks.size() << " run)\n";
        return failed == 0 ? kExitOk : kExitUsage;
    } catch (const fst::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const fst::Error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
}

int cmd_cone(const std::string& traj_path, const std::string& config_path,
             double t, const std::string& sign_str, const std::string& vertex_str) {
    try {
        std::ifstream in(traj_path);
        if (!in) {
            std::cerr << "error: cannot open '" << traj_path << "'\n";
            return kExitUsage;
        }
        const fst::TrajectoryCsv csv = fst::read_trajectory_csv(in);

        fst::TrajectoryPair pair;
        double tol_cone = 1e-12;
        if (!config_path.empty()) {
            const fst::cli::RunConfig cfg = fst::cli::load_run_config(config_path);
            pair = fst::pair_from_csv(csv, cfg.data, 50.0);
            tol_cone = cfg.solver.tol_cone;
        } else {
            // No tails available; rebuild on the stored window only.
            const std::size_t n = csv.t.size();
            const double step = csv.t[1] - csv.t[0];
            fst::TrajectoryBuilder ba(csv.t[0], step), bb(csv.t[0], step);
            ba.set_right_edge({50.0});
            bb.set_right_edge({50.0});
            for (std::size_t i = 0; i < n; ++i) {
                ba.append_node(csv.t[i], csv.a[i], csv.adot[i]);
                bb.append_node(csv.t[i], csv.b[i], csv.bdot[i]);
            }
            pair = {ba.freeze(), bb.freeze()};
        }

        fst::ConeQuery q;
        q.t = t;
        if (sign_str == "adv")
            q.sign = fst::ConeSign::advanced;
        else if (sign_str == "ret")
            q.sign = fst::ConeSign::retarded;
        else {
            std::cerr << "error: --sign must be adv or ret\n";
            return kExitUsage;
        }
        if (vertex_str == "a")
            q.vertex = fst::Particle::A;
        else if (vertex_str == "b")
            q.vertex = fst::Particle::B;
        else {
            std::cerr << "error: --vertex must be a or b\n";
            return kExitUsage;
        }

        const fst::ConeResult r = fst::solve_cone(pair, q, tol_cone);
        json j;
        j["cone_time"] = r.cone_time;
        j["separation"] = r.separation;
        j["derivative"] = r.derivative;
        j["residual"] = r.residual;
        j["iterations"] = r.iterations;
        std::cout << j.dump(2) << "\n";
        return kExitOk;
    } catch (const fst::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const fst::Error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-body scattering solver with delayed interactions"};
    app.require_subcommand(1);

    std::string config_path, out_dir, traj_path;
    double cone_t = 0.0;
    std::string cone_sign = "adv", cone_vertex = "a";

    CLI::App* solve = app.add_subcommand("solve", "build the trajectory family");
    solve->add_option("--config", config_path, "run configuration (JSON)")
        ->required();
    solve->add_option("--out", out_dir, "output directory override");

    CLI::App* check = app.add_subcommand("check", "verify a stored trajectory");
    check->add_option("--traj", traj_path, "trajectory CSV")->required();
    check->add_option("--config", config_path, "run configuration (JSON)")
        ->required();
    check->add_option("--out", out_dir, "report directory override");

    CLI::App* cone = app.add_subcommand("cone", "ad-hoc cone-time query");
    cone->add_option("--traj", traj_path, "trajectory CSV")->required();
    cone->add_option("--config", config_path, "optional configuration for tails");
    cone->add_option("--t", cone_t, "vertex time")->required();
    cone->add_option("--sign", cone_sign, "adv|ret")->required();
    cone->add_option("--vertex", cone_vertex, "a|b")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    if (solve->parsed()) return cmd_solve(config_path, out_dir);
    if (check->parsed()) return cmd_check(traj_path, config_path, out_dir);
    if (cone->parsed())
        return cmd_cone(traj_path, config_path, cone_t, cone_sign, cone_vertex);
    return kExitUsage;
}

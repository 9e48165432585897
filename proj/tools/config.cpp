#include "config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fst::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) fail("unknown key '" + path + "." + key + "'");
    }
}

double get_num(const json& obj, const std::string& path, const char* key,
               double fallback, bool allow_null = false) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (allow_null && v.is_null()) return fallback;
    if (!v.is_number()) fail("'" + path + "." + key + "' must be a number");
    return v.get<double>();
}

int get_int(const json& obj, const std::string& path, const char* key,
            int fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        fail("'" + path + "." + key + "' must be an integer");
    return v.get<int>();
}

bool get_bool(const json& obj, const std::string& path, const char* key,
              bool fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) fail("'" + path + "." + key + "' must be a boolean");
    return v.get<bool>();
}

double require_num(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) fail("missing required key '" + path + "." + key + "'");
    const json& v = obj.at(key);
    if (!v.is_number()) fail("'" + path + "." + key + "' must be a number");
    return v.get<double>();
}

std::vector<double> get_num_array(const json& obj, const std::string& path,
                                  const char* key,
                                  std::vector<double> fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_array()) fail("'" + path + "." + key + "' must be an array");
    std::vector<double> out;
    for (const json& e : v) {
        if (!e.is_number())
            fail("'" + path + "." + key + "' must contain numbers only");
        out.push_back(e.get<double>());
    }
    return out;
}

std::string locate(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    std::ostringstream os;
    os << "line " << line << ", column " << col;
    return os.str();
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        fail("config syntax error at " + locate(text, e.byte) + ": " + e.what());
    }
    if (!root.is_object()) fail("config root must be a JSON object");
    reject_unknown(root, "$", {"asymptotic", "solver", "diagnostics", "output"});

    RunConfig cfg;

    if (!root.contains("asymptotic")) fail("missing required block 'asymptotic'");
    {
        const json& a = root.at("asymptotic");
        if (!a.is_object()) fail("'asymptotic' must be an object");
        reject_unknown(a, "asymptotic",
                       {"x_minus_inf", "y_minus_inf", "u_minus_inf",
                        "v_minus_inf", "kappa_a", "kappa_b"});
        const double x = require_num(a, "asymptotic", "x_minus_inf");
        const double y = require_num(a, "asymptotic", "y_minus_inf");
        const double u = require_num(a, "asymptotic", "u_minus_inf");
        const double v = require_num(a, "asymptotic", "v_minus_inf");
        const double ka = require_num(a, "asymptotic", "kappa_a");
        const double kb = require_num(a, "asymptotic", "kappa_b");
        try {
            cfg.data = AsymptoticData::create(x, y, u, v, ka, kb);
        } catch (const Error& e) {
            fail(std::string("invalid 'asymptotic' block: ") + e.what());
        }
    }

    if (root.contains("solver")) {
        const json& s = root.at("solver");
        if (!s.is_object()) fail("'solver' must be an object");
        reject_unknown(s, "solver",
                       {"step", "t_end", "margin", "tol_fix", "max_picard",
                        "damping", "tol_cone", "T_schedule", "tol_global",
                        "quad_step", "separation_floor", "sweep", "warm_family",
                        "threads"});
        SolverConfig& sc = cfg.solver;
        sc.step = get_num(s, "solver", "step", sc.step);
        sc.t_end = get_num(s, "solver", "t_end", sc.t_end);
        sc.margin = get_num(s, "solver", "margin", sc.margin, true);
        sc.tol_fix = get_num(s, "solver", "tol_fix", sc.tol_fix);
        sc.max_picard = get_int(s, "solver", "max_picard", sc.max_picard);
        sc.damping = get_num(s, "solver", "damping", sc.damping);
        sc.tol_cone = get_num(s, "solver", "tol_cone", sc.tol_cone);
        sc.T_schedule = get_num_array(s, "solver", "T_schedule", sc.T_schedule);
        sc.tol_global = get_num(s, "solver", "tol_global", sc.tol_global);
        sc.quad_step = get_num(s, "solver", "quad_step", sc.quad_step, true);
        sc.separation_floor =
            get_num(s, "solver", "separation_floor", sc.separation_floor);
        if (s.contains("sweep")) {
            const std::string mode = s.at("sweep").get<std::string>();
            if (mode == "jacobi")
                sc.sweep = SweepMode::jacobi;
            else if (mode == "gauss_seidel")
                sc.sweep = SweepMode::gauss_seidel;
            else
                fail("'solver.sweep' must be 'jacobi' or 'gauss_seidel'");
        }
        sc.warm_family = get_bool(s, "solver", "warm_family", sc.warm_family);
        sc.threads = get_int(s, "solver", "threads", sc.threads);
        try {
            sc.validate();
        } catch (const Error& e) {
            fail(std::string("invalid 'solver' block: ") + e.what());
        }
    }

    if (root.contains("diagnostics")) {
        const json& d = root.at("diagnostics");
        if (!d.is_object()) fail("'diagnostics' must be an object");
        reject_unknown(d, "diagnostics",
                       {"t0", "residual_tol", "quad_step",
                        "max_samples_per_member", "rel_slack", "eta_spread_tol",
                        "v_spread_tol", "identity_tol", "ratio_growth",
                        "wfint_fractions"});
        DiagnosticsConfig& dc = cfg.diagnostics;
        dc.t0 = get_num(d, "diagnostics", "t0", dc.t0, true);
        dc.residual_tol = get_num(d, "diagnostics", "residual_tol", dc.residual_tol);
        dc.quad_step = get_num(d, "diagnostics", "quad_step", dc.quad_step, true);
        dc.max_samples_per_member = get_int(d, "diagnostics",
                                            "max_samples_per_member",
                                            dc.max_samples_per_member);
        dc.rel_slack = get_num(d, "diagnostics", "rel_slack", dc.rel_slack);
        dc.eta_spread_tol =
            get_num(d, "diagnostics", "eta_spread_tol", dc.eta_spread_tol);
        dc.v_spread_tol =
            get_num(d, "diagnostics", "v_spread_tol", dc.v_spread_tol);
        dc.identity_tol =
            get_num(d, "diagnostics", "identity_tol", dc.identity_tol);
        dc.ratio_growth =
            get_num(d, "diagnostics", "ratio_growth", dc.ratio_growth);
        dc.wfint_fractions = get_num_array(d, "diagnostics", "wfint_fractions",
                                           dc.wfint_fractions);
    }

    if (root.contains("output")) {
        const json& o = root.at("output");
        if (!o.is_object()) fail("'output' must be an object");
        reject_unknown(o, "output", {"directory", "formats", "plots", "family_csv"});
        OutputConfig& oc = cfg.output;
        if (o.contains("directory"))
            oc.directory = o.at("directory").get<std::string>();
        if (o.contains("formats")) {
            oc.csv = oc.json = oc.svg = false;
            for (const json& f : o.at("formats")) {
                const std::string name = f.get<std::string>();
                if (name == "csv")
                    oc.csv = true;
                else if (name == "json")
                    oc.json = true;
                else if (name == "svg")
                    oc.svg = true;
                else
                    fail("'output.formats' entries must be csv, json or svg");
            }
        }
        if (o.contains("plots")) {
            oc.plots.clear();
            for (const json& p : o.at("plots")) {
                const std::string name = p.get<std::string>();
                if (name != "worldlines" && name != "gap" && name != "decay")
                    fail("'output.plots' entries must be worldlines, gap or decay");
                oc.plots.insert(name);
            }
        }
        oc.family_csv = get_bool(o, "output", "family_csv", oc.family_csv);
    }

    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

}  // namespace fst::cli

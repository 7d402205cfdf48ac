// run_config.cpp

#include "sbnm/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sbnm/errors.hpp"

namespace sbnm::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string key_list() {
    std::string out;
    for (const auto& k : valid_keys()) out += (out.empty() ? "" : ", ") + k;
    return out;
}

double to_double(const std::string& key, const ConfigEntry& e) {
    const std::string s = trim(e.value);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        throw ConfigError(e.origin + ": '" + key + "' expects a number, got '" + s + "'");
    return v;
}

long to_integer(const std::string& key, const ConfigEntry& e) {
    const std::string s = trim(e.value);
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigError(e.origin + ": '" + key + "' expects an integer, got '" + s + "'");
    return v;
}

std::vector<double> to_list(const std::string& key, const ConfigEntry& e) {
    std::vector<double> out;
    std::stringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, {item, e.origin}));
    return out;
}

} // namespace

const char* solver_name(Solver s) noexcept {
    switch (s) {
    case Solver::exact: return "exact";
    case Solver::tcl2: return "tcl2";
    case Solver::analytic: return "analytic";
    }
    return "?";
}

Solver parse_solver(const std::string& name) {
    const std::string n = trim(name);
    if (n == "exact") return Solver::exact;
    if (n == "tcl2") return Solver::tcl2;
    if (n == "analytic") return Solver::analytic;
    throw ConfigError("unknown solver '" + n + "'; valid solvers: exact, tcl2, analytic");
}

const std::vector<std::string>& valid_keys() {
    static const std::vector<std::string> keys = {
        "solver",     "alpha",      "omega_c",   "delta",  "t_max",    "dt",   "n_modes",
        "omega_max",  "n_exc",      "krylov_dim", "krylov_tol", "eps_sigma", "out",  "alphas",
        "omega_cs",   "jobs",       "analytic_below"};
    return keys;
}

double RunConfig::effective_omega_max() const { return omega_max > 0.0 ? omega_max : 6.0 * omega_c; }

void RunConfig::validate() const {
    if (!(alpha >= 0.0)) throw ConfigError("alpha must be >= 0");
    if (!(omega_c > 0.0)) throw ConfigError("omega_c must be > 0");
    if (!(delta > 0.0)) throw ConfigError("delta must be > 0");
    if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
    if (!(t_max >= dt)) throw ConfigError("t_max must be >= dt");
    if (n_modes == 0) throw ConfigError("n_modes must be > 0");
    if (omega_max < 0.0) throw ConfigError("omega_max must be >= 0 (0 selects 6 omega_c)");
    if (n_exc < 0) throw ConfigError("n_exc must be >= 0");
    if (krylov_dim < 2) throw ConfigError("krylov_dim must be >= 2");
    if (!(krylov_tol > 0.0)) throw ConfigError("krylov_tol must be > 0");
    if (eps_sigma < 0.0) throw ConfigError("eps_sigma must be >= 0");
    if (jobs < 1) throw ConfigError("jobs must be >= 1");
    for (double a : alphas)
        if (!(a >= 0.0)) throw ConfigError("alphas entries must be >= 0");
    for (double w : omega_cs)
        if (!(w > 0.0)) throw ConfigError("omega_cs entries must be > 0");
}

ConfigEntries parse_config_text(const std::string& text) {
    ConfigEntries out;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        const std::string origin = "line " + std::to_string(line_no);
        if (eq == std::string::npos) throw ConfigError(origin + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(origin + ": missing key");
        if (std::find(valid_keys().begin(), valid_keys().end(), key) == valid_keys().end())
            throw ConfigError(origin + ": unknown key '" + key + "'; valid keys: " + key_list());
        if (value.empty()) throw ConfigError(origin + ": missing value for '" + key + "'");
        out[key] = {value, origin};
    }
    return out;
}

ConfigEntries read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config_text(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

RunConfig parse_config(const ConfigEntries& file_entries, const ConfigEntries& overrides) {
    ConfigEntries all = file_entries;
    for (const auto& [k, v] : overrides) {
        if (std::find(valid_keys().begin(), valid_keys().end(), k) == valid_keys().end())
            throw ConfigError(v.origin + ": unknown key '" + k + "'; valid keys: " + key_list());
        all[k] = v;
    }

    RunConfig cfg;
    const auto it = all.find("solver");
    if (it == all.end()) throw ConfigError("missing solver; valid solvers: exact, tcl2, analytic");
    try {
        cfg.solver = parse_solver(it->second.value);
    } catch (const ConfigError& e) {
        throw ConfigError(it->second.origin + ": " + e.what());
    }

    auto get = [&](const char* key) -> const ConfigEntry* {
        const auto f = all.find(key);
        return f == all.end() ? nullptr : &f->second;
    };
    if (auto e = get("alpha")) cfg.alpha = to_double("alpha", *e);
    if (auto e = get("omega_c")) cfg.omega_c = to_double("omega_c", *e);
    if (auto e = get("delta")) cfg.delta = to_double("delta", *e);
    if (auto e = get("t_max")) cfg.t_max = to_double("t_max", *e);
    if (auto e = get("dt")) cfg.dt = to_double("dt", *e);
    if (auto e = get("n_modes")) {
        const long n = to_integer("n_modes", *e);
        if (n <= 0) throw ConfigError(e->origin + ": n_modes must be > 0");
        cfg.n_modes = static_cast<std::size_t>(n);
    }
    if (auto e = get("omega_max")) cfg.omega_max = to_double("omega_max", *e);
    if (auto e = get("n_exc")) cfg.n_exc = static_cast<int>(to_integer("n_exc", *e));
    if (auto e = get("krylov_dim")) cfg.krylov_dim = static_cast<int>(to_integer("krylov_dim", *e));
    if (auto e = get("krylov_tol")) cfg.krylov_tol = to_double("krylov_tol", *e);
    if (auto e = get("eps_sigma")) cfg.eps_sigma = to_double("eps_sigma", *e);
    if (auto e = get("out")) cfg.out = trim(e->value);
    if (auto e = get("alphas")) cfg.alphas = to_list("alphas", *e);
    if (auto e = get("omega_cs")) cfg.omega_cs = to_list("omega_cs", *e);
    if (auto e = get("jobs")) cfg.jobs = static_cast<int>(to_integer("jobs", *e));
    if (auto e = get("analytic_below")) cfg.analytic_below = to_double("analytic_below", *e);

    if (cfg.solver != Solver::exact) {
        for (const char* k : {"n_modes", "omega_max", "n_exc", "krylov_dim", "krylov_tol"})
            if (get(k))
                cfg.warnings.push_back(std::string("'") + k + "' is ignored by the " + solver_name(cfg.solver) +
                                       " solver");
    }
    cfg.validate();
    return cfg;
}

} // namespace sbnm::cli

// commands.cpp

#include "sbnm/commands.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "sbnm/analytic.hpp"
#include "sbnm/errors.hpp"
#include "sbnm/exact.hpp"
#include "sbnm/format.hpp"
#include "sbnm/model.hpp"
#include "sbnm/tcl2.hpp"

namespace sbnm::cli {

int exit_code_for(const std::exception& e) noexcept {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e) ||
        dynamic_cast<const ResourceError*>(&e))
        return exit_config;
    if (dynamic_cast<const NumericalError*>(&e)) return exit_numerical;
    if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const ShapeError*>(&e)) return exit_io;
    return exit_numerical;
}

measure::BlochTrajectory simulate(const RunConfig& cfg) {
    cfg.validate();
    switch (cfg.solver) {
    case Solver::analytic: {
        const auto p = analytic::weak_coupling_params(cfg.alpha, cfg.omega_c, cfg.delta);
        return analytic::analytic_trajectory(p, cfg.dt, cfg.t_max);
    }
    case Solver::tcl2:
        return tcl2::tcl2_propagate(cfg.delta, cfg.alpha, cfg.omega_c, {0.0, 0.0, 1.0}, cfg.dt, cfg.t_max);
    case Solver::exact: {
        model::ModelConfig mc;
        mc.delta = cfg.delta;
        mc.bath = model::discretize_bath({cfg.alpha, cfg.omega_c}, cfg.n_modes, cfg.effective_omega_max());
        exact::FockTruncation trunc;
        trunc.max_total_excitations = cfg.n_exc;
        exact::PropagatorConfig pc;
        pc.dt = cfg.dt;
        pc.t_max = cfg.t_max;
        pc.krylov_dim = cfg.krylov_dim;
        pc.krylov_tol = cfg.krylov_tol;
        return exact::propagate(mc, trunc, pc, true);
    }
    }
    throw ConfigError("unknown solver");
}

void cmd_simulate(const RunConfig& cfg) {
    for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << '\n';
    const auto traj = simulate(cfg);
    std::ostringstream os;
    write_trajectory_csv(os, traj);
    write_text_file(cfg.out, os.str());
}

MeasureResult measure_trajectory(const measure::BlochTrajectory& traj_up, double delta, double eps,
                                 const std::optional<measure::TailModel>& tail) {
    MeasureResult r;
    r.series = measure::trace_distance_pair(traj_up, measure::mirror_bloch(traj_up));
    const auto alt = measure::trace_distance_sigma_z(traj_up, delta);
    for (std::size_t k = 0; k < r.series.size(); ++k)
        r.sigma_z_deviation = std::max(r.sigma_z_deviation, std::abs(r.series.d[k] - alt.from_derivative.d[k]));
    r.report = measure::nonmarkovianity(r.series, eps, tail);
    return r;
}

std::string summary_json(const MeasureResult& r) {
    nlohmann::ordered_json j;
    j["n_value"] = r.report.n_value;
    j["n_intervals"] = r.report.intervals.size();
    auto& ivs = j["intervals"] = nlohmann::ordered_json::array();
    for (const auto& iv : r.report.intervals) ivs.push_back({{"t_start", iv.t_start}, {"t_end", iv.t_end}, {"gain", iv.gain}});
    j["horizon"] = r.report.horizon;
    j["tail_estimate"] = r.report.tail_estimate;
    j["converged"] = r.report.converged;
    j["sigma_z_form_deviation"] = r.sigma_z_deviation;
    j["initial_pair"] = "sigma_z eigenstates; N is a lower bound on the maximum over pairs";
    return j.dump(2) + "\n";
}

namespace {

double parse_meta_double(const measure::BlochTrajectory& traj, const char* key, double fallback) {
    const auto m = traj.get_meta(key);
    if (!m) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(*m, &pos);
        return pos == m->size() ? v : fallback;
    } catch (const std::exception&) {
        return fallback;
    }
}

} // namespace

void cmd_measure(const MeasureOptions& opt) {
    const auto traj = read_trajectory_file(opt.input);
    const double delta = opt.delta.value_or(parse_meta_double(traj, "delta", 1.0));
    if (!(delta > 0.0)) throw ConfigError("delta must be > 0");
    if (opt.eps < 0.0) throw ConfigError("eps must be >= 0");
    std::optional<measure::TailModel> tail;
    if (opt.tail_gamma) {
        if (!(*opt.tail_gamma > 0.0)) throw ConfigError("tail gamma must be > 0");
        tail = measure::TailModel{*opt.tail_gamma, opt.tail_period};
    }
    const auto r = measure_trajectory(traj, delta, opt.eps, tail);
    if (!opt.out.empty()) {
        Metadata meta = traj.meta;
        meta.emplace_back("eps_sigma", format_double(opt.eps));
        std::ostringstream os;
        write_distance_csv(os, r.series, meta);
        write_text_file(opt.out, os.str());
    }
    write_text_file(opt.summary.empty() ? "-" : opt.summary, summary_json(r));
}

namespace {

SweepRow analytic_point(const RunConfig& cfg, double alpha, double omega_c) {
    SweepRow row{alpha, omega_c, "analytic"};
    const auto p = analytic::weak_coupling_params(alpha, omega_c, cfg.delta);
    const auto res = analytic::resummed_nonmarkovianity(p);
    row.horizon = cfg.t_max;
    if (!res.has_interval) {
        row.converged = true;
        return row;
    }
    // Whole backflow periods that fit below max(t_max, 60/γ); the rest is the tail.
    row.horizon = std::max(cfg.t_max, 60.0 / p.gamma);
    const double periods = std::floor((row.horizon - res.t_max) / p.period()) + 1.0;
    const int n = periods > 0.0 ? static_cast<int>(periods) : 0;
    row.n_value = analytic::partitioned_nonmarkovianity(p, n);
    row.n_intervals = static_cast<std::size_t>(n);
    row.converged = res.value - row.n_value < measure::tail_tolerance;
    return row;
}

} // namespace

SweepRow sweep_point(const RunConfig& base, double alpha, double omega_c) {
    RunConfig cfg = base;
    cfg.alpha = alpha;
    cfg.omega_c = omega_c;
    const bool use_analytic = cfg.solver == Solver::analytic || alpha < cfg.analytic_below;
    SweepRow row{alpha, omega_c, use_analytic ? "analytic" : solver_name(cfg.solver)};
    try {
        if (use_analytic) return analytic_point(cfg, alpha, omega_c);
        const auto traj = simulate(cfg);
        const auto r = measure_trajectory(traj, cfg.delta, cfg.eps_sigma, std::nullopt);
        row.n_value = r.report.n_value;
        row.n_intervals = r.report.intervals.size();
        row.horizon = r.report.horizon;
        row.converged = r.report.converged;
    } catch (const std::exception& e) {
        row.n_value = NAN;
        row.n_intervals = 0;
        row.horizon = cfg.t_max;
        row.converged = false;
        row.status = std::string("error: ") + e.what();
    }
    return row;
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.alphas.empty()) throw ConfigError("sweep needs a non-empty alphas list");
    if (cfg.omega_cs.empty()) throw ConfigError("sweep needs a non-empty omega_cs list");
    const std::size_t n_alpha = cfg.alphas.size();
    const std::size_t total = n_alpha * cfg.omega_cs.size();
    std::vector<SweepRow> rows(total);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < total; i = next++)
            rows[i] = sweep_point(cfg, cfg.alphas[i % n_alpha], cfg.omega_cs[i / n_alpha]);
    };
    const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), total);
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return rows;
}

void cmd_sweep(const RunConfig& cfg) {
    for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << '\n';
    const auto rows = run_sweep(cfg);
    Metadata meta = {{"solver", solver_name(cfg.solver)},
                     {"delta", format_double(cfg.delta)},
                     {"t_max", format_double(cfg.t_max)},
                     {"dt", format_double(cfg.dt)},
                     {"eps_sigma", format_double(cfg.eps_sigma)},
                     {"analytic_below", format_double(cfg.analytic_below)}};
    if (cfg.solver == Solver::exact) {
        meta.emplace_back("n_modes", std::to_string(cfg.n_modes));
        meta.emplace_back("omega_max", cfg.omega_max > 0.0 ? format_double(cfg.omega_max) : "6 omega_c");
        meta.emplace_back("n_exc", std::to_string(cfg.n_exc));
    }
    std::ostringstream os;
    write_sweep_csv(os, rows, meta);
    write_text_file(cfg.out, os.str());
}

LimitResult limit_values(double omega_c, double delta) {
    if (!(omega_c > 0.0)) throw ConfigError("omega_c must be > 0");
    if (!(delta > 0.0)) throw ConfigError("delta must be > 0");
    LimitResult r{omega_c, delta};
    r.limit = analytic::nonmarkovianity_alpha_zero(omega_c, delta);
    r.resummed = analytic::resummed_nonmarkovianity(analytic::weak_coupling_params(limit_probe_alpha, omega_c, delta)).value;
    r.relative_difference = std::abs(r.limit - r.resummed) / std::max(std::abs(r.resummed), 1e-300);
    return r;
}

std::string format_limit(const LimitResult& r) {
    std::ostringstream os;
    // Only Δ-scaled quantities, so (ω_c, Δ) and (2ω_c, 2Δ) print the same.
    os << "omega_c_over_delta = " << format_double(r.omega_c / r.delta) << '\n'
       << "limit = " << format_double(r.limit) << '\n'
       << "resummed_alpha_1e-4 = " << format_double(r.resummed) << '\n'
       << "relative_difference = " << format_double(r.relative_difference) << '\n';
    return os.str();
}

void cmd_limit(double omega_c, double delta, const std::string& out) {
    write_text_file(out, format_limit(limit_values(omega_c, delta)));
}

} // namespace sbnm::cli

// sbnm.cpp: command-line driver: simulate, measure, sweep, limit

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "sbnm/commands.hpp"
#include "sbnm/errors.hpp"
#include "sbnm/run_config.hpp"

namespace {

using sbnm::cli::ConfigEntries;

// Flags mirroring the config keys; values stay strings until parse_config checks them.
struct ConfigFlags {
    std::string config_path;
    std::map<std::string, std::pair<std::string, CLI::Option*>> values;

    void add(CLI::App* app, const std::string& key, const std::string& flag, const std::string& help) {
        auto& slot = values[key];
        slot.second = app->add_option(flag, slot.first, help);
    }

    ConfigEntries overrides() const {
        ConfigEntries out;
        for (const auto& [key, slot] : values)
            if (slot.second->count() > 0) out[key] = {slot.first, "flag " + slot.second->get_name()};
        return out;
    }

    sbnm::cli::RunConfig resolve() const {
        const ConfigEntries file = config_path.empty() ? ConfigEntries{} : sbnm::cli::read_config_file(config_path);
        return sbnm::cli::parse_config(file, overrides());
    }
};

void add_run_flags(CLI::App* app, ConfigFlags& f) {
    app->add_option("--config", f.config_path, "key = value configuration file");
    f.add(app, "solver", "--solver", "exact | tcl2 | analytic");
    f.add(app, "alpha", "--alpha", "coupling strength");
    f.add(app, "omega_c", "--omega-c", "bath cutoff frequency (units of Delta)");
    f.add(app, "delta", "--delta", "tunneling Delta (default 1)");
    f.add(app, "t_max", "--t-max", "propagation horizon");
    f.add(app, "dt", "--dt", "output grid spacing");
    f.add(app, "n_modes", "--modes", "bath modes (exact)");
    f.add(app, "omega_max", "--omega-max", "bath frequency cutoff, 0 for 6 omega_c (exact)");
    f.add(app, "n_exc", "--n-exc", "maximum total bath excitations (exact)");
    f.add(app, "krylov_dim", "--krylov-dim", "Krylov subspace size (exact)");
    f.add(app, "krylov_tol", "--krylov-tol", "Krylov error tolerance per step (exact)");
    f.add(app, "eps_sigma", "--eps", "threshold on dD/dt for backflow");
    f.add(app, "out", "--out", "output path, - for stdout");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sbnm: non-Markovianity of the zero-temperature spin-boson model"};
    app.require_subcommand(1);

    ConfigFlags sim_flags;
    auto* sim = app.add_subcommand("simulate", "write the spin-up trajectory CSV");
    add_run_flags(sim, sim_flags);

    ConfigFlags sweep_flags;
    auto* sweep = app.add_subcommand("sweep", "N over an (omega_c, alpha) grid");
    add_run_flags(sweep, sweep_flags);
    sweep_flags.add(sweep, "alphas", "--alphas", "comma-separated alpha values");
    sweep_flags.add(sweep, "omega_cs", "--omega-cs", "comma-separated omega_c values");
    sweep_flags.add(sweep, "jobs", "--jobs", "concurrent sweep points");
    sweep_flags.add(sweep, "analytic_below", "--analytic-below", "use the closed forms for alpha below this");

    sbnm::cli::MeasureOptions mopt;
    double delta = 0.0, tail_gamma = 0.0, tail_period = 0.0;
    auto* meas = app.add_subcommand("measure", "trace distance and N from a trajectory CSV");
    meas->add_option("input", mopt.input, "trajectory CSV, - for stdin")->required();
    meas->add_option("--out", mopt.out, "distance CSV output (omit to skip)");
    meas->add_option("--summary", mopt.summary, "JSON summary output, - for stdout");
    auto* delta_opt = meas->add_option("--delta", delta, "tunneling Delta (default from the CSV metadata)");
    meas->add_option("--eps", mopt.eps, "threshold on dD/dt for backflow");
    auto* gamma_opt = meas->add_option("--tail-gamma", tail_gamma, "decay rate for the tail estimate");
    auto* period_opt = meas->add_option("--tail-period", tail_period, "backflow period for the tail estimate");

    double lim_omega_c = 0.0, lim_delta = 1.0;
    std::string lim_out = "-";
    auto* lim = app.add_subcommand("limit", "small-alpha limit of N next to the resummed value at alpha = 1e-4");
    lim->add_option("--omega-c", lim_omega_c, "bath cutoff frequency")->required();
    lim->add_option("--delta", lim_delta, "tunneling Delta");
    lim->add_option("--out", lim_out, "output path, - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : sbnm::cli::exit_config;
    }

    try {
        if (sim->parsed()) {
            sbnm::cli::cmd_simulate(sim_flags.resolve());
        } else if (sweep->parsed()) {
            sbnm::cli::cmd_sweep(sweep_flags.resolve());
        } else if (meas->parsed()) {
            if (delta_opt->count()) mopt.delta = delta;
            if (gamma_opt->count()) mopt.tail_gamma = tail_gamma;
            if (period_opt->count()) mopt.tail_period = tail_period;
            sbnm::cli::cmd_measure(mopt);
        } else if (lim->parsed()) {
            sbnm::cli::cmd_limit(lim_omega_c, lim_delta, lim_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "sbnm: " << e.what() << '\n';
        return sbnm::cli::exit_code_for(e);
    }
    return 0;
}

// commands.hpp: The simulate / measure / sweep / limit commands behind the sbnm tool

#pragma once

#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "sbnm/csv_io.hpp"
#include "sbnm/measure.hpp"
#include "sbnm/run_config.hpp"

namespace sbnm::cli {

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_numerical = 3, exit_io = 4 };

// Maps the sbnm exception types onto exit codes.
int exit_code_for(const std::exception& e) noexcept;

// ↑-initial trajectory from the configured solver.
measure::BlochTrajectory simulate(const RunConfig& cfg);
void cmd_simulate(const RunConfig& cfg);

struct MeasureOptions {
    std::string input{"-"};
    std::string out{};              // distance CSV; empty → not written
    std::string summary{"-"};       // JSON summary; "-" → stdout
    std::optional<double> delta;    // default: the trajectory's "delta" metadata, else 1
    double eps{measure::default_sigma_eps};
    std::optional<double> tail_gamma;
    std::optional<double> tail_period;
};

struct MeasureResult {
    measure::TraceDistanceSeries series;
    measure::NonMarkovianityReport report;
    double sigma_z_deviation{0.0};  // max |D_pair − D_σz-derivative form|
};

// ↓ partner reconstructed by mirroring; D from the Bloch pair.
MeasureResult measure_trajectory(const measure::BlochTrajectory& traj_up, double delta, double eps,
                                 const std::optional<measure::TailModel>& tail);
std::string summary_json(const MeasureResult& r);
void cmd_measure(const MeasureOptions& opt);

// One sweep row; failures land in the status column.
SweepRow sweep_point(const RunConfig& base, double alpha, double omega_c);
// Rows in ω_c-outer, α-inner order, computed on up to cfg.jobs threads.
std::vector<SweepRow> run_sweep(const RunConfig& cfg);
void cmd_sweep(const RunConfig& cfg);

inline constexpr double limit_probe_alpha = 1e-4;

struct LimitResult {
    double omega_c{0.0};
    double delta{1.0};
    double limit{0.0};
    double resummed{0.0};  // resummed N at limit_probe_alpha
    double relative_difference{0.0};
};

LimitResult limit_values(double omega_c, double delta);
std::string format_limit(const LimitResult& r);
void cmd_limit(double omega_c, double delta, const std::string& out);

} // namespace sbnm::cli

// csv_io.hpp: CSV contracts for trajectories, trace-distance series and sweep tables
//
// Floats are written as %.8e (9 significant digits), lines end in LF, metadata goes in
// leading "# key: value" comment lines, and the header line is mandatory.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sbnm/measure.hpp"
#include "sbnm/trajectory.hpp"

namespace sbnm::cli {

inline constexpr const char* toolkit_version = "0.1.0";

inline constexpr const char* trajectory_header = "time,sx,sy,sz";
inline constexpr const char* distance_header = "time,d,sigma";
inline constexpr const char* sweep_header = "alpha,omega_c,solver,n_value,n_intervals,horizon,converged,status";

struct SweepRow {
    double alpha{0.0};
    double omega_c{0.0};
    std::string solver;
    double n_value{0.0};
    std::size_t n_intervals{0};
    double horizon{0.0};
    bool converged{false};
    std::string status{"ok"};
};

using Metadata = std::vector<std::pair<std::string, std::string>>;

void write_trajectory_csv(std::ostream& os, const measure::BlochTrajectory& traj);
void write_distance_csv(std::ostream& os, const measure::TraceDistanceSeries& s, const Metadata& meta);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, const Metadata& meta);

// Throws IoError naming the row and column on schema violations. The time column must be
// uniform to 1e-8; the returned grid is exactly t_k = k·dt.
measure::BlochTrajectory read_trajectory_csv(std::istream& is);
measure::BlochTrajectory read_trajectory_file(const std::string& path);

// Writes through a temporary string so a failed run leaves no partial file. "-" is stdout.
void write_text_file(const std::string& path, const std::string& content);

} // namespace sbnm::cli

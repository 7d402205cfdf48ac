// measure.hpp: Trace distance, backflow intervals and the non-Markovianity N
//
// For the antipodal pair ρ1(0) = |↑><↑|, ρ2(0) = |↓><↓| the ↓ trajectory is the ↑ one
// with <σy> and <σz> negated, so D(t) = ½|a1 − a2| = sqrt(<σy>² + <σz>²).
// N is the sum over intervals with σ = dD/dt > 0 of D(t_end) − D(t_start).

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sbnm/trajectory.hpp"

namespace sbnm::measure {

inline constexpr double default_sigma_eps = 1e-10;
inline constexpr double tail_tolerance = 1e-3;

struct TraceDistanceSeries {
    double dt{0.0};
    std::vector<double> t;
    std::vector<double> d;
    std::vector<double> sigma;

    std::size_t size() const noexcept { return t.size(); }
    double horizon() const noexcept { return t.empty() ? 0.0 : t.back(); }
    // Piecewise-linear D at time `time`, clamped to the grid.
    double d_at(double time) const;
};

// <σx> kept, <σy> and <σz> negated; toggles the "mirrored" meta entry.
BlochTrajectory mirror_bloch(const BlochTrajectory& traj);

// Central differences, one-sided second order at the two ends.
std::vector<double> time_derivative(const std::vector<double>& f, double dt);

// Builds a series from samples of D, deriving σ numerically.
TraceDistanceSeries make_series(double dt, std::vector<double> d);

// Throws ShapeError unless a and b share the time grid.
TraceDistanceSeries trace_distance_pair(const BlochTrajectory& a, const BlochTrajectory& b);

struct SigmaZDistance {
    TraceDistanceSeries from_sigma_y;       // sqrt(<σz>² + <σy>²), the primary series
    TraceDistanceSeries from_derivative;    // sqrt(<σz>² + (∂t<σz>/2Δ)²)
    double max_deviation{0.0};              // max_k |difference of the two D series|
    double max_sigma_y_mismatch{0.0};       // max_k |<σy> − ∂t<σz>/2Δ|
};

SigmaZDistance trace_distance_sigma_z(const BlochTrajectory& traj_up, double delta);

struct BackflowInterval {
    double t_start{0.0};
    double t_end{0.0};
    double gain{0.0};
};

// Maximal runs with σ > eps, bridged over single sub-eps points; runs of fewer than two
// samples are dropped. Endpoints sit at the linearly interpolated eps crossings.
std::vector<BackflowInterval> detect_intervals(const TraceDistanceSeries& s, double eps = default_sigma_eps);

// Decay model for the part of N beyond the horizon. The period defaults to the spacing
// of the last two detected intervals.
struct TailModel {
    double gamma{0.0};
    std::optional<double> period;
};

struct NonMarkovianityReport {
    double n_value{0.0};
    std::vector<BackflowInterval> intervals;
    double horizon{0.0};
    double tail_estimate{0.0};
    bool converged{false};
};

// N for the σz-eigenstate pair only, so it is a lower bound on the maximum over pairs.
NonMarkovianityReport nonmarkovianity(const TraceDistanceSeries& s, double eps = default_sigma_eps,
                                      const std::optional<TailModel>& tail = std::nullopt);

// Trapezoidal ∫ max(σ, 0) dt; agrees with the gain sum up to O(dt²) on smooth input.
double positive_sigma_integral(const TraceDistanceSeries& s);

} // namespace sbnm::measure

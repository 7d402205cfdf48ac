// measure.cpp: Trace-distance series and backflow accounting

#include "sbnm/measure.hpp"

#include <algorithm>
#include <cmath>

#include "sbnm/errors.hpp"

namespace sbnm::measure {

double TraceDistanceSeries::d_at(double time) const {
    if (d.empty()) throw ShapeError("trace distance series is empty");
    if (time <= t.front()) return d.front();
    if (time >= t.back()) return d.back();
    const double pos = (time - t.front()) / dt;
    auto k = static_cast<std::size_t>(pos);
    if (k + 1 >= d.size()) k = d.size() - 2;
    const double w = pos - static_cast<double>(k);
    return (1.0 - w) * d[k] + w * d[k + 1];
}

BlochTrajectory mirror_bloch(const BlochTrajectory& traj) {
    BlochTrajectory out = traj;
    for (auto& v : out.sy) v = -v;
    for (auto& v : out.sz) v = -v;
    const auto m = traj.get_meta("mirrored");
    out.set_meta("mirrored", m && *m == "true" ? "false" : "true");
    return out;
}

std::vector<double> time_derivative(const std::vector<double>& f, double dt) {
    const std::size_t n = f.size();
    std::vector<double> df(n, 0.0);
    if (n < 2) return df;
    if (n == 2) {
        df[0] = df[1] = (f[1] - f[0]) / dt;
        return df;
    }
    for (std::size_t k = 1; k + 1 < n; ++k) df[k] = (f[k + 1] - f[k - 1]) / (2.0 * dt);
    df[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dt);
    df[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dt);
    return df;
}

TraceDistanceSeries make_series(double dt, std::vector<double> d) {
    if (!(dt > 0.0)) throw ShapeError("trace distance series: dt must be > 0");
    TraceDistanceSeries s;
    s.dt = dt;
    s.t.resize(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) s.t[k] = static_cast<double>(k) * dt;
    s.sigma = time_derivative(d, dt);
    s.d = std::move(d);
    return s;
}

TraceDistanceSeries trace_distance_pair(const BlochTrajectory& a, const BlochTrajectory& b) {
    a.check_uniform();
    b.check_uniform();
    if (a.size() != b.size() || std::abs(a.dt - b.dt) > 1e-12 * std::max(a.dt, b.dt))
        throw ShapeError("trace_distance_pair: time grids differ");
    std::vector<double> d(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double dx = a.sx[k] - b.sx[k];
        const double dy = a.sy[k] - b.sy[k];
        const double dz = a.sz[k] - b.sz[k];
        d[k] = 0.5 * std::sqrt(dx * dx + dy * dy + dz * dz);
    }
    return make_series(a.dt, std::move(d));
}

SigmaZDistance trace_distance_sigma_z(const BlochTrajectory& traj_up, double delta) {
    traj_up.check_uniform();
    if (!(delta > 0.0)) throw DomainError("trace_distance_sigma_z: delta must be > 0");
    const std::size_t n = traj_up.size();
    const auto dz = time_derivative(traj_up.sz, traj_up.dt);
    std::vector<double> dy(n), dd(n);
    SigmaZDistance out;
    for (std::size_t k = 0; k < n; ++k) {
        const double z = traj_up.sz[k];
        const double y_fd = dz[k] / (2.0 * delta);
        dy[k] = std::hypot(z, traj_up.sy[k]);
        dd[k] = std::hypot(z, y_fd);
        out.max_deviation = std::max(out.max_deviation, std::abs(dy[k] - dd[k]));
        out.max_sigma_y_mismatch = std::max(out.max_sigma_y_mismatch, std::abs(traj_up.sy[k] - y_fd));
    }
    out.from_sigma_y = make_series(traj_up.dt, std::move(dy));
    out.from_derivative = make_series(traj_up.dt, std::move(dd));
    return out;
}

std::vector<BackflowInterval> detect_intervals(const TraceDistanceSeries& s, double eps) {
    if (eps < 0.0) throw DomainError("detect_intervals: eps must be >= 0");
    const std::size_t n = s.size();
    std::vector<BackflowInterval> out;
    if (n < 2) return out;

    std::vector<char> above(n);
    for (std::size_t k = 0; k < n; ++k) above[k] = s.sigma[k] > eps;
    std::vector<char> bridged = above;
    for (std::size_t k = 1; k + 1 < n; ++k)
        if (!above[k] && above[k - 1] && above[k + 1]) bridged[k] = 1;

    // linear eps crossing of σ between grid points lo and lo+1
    auto crossing = [&](std::size_t lo) {
        const double a = s.sigma[lo] - eps;
        const double b = s.sigma[lo + 1] - eps;
        const double w = (a == b) ? 0.5 : std::clamp(a / (a - b), 0.0, 1.0);
        return s.t[lo] + w * s.dt;
    };

    std::size_t k = 0;
    while (k < n) {
        if (!bridged[k]) {
            ++k;
            continue;
        }
        const std::size_t first = k;
        while (k < n && bridged[k]) ++k;
        const std::size_t last = k - 1;
        if (last - first + 1 < 2) continue;
        BackflowInterval iv;
        iv.t_start = first == 0 ? s.t.front() : crossing(first - 1);
        iv.t_end = last + 1 == n ? s.t.back() : crossing(last);
        iv.gain = std::max(0.0, s.d_at(iv.t_end) - s.d_at(iv.t_start));
        if (iv.t_end > iv.t_start) out.push_back(iv);
    }
    return out;
}

NonMarkovianityReport nonmarkovianity(const TraceDistanceSeries& s, double eps, const std::optional<TailModel>& tail) {
    NonMarkovianityReport r;
    r.intervals = detect_intervals(s, eps);
    r.horizon = s.horizon();
    for (const auto& iv : r.intervals) r.n_value += iv.gain;

    std::optional<double> period;
    if (tail) {
        period = tail->period;
        if (!period && r.intervals.size() >= 2) {
            const auto& a = r.intervals[r.intervals.size() - 2];
            const auto& b = r.intervals.back();
            period = b.t_start - a.t_start;
        }
    }
    if (tail && (r.intervals.empty() || (period && *period > 0.0))) {
        if (r.intervals.empty()) {
            r.tail_estimate = 0.0;
        } else {
            const double q = std::exp(-tail->gamma * *period);
            r.tail_estimate = q < 1.0 ? r.intervals.back().gain * q / (1.0 - q) : INFINITY;
        }
    } else {
        r.tail_estimate = s.d.empty() ? 0.0 : std::abs(s.d.back());
    }
    r.converged = r.tail_estimate < tail_tolerance;
    return r;
}

double positive_sigma_integral(const TraceDistanceSeries& s) {
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < s.size(); ++k)
        acc += 0.5 * s.dt * (std::max(s.sigma[k], 0.0) + std::max(s.sigma[k + 1], 0.0));
    return acc;
}

} // namespace sbnm::measure

// trajectory.cpp: BlochTrajectory helpers

#include "sbnm/trajectory.hpp"

#include <algorithm>
#include <string>

#include "sbnm/errors.hpp"

namespace sbnm::measure {

BlochTrajectory make_trajectory(double dt) {
    if (!(dt > 0.0)) throw ConfigError("trajectory: dt must be > 0");
    BlochTrajectory traj;
    traj.dt = dt;
    return traj;
}

void BlochTrajectory::reserve(std::size_t n) {
    t.reserve(n);
    sx.reserve(n);
    sy.reserve(n);
    sz.reserve(n);
}

void BlochTrajectory::push_back(const BlochVector& a) {
    t.push_back(static_cast<double>(t.size()) * dt);
    sx.push_back(a.x);
    sy.push_back(a.y);
    sz.push_back(a.z);
}

void BlochTrajectory::set_meta(const std::string& key, const std::string& value) {
    for (auto& [k, v] : meta) {
        if (k == key) {
            v = value;
            return;
        }
    }
    meta.emplace_back(key, value);
}

std::optional<std::string> BlochTrajectory::get_meta(const std::string& key) const {
    for (const auto& [k, v] : meta)
        if (k == key) return v;
    return std::nullopt;
}

void BlochTrajectory::check_uniform() const {
    const std::size_t n = t.size();
    if (sx.size() != n || sy.size() != n || sz.size() != n)
        throw ShapeError("trajectory: column lengths differ");
    if (n == 0) return;
    if (!(dt > 0.0)) throw ShapeError("trajectory: dt must be > 0");
    for (std::size_t k = 0; k < n; ++k) {
        const double expect = static_cast<double>(k) * dt;
        const double scale = std::max(std::abs(expect), dt);
        if (std::abs(t[k] - expect) > 1e-12 * scale)
            throw ShapeError("trajectory: time grid not uniform at row " + std::to_string(k));
    }
}

double BlochTrajectory::max_bloch_length() const noexcept {
    double m = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) m = std::max(m, at(k).norm());
    return m;
}

} // namespace sbnm::measure

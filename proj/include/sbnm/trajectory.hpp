// trajectory.hpp: Bloch-vector time series shared by all dynamics backends

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sbnm::measure {

struct BlochVector {
    double x{0.0};
    double y{0.0};
    double z{0.0};

    double norm() const noexcept { return std::sqrt(x * x + y * y + z * z); }
};

// Uniformly sampled (<σx>, <σy>, <σz>) on t_k = k·dt.
struct BlochTrajectory {
    double dt{0.0};
    std::vector<double> t;
    std::vector<double> sx;
    std::vector<double> sy;
    std::vector<double> sz;
    // Ordered key/value metadata (solver tag, parameters). Written as CSV comments.
    std::vector<std::pair<std::string, std::string>> meta;

    std::size_t size() const noexcept { return t.size(); }
    bool empty() const noexcept { return t.empty(); }
    double horizon() const noexcept { return t.empty() ? 0.0 : t.back(); }

    BlochVector at(std::size_t k) const { return {sx[k], sy[k], sz[k]}; }

    void reserve(std::size_t n);
    // Appends the sample for grid index size(); the time is k·dt.
    void push_back(const BlochVector& a);

    void set_meta(const std::string& key, const std::string& value);
    std::optional<std::string> get_meta(const std::string& key) const;

    // Throws ShapeError unless the columns agree in length and t_k = k·dt to 1e-12 relative.
    void check_uniform() const;

    // Largest |a(t_k)| over the series.
    double max_bloch_length() const noexcept;
};

BlochTrajectory make_trajectory(double dt);

} // namespace sbnm::measure

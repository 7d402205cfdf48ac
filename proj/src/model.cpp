// model.cpp: Ohmic spectral density and bath discretization

#include "sbnm/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sbnm/errors.hpp"

namespace sbnm::model {

void OhmicSpectralDensity::validate() const {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw ConfigError("spectral density: alpha must be >= 0, got " + std::to_string(alpha));
    if (!(omega_c > 0.0) || !std::isfinite(omega_c))
        throw ConfigError("spectral density: omega_c must be > 0, got " + std::to_string(omega_c));
}

void ModelConfig::validate() const {
    if (!(delta >= 0.0) || !std::isfinite(delta))
        throw ConfigError("model: delta must be >= 0, got " + std::to_string(delta));
    bath.source.validate();
}

double ohmic_j(double omega, const OhmicSpectralDensity& sd) {
    if (omega < 0.0 || std::isnan(omega))
        throw DomainError("ohmic_j: omega must be >= 0, got " + std::to_string(omega));
    return 0.5 * std::numbers::pi * sd.alpha * omega * std::exp(-omega / sd.omega_c);
}

DiscretizedBath discretize_bath(const OhmicSpectralDensity& sd, std::size_t n_modes, double omega_max) {
    sd.validate();
    if (n_modes == 0) throw ConfigError("discretize_bath: n_modes must be >= 1");
    if (!(omega_max > 0.0) || !std::isfinite(omega_max))
        throw ConfigError("discretize_bath: omega_max must be > 0, got " + std::to_string(omega_max));

    DiscretizedBath bath;
    bath.source = sd;
    bath.omega_max = omega_max;
    bath.modes.reserve(n_modes);
    const double dw = omega_max / static_cast<double>(n_modes);
    for (std::size_t n = 0; n < n_modes; ++n) {
        const double w = (static_cast<double>(n) + 0.5) * dw;
        const double c2 = (2.0 / std::numbers::pi) * ohmic_j(w, sd) * w * dw;
        bath.modes.push_back({w, std::sqrt(c2)});
    }
    return bath;
}

double reorganization_sum(const DiscretizedBath& bath) noexcept {
    double s = 0.0;
    for (const auto& m : bath.modes) s += (m.c * m.c) / (m.omega * m.omega);
    return s;
}

double reorganization_integral(const OhmicSpectralDensity& sd, double omega_max) {
    return sd.alpha * sd.omega_c * (-std::expm1(-omega_max / sd.omega_c));
}

} // namespace sbnm::model

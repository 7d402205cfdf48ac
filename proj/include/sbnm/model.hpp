// model.hpp: Ohmic spectral density, equidistant bath discretization, model config

#pragma once

#include <cstddef>
#include <vector>

namespace sbnm::model {

// J(ω) = (π/2) α ω exp(-ω/ω_c). Energies in units of Δ.
struct OhmicSpectralDensity {
    double alpha{0.0};    // dimensionless coupling strength
    double omega_c{1.0};  // characteristic bath frequency

    void validate() const;
};

struct BathMode {
    double omega{0.0};  // mode frequency
    double c{0.0};      // mass-weighted coupling coefficient
};

struct DiscretizedBath {
    std::vector<BathMode> modes;
    OhmicSpectralDensity source;
    double omega_max{0.0};

    std::size_t size() const noexcept { return modes.size(); }
    bool empty() const noexcept { return modes.empty(); }
};

struct ModelConfig {
    double delta{1.0};
    DiscretizedBath bath;

    void validate() const;
};

// Default cutoff of the frequency grid in units of ω_c.
inline constexpr double default_omega_max_factor = 6.0;

double ohmic_j(double omega, const OhmicSpectralDensity& sd);

// Midpoint grid ω_n = (n - 1/2)Δω with c_n² = (2/π) J(ω_n) ω_n Δω, so that
// Σ (π/2)(c_n²/ω_n) f(ω_n) is the midpoint rule for ∫ J(ω) f(ω) dω.
DiscretizedBath discretize_bath(const OhmicSpectralDensity& sd, std::size_t n_modes, double omega_max);

// Σ c_n²/ω_n².
double reorganization_sum(const DiscretizedBath& bath) noexcept;

// Continuum value of the same sum up to omega_max: α ω_c (1 - exp(-omega_max/ω_c)).
double reorganization_integral(const OhmicSpectralDensity& sd, double omega_max);

} // namespace sbnm::model

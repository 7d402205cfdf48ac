// analytic.hpp: Weak-coupling closed forms for <σz>(t), D(t) and the non-Markovianity N
//
// <σz>(t) = e^{-γt} [cos(Δ̃t) + (γ/Δ̃) sin(Δ̃t)]
// D(t)    = e^{-γt} sqrt((1+η)/2 + β sin(2Δ̃t) + (1−η)/2 cos(2Δ̃t))
//
// with Δ̃ = [Γ(1−2α)cos(πα)]^{1/(2(1−α))} (2Δ/ω_c)^{α/(1−α)} 2Δ, γ = (π/2) α Δ̃ e^{−Δ̃/ω_c},
// β = γ/Δ̃ and η = β² + (Δ̃/2Δ)² (1+β²)². This η is the one for which D(t) equals
// sqrt(<σz>² + (∂t<σz>/2Δ)²) identically.
//
// D(t + π/Δ̃) = e^{−πγ/Δ̃} D(t), so the backflow of one period fixes N through a
// geometric series.

#pragma once

#include <numbers>

#include "sbnm/trajectory.hpp"

namespace sbnm::analytic {

inline constexpr double euler_mascheroni = std::numbers::egamma;

struct WeakCouplingParams {
    double alpha{0.0};
    double omega_c{1.0};
    double delta{1.0};
    double delta_tilde{2.0};  // renormalized frequency Δ̃
    double gamma{0.0};        // damping rate
    double beta{0.0};         // γ/Δ̃
    double eta{1.0};

    double period() const noexcept;          // π/Δ̃, the period of the D(t) envelope ratio
    double decay_per_period() const noexcept;  // e^{−πγ/Δ̃}
};

// Throws DomainError for α ≥ 0.5 (pole of Γ(1−2α)) or α < 0.
WeakCouplingParams weak_coupling_params(double alpha, double omega_c, double delta = 1.0);

// Same derived constants from explicit Δ̃ and γ; used for synthetic checks.
WeakCouplingParams params_from_rates(double delta_tilde, double gamma, double delta = 1.0);

double sigma_z_analytic(double t, const WeakCouplingParams& p);
double sigma_z_derivative(double t, const WeakCouplingParams& p);
double sigma_z_second_derivative(double t, const WeakCouplingParams& p);

// Throws DomainError if the radicand drops below −1e−12.
double trace_distance_analytic(double t, const WeakCouplingParams& p);
double trace_distance_derivative(double t, const WeakCouplingParams& p);

struct ResummedResult {
    double value{0.0};
    double t_min{0.0};  // start of the backflow interval
    double t_max{0.0};  // end of the backflow interval (may exceed one period)
    double gain{0.0};   // D(t_max) − D(t_min), the backflow of one period
    bool has_interval{false};
};

// N = (D(t_max) − D(t_min)) / (1 − e^{−πγ/Δ̃}). Throws NumericalError if more than
// one backflow interval appears per period.
ResummedResult resummed_nonmarkovianity(const WeakCouplingParams& p);

// Σ_{n<n_periods} [D(t_max + nπ/Δ̃) − D(t_min + nπ/Δ̃)], evaluated term by term.
double partitioned_nonmarkovianity(const WeakCouplingParams& p, int n_periods);

// Small-α limit: −(2/π²) e^{2Δ/ω_c} [ln(2Δ/ω_c) + γ_E + (π²/4) e^{−2Δ/ω_c}], returned as is.
double nonmarkovianity_alpha_zero(double omega_c, double delta = 1.0);

// Uniformly sampled closed-form trajectory from spin up: sz, sy = ∂t sz / 2Δ, sx = 0
// (the weak-coupling solution carries no <σx>).
measure::BlochTrajectory analytic_trajectory(const WeakCouplingParams& p, double dt, double t_max);

} // namespace sbnm::analytic

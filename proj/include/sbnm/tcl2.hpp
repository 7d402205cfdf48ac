// tcl2.hpp: Second-order time-convolutionless master equation for σz coupling at T = 0
//
// dρ/dt = −i[Δσx, ρ] − ∫_0^t dτ { C(τ)[σz, σz(−τ)ρ] + C*(τ)[ρσz(−τ), σz] },
// σz(−τ) = cos(2Δτ)σz − sin(2Δτ)σy,  C(t) = (α/2) ω_c² / (1 + iω_c t)².
//
// In Bloch form, with Γc,s = ∫ Re C·{cos, sin}(2Δτ) and Λc,s = ∫ Im C·{cos, sin}(2Δτ):
//   dx/dt = −4Γc x + 4Λs
//   dy/dt = −2Δ z − 4Γc y − 4Γs z
//   dz/dt =  2Δ y

#pragma once

#include <complex>
#include <vector>

#include "sbnm/trajectory.hpp"

namespace sbnm::tcl2 {

struct BathCorrelation {
    double alpha{0.0};
    double omega_c{1.0};

    std::complex<double> operator()(double t) const;
};

std::complex<double> bath_correlation(double t, double alpha, double omega_c);

struct Tcl2Coefficients {
    double t{0.0};
    double gamma_cos{0.0};   // ∫_0^t Re C(τ) cos(2Δτ) dτ
    double gamma_sin{0.0};   // ∫_0^t Re C(τ) sin(2Δτ) dτ
    double lambda_cos{0.0};  // ∫_0^t Im C(τ) cos(2Δτ) dτ
    double lambda_sin{0.0};  // ∫_0^t Im C(τ) sin(2Δτ) dτ
};

// Composite Gauss–Legendre quadrature of the four integrals on [0, t].
Tcl2Coefficients tcl2_coefficients(double t, double delta, double alpha, double omega_c);

// The four integrals on [a, b], added to `acc`; advances acc.t to b.
void accumulate_coefficients(Tcl2Coefficients& acc, double a, double b, double delta, double alpha, double omega_c);

// Coefficients on the half-step grid t_j = j·dt/2, j = 0..2·n_steps, built one panel at a time.
std::vector<Tcl2Coefficients> coefficient_table(double delta, double alpha, double omega_c, double dt,
                                                std::size_t n_steps);

// Time-local Bloch generator.
measure::BlochVector bloch_rhs(const Tcl2Coefficients& k, double delta, const measure::BlochVector& a);

// Fixed-step RK4. Throws NumericalError on non-finite state; no clamping.
measure::BlochTrajectory tcl2_propagate(double delta, double alpha, double omega_c, const measure::BlochVector& bloch0,
                                        double dt, double t_max);

} // namespace sbnm::tcl2

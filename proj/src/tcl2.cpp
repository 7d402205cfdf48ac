// tcl2.cpp: TCL2 coefficients and Bloch-equation integrator

#include "sbnm/tcl2.hpp"

#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "sbnm/errors.hpp"
#include "sbnm/format.hpp"

namespace sbnm::tcl2 {

namespace {

using Rule = boost::math::quadrature::gauss<double, 15>;

// Sub-panel width in units of the faster of 1/ω_c and 1/(2Δ); 15-point Gauss–Legendre is
// then exact to rounding for these analytic integrands.
constexpr double panel_phase = 0.25;

} // namespace

std::complex<double> BathCorrelation::operator()(double t) const {
    const std::complex<double> d(1.0, omega_c * t);
    return 0.5 * alpha * omega_c * omega_c / (d * d);
}

std::complex<double> bath_correlation(double t, double alpha, double omega_c) {
    if (t < 0.0) throw DomainError("bath_correlation: t must be >= 0");
    return BathCorrelation{alpha, omega_c}(t);
}

void accumulate_coefficients(Tcl2Coefficients& acc, double a, double b, double delta, double alpha, double omega_c) {
    if (b <= a) {
        acc.t = std::max(acc.t, b);
        return;
    }
    const BathCorrelation corr{alpha, omega_c};
    const double w = 2.0 * delta;
    const double rate = std::max(omega_c, w);
    const auto panels = static_cast<std::size_t>(std::ceil((b - a) * rate / panel_phase));
    const auto& x = Rule::abscissa();
    const auto& wt = Rule::weights();
    double gc = 0.0, gs = 0.0, lc = 0.0, ls = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + (b - a) * static_cast<double>(p) / static_cast<double>(panels);
        const double hi = a + (b - a) * static_cast<double>(p + 1) / static_cast<double>(panels);
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        auto add = [&](double s, double weight) {
            const auto c = corr(s);
            const double cs = std::cos(w * s), sn = std::sin(w * s);
            gc += weight * c.real() * cs;
            gs += weight * c.real() * sn;
            lc += weight * c.imag() * cs;
            ls += weight * c.imag() * sn;
        };
        // odd rule: abscissa()[0] is the midpoint
        add(mid, half * wt[0]);
        for (std::size_t i = 1; i < x.size(); ++i) {
            add(mid + half * x[i], half * wt[i]);
            add(mid - half * x[i], half * wt[i]);
        }
    }
    if (!std::isfinite(gc) || !std::isfinite(gs) || !std::isfinite(lc) || !std::isfinite(ls))
        throw NumericalError("tcl2: non-finite coefficient on [" + format_double(a) + ", " + format_double(b) + "]");
    acc.gamma_cos += gc;
    acc.gamma_sin += gs;
    acc.lambda_cos += lc;
    acc.lambda_sin += ls;
    acc.t = b;
}

Tcl2Coefficients tcl2_coefficients(double t, double delta, double alpha, double omega_c) {
    if (t < 0.0) throw DomainError("tcl2_coefficients: t must be >= 0");
    Tcl2Coefficients acc;
    accumulate_coefficients(acc, 0.0, t, delta, alpha, omega_c);
    acc.t = t;
    return acc;
}
std::vector<Tcl2Coefficients> coefficient_table(double delta, double alpha, double omega_c, double dt,
                                                std::size_t n_steps) {
    std::vector<Tcl2Coefficients> table(2 * n_steps + 1);
    const double h = 0.5 * dt;
    Tcl2Coefficients acc;
    for (std::size_t j = 1; j < table.size(); ++j) {
        accumulate_coefficients(acc, static_cast<double>(j - 1) * h, static_cast<double>(j) * h, delta, alpha, omega_c);
        table[j] = acc;
    }
    return table;
}

measure::BlochVector bloch_rhs(const Tcl2Coefficients& k, double delta, const measure::BlochVector& a) {
    return {-4.0 * k.gamma_cos * a.x + 4.0 * k.lambda_sin,
            -2.0 * delta * a.z - 4.0 * k.gamma_cos * a.y - 4.0 * k.gamma_sin * a.z,
            2.0 * delta * a.y};
}

measure::BlochTrajectory tcl2_propagate(double delta, double alpha, double omega_c, const measure::BlochVector& bloch0,
                                        double dt, double t_max) {
    if (!(delta > 0.0)) throw ConfigError("tcl2: delta must be > 0");
    if (!(alpha >= 0.0)) throw ConfigError("tcl2: alpha must be >= 0");
    if (!(omega_c > 0.0)) throw ConfigError("tcl2: omega_c must be > 0");
    if (!(dt > 0.0) || !(t_max >= dt)) throw ConfigError("tcl2: need dt > 0 and t_max >= dt");
    if (bloch0.norm() > 1.0 + 1e-12) throw ConfigError("tcl2: initial Bloch vector longer than 1");

    const auto n_steps = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
    const auto table = coefficient_table(delta, alpha, omega_c, dt, n_steps);

    auto traj = measure::make_trajectory(dt);
    traj.reserve(n_steps + 1);
    measure::BlochVector a = bloch0;
    traj.push_back(a);
    auto axpy = [](const measure::BlochVector& v, double s, const measure::BlochVector& d) {
        return measure::BlochVector{v.x + s * d.x, v.y + s * d.y, v.z + s * d.z};
    };
    for (std::size_t i = 0; i < n_steps; ++i) {
        const auto& k0 = table[2 * i];
        const auto& kh = table[2 * i + 1];
        const auto& k1 = table[2 * i + 2];
        const auto d1 = bloch_rhs(k0, delta, a);
        const auto d2 = bloch_rhs(kh, delta, axpy(a, 0.5 * dt, d1));
        const auto d3 = bloch_rhs(kh, delta, axpy(a, 0.5 * dt, d2));
        const auto d4 = bloch_rhs(k1, delta, axpy(a, dt, d3));
        a.x += dt / 6.0 * (d1.x + 2.0 * d2.x + 2.0 * d3.x + d4.x);
        a.y += dt / 6.0 * (d1.y + 2.0 * d2.y + 2.0 * d3.y + d4.y);
        a.z += dt / 6.0 * (d1.z + 2.0 * d2.z + 2.0 * d3.z + d4.z);
        if (!std::isfinite(a.x) || !std::isfinite(a.y) || !std::isfinite(a.z))
            throw NumericalError("tcl2: non-finite Bloch vector at t = " + format_double(static_cast<double>(i + 1) * dt));
        traj.push_back(a);
    }
    traj.set_meta("solver", "tcl2");
    traj.set_meta("alpha", format_double(alpha));
    traj.set_meta("omega_c", format_double(omega_c));
    traj.set_meta("delta", format_double(delta));
    traj.set_meta("dt", format_double(dt));
    return traj;
}

} // namespace sbnm::tcl2

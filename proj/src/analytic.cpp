// analytic.cpp: Weak-coupling closed forms and the resummed non-Markovianity

#include "sbnm/analytic.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "sbnm/errors.hpp"
#include "sbnm/format.hpp"

namespace sbnm::analytic {

namespace {

constexpr double pi = std::numbers::pi;
constexpr int scan_points = 1000;

double radicand(double t, const WeakCouplingParams& p) {
    const double th = 2.0 * p.delta_tilde * t;
    return 0.5 * (1.0 + p.eta) + p.beta * std::sin(th) + 0.5 * (1.0 - p.eta) * std::cos(th);
}

double radicand_derivative(double t, const WeakCouplingParams& p) {
    const double th = 2.0 * p.delta_tilde * t;
    return 2.0 * p.delta_tilde * (p.beta * std::cos(th) - 0.5 * (1.0 - p.eta) * std::sin(th));
}

void complete(WeakCouplingParams& p) {
    p.beta = p.gamma / p.delta_tilde;
    const double r = p.delta_tilde / (2.0 * p.delta);
    const double s = 1.0 + p.beta * p.beta;
    p.eta = p.beta * p.beta + r * r * s * s;
}

struct Backflow {
    bool found{false};
    double t_min{0.0};
    double t_max{0.0};
};

// Locates the single interval per period on which D' > 0. The scan grid is
// offset by half a cell so the stationary points at multiples of π/Δ̃ fall
// strictly between samples.
Backflow locate_backflow(const WeakCouplingParams& p) {
    const double period = p.period();
    const double h = period / scan_points;
    auto ddt = [&](double t) { return trace_distance_derivative(t, p); };

    std::vector<double> ts(scan_points + 1);
    std::vector<int> sign(scan_points + 1);
    for (int i = 0; i <= scan_points; ++i) {
        ts[static_cast<std::size_t>(i)] = (i + 0.5) * h;
        const double v = ddt(ts[static_cast<std::size_t>(i)]);
        sign[static_cast<std::size_t>(i)] = (v > 0.0) ? 1 : -1;
    }

    std::vector<std::pair<double, double>> up, down;
    for (std::size_t i = 0; i < scan_points; ++i) {
        if (sign[i] < 0 && sign[i + 1] > 0) up.emplace_back(ts[i], ts[i + 1]);
        if (sign[i] > 0 && sign[i + 1] < 0) down.emplace_back(ts[i], ts[i + 1]);
    }
    if (up.empty() && down.empty()) {
        if (sign[0] > 0) throw NumericalError("resummation: trace distance increases over a whole period");
        return {};
    }
    if (up.size() != 1 || down.size() != 1)
        throw NumericalError("resummation: " + std::to_string(up.size()) +
                             " backflow intervals per period; a single connected interval is required");

    auto refine = [&](std::pair<double, double> br) {
        auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-12; };
        const auto r = boost::math::tools::bisect(ddt, br.first, br.second, tol);
        return 0.5 * (r.first + r.second);
    };
    Backflow b;
    b.found = true;
    b.t_min = std::fmod(refine(up.front()), period);
    b.t_max = refine(down.front());
    while (b.t_max <= b.t_min) b.t_max += period;
    while (b.t_max - b.t_min > period) b.t_max -= period;
    return b;
}

} // namespace

double WeakCouplingParams::period() const noexcept { return pi / delta_tilde; }

double WeakCouplingParams::decay_per_period() const noexcept { return std::exp(-pi * gamma / delta_tilde); }

WeakCouplingParams weak_coupling_params(double alpha, double omega_c, double delta) {
    if (!(alpha >= 0.0)) throw DomainError("weak_coupling_params: alpha must be >= 0");
    if (!(alpha < 0.5))
        throw DomainError("weak_coupling_params: alpha must be < 0.5 (Gamma(1 - 2 alpha) has a pole at alpha = 0.5), got " +
                          std::to_string(alpha));
    if (!(omega_c > 0.0)) throw DomainError("weak_coupling_params: omega_c must be > 0");
    if (!(delta > 0.0)) throw DomainError("weak_coupling_params: delta must be > 0");

    WeakCouplingParams p;
    p.alpha = alpha;
    p.omega_c = omega_c;
    p.delta = delta;
    const double prefactor = std::tgamma(1.0 - 2.0 * alpha) * std::cos(pi * alpha);
    p.delta_tilde = std::pow(prefactor, 1.0 / (2.0 * (1.0 - alpha))) *
                    std::pow(2.0 * delta / omega_c, alpha / (1.0 - alpha)) * 2.0 * delta;
    p.gamma = 0.5 * pi * alpha * p.delta_tilde * std::exp(-p.delta_tilde / omega_c);
    complete(p);
    return p;
}

WeakCouplingParams params_from_rates(double delta_tilde, double gamma, double delta) {
    if (!(delta_tilde > 0.0) || !(gamma >= 0.0) || !(delta > 0.0))
        throw DomainError("params_from_rates: need delta_tilde > 0, gamma >= 0, delta > 0");
    WeakCouplingParams p;
    p.delta = delta;
    p.delta_tilde = delta_tilde;
    p.gamma = gamma;
    complete(p);
    return p;
}

double sigma_z_analytic(double t, const WeakCouplingParams& p) {
    const double x = p.delta_tilde * t;
    return std::exp(-p.gamma * t) * (std::cos(x) + p.beta * std::sin(x));
}

double sigma_z_derivative(double t, const WeakCouplingParams& p) {
    const double x = p.delta_tilde * t;
    return -std::exp(-p.gamma * t) * p.delta_tilde * (1.0 + p.beta * p.beta) * std::sin(x);
}

double sigma_z_second_derivative(double t, const WeakCouplingParams& p) {
    const double x = p.delta_tilde * t;
    return std::exp(-p.gamma * t) * p.delta_tilde * (1.0 + p.beta * p.beta) *
           (p.gamma * std::sin(x) - p.delta_tilde * std::cos(x));
}

double trace_distance_analytic(double t, const WeakCouplingParams& p) {
    const double r = radicand(t, p);
    if (r < -1e-12) throw DomainError("trace_distance_analytic: negative radicand " + format_double(r));
    return std::exp(-p.gamma * t) * std::sqrt(std::max(r, 0.0));
}

double trace_distance_derivative(double t, const WeakCouplingParams& p) {
    const double r = radicand(t, p);
    if (r <= 0.0) throw DomainError("trace_distance_derivative: non-positive radicand " + format_double(r));
    const double sr = std::sqrt(r);
    return std::exp(-p.gamma * t) * (-p.gamma * sr + radicand_derivative(t, p) / (2.0 * sr));
}

ResummedResult resummed_nonmarkovianity(const WeakCouplingParams& p) {
    ResummedResult res;
    if (p.gamma == 0.0) return res;  // unitary: D ≡ 1
    const auto b = locate_backflow(p);
    if (!b.found) return res;
    res.has_interval = true;
    res.t_min = b.t_min;
    res.t_max = b.t_max;
    res.gain = trace_distance_analytic(b.t_max, p) - trace_distance_analytic(b.t_min, p);
    res.value = res.gain / (-std::expm1(-pi * p.gamma / p.delta_tilde));
    return res;
}

double partitioned_nonmarkovianity(const WeakCouplingParams& p, int n_periods) {
    if (n_periods < 1) throw ConfigError("partitioned_nonmarkovianity: n_periods must be >= 1");
    if (p.gamma == 0.0) return 0.0;
    const auto b = locate_backflow(p);
    if (!b.found) return 0.0;
    const double period = p.period();
    double sum = 0.0;
    for (int n = 0; n < n_periods; ++n) {
        const double shift = n * period;
        sum += trace_distance_analytic(b.t_max + shift, p) - trace_distance_analytic(b.t_min + shift, p);
    }
    return sum;
}

double nonmarkovianity_alpha_zero(double omega_c, double delta) {
    if (!(omega_c > 0.0) || !(delta > 0.0)) throw DomainError("nonmarkovianity_alpha_zero: need omega_c, delta > 0");
    const double x = 2.0 * delta / omega_c;
    return -(2.0 / (pi * pi)) * std::exp(x) * (std::log(x) + euler_mascheroni + 0.25 * pi * pi * std::exp(-x));
}

measure::BlochTrajectory analytic_trajectory(const WeakCouplingParams& p, double dt, double t_max) {
    if (!(dt > 0.0) || !(t_max >= dt)) throw ConfigError("analytic_trajectory: need dt > 0 and t_max >= dt");
    auto traj = measure::make_trajectory(dt);
    const auto n = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
    traj.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) * dt;
        traj.push_back({0.0, sigma_z_derivative(t, p) / (2.0 * p.delta), sigma_z_analytic(t, p)});
    }
    traj.set_meta("solver", "analytic");
    traj.set_meta("initial_spin", "up");
    traj.set_meta("alpha", format_double(p.alpha));
    traj.set_meta("omega_c", format_double(p.omega_c));
    traj.set_meta("delta", format_double(p.delta));
    traj.set_meta("delta_tilde", format_double(p.delta_tilde));
    traj.set_meta("gamma", format_double(p.gamma));
    traj.set_meta("dt", format_double(dt));
    return traj;
}

} // namespace sbnm::analytic

// test_analytic.cpp

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/tools/roots.hpp>

#include "sbnm/analytic.hpp"
#include "sbnm/errors.hpp"
#include "sbnm/measure.hpp"

using namespace sbnm;
using namespace sbnm::analytic;

namespace {

constexpr double pi = std::numbers::pi;

// Midpoint-rule ∫ max(D', 0) dt on [0, t_end] with the closed-form derivative.
double positive_part_integral(const WeakCouplingParams& p, double t_end, std::size_t n) {
    const double h = t_end / static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::max(0.0, trace_distance_derivative((static_cast<double>(i) + 0.5) * h, p));
    return acc * h;
}

} // namespace

TEST_CASE("gamma function reference values") {
    const std::pair<double, double> ref[] = {
        {0.5, 1.7724538509055160273},  {1.0, 1.0},
        {1.5, 0.88622692545275801365}, {2.0, 1.0},
        {2.5, 1.3293403881791370205},  {3.0, 2.0},
        {0.1, 9.5135076986687318397},  {0.25, 3.6256099082219083119},
        {0.75, 1.2254167024651776451}, {1.0 / 3.0, 2.6789385347077476337},
    };
    for (const auto& [x, g] : ref) CHECK(std::tgamma(x) == doctest::Approx(g).epsilon(1e-12));
    CHECK(euler_mascheroni == doctest::Approx(0.57721566490153286061).epsilon(1e-15));
}

TEST_CASE("zero coupling limit") {
    const auto p = weak_coupling_params(0.0, 20.0);
    CHECK(p.delta_tilde == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(p.gamma == 0.0);
    CHECK(p.beta == 0.0);
    CHECK(p.eta == doctest::Approx(1.0).epsilon(1e-15));
    for (double t : {0.0, 0.4, 3.0}) CHECK(trace_distance_analytic(t, p) == doctest::Approx(1.0).epsilon(1e-14));
    const auto r = resummed_nonmarkovianity(p);
    CHECK(r.value == 0.0);
    CHECK_FALSE(r.has_interval);
}

TEST_CASE("renormalized parameters, frozen from a 30-digit reference") {
    const auto p = weak_coupling_params(0.1, 20.0);
    CHECK(p.delta_tilde == doctest::Approx(1.63869995872409).epsilon(1e-12));
    CHECK(p.gamma == doctest::Approx(0.237156702048464).epsilon(1e-12));
    CHECK(p.beta == doctest::Approx(0.144722467823283).epsilon(1e-12));
    CHECK(p.eta == doctest::Approx(0.720695130296197).epsilon(1e-12));
    CHECK(p.period() == doctest::Approx(pi / 1.63869995872409).epsilon(1e-12));

    const auto q = weak_coupling_params(0.3, 20.0);
    CHECK(q.delta_tilde == doctest::Approx(0.901057427471399).epsilon(1e-12));
    CHECK(q.gamma == doctest::Approx(0.40590779286952).epsilon(1e-12));
    CHECK(q.eta == doctest::Approx(0.496647176735161).epsilon(1e-12));
}

TEST_CASE("domain of the closed forms") {
    const auto edge = weak_coupling_params(0.49, 20.0);
    CHECK(std::isfinite(edge.delta_tilde));
    CHECK(edge.delta_tilde > 0.0);
    CHECK(std::isfinite(edge.gamma));
    CHECK(std::isfinite(resummed_nonmarkovianity(edge).value));
    CHECK_THROWS_AS(weak_coupling_params(0.5, 20.0), DomainError);
    CHECK_THROWS_AS(weak_coupling_params(0.7, 20.0), DomainError);
    CHECK_THROWS_AS(weak_coupling_params(-0.1, 20.0), DomainError);
    CHECK_THROWS_AS(weak_coupling_params(0.1, 0.0), DomainError);
    try {
        weak_coupling_params(0.5, 20.0);
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("pole") != std::string::npos);
    }
}

TEST_CASE("D(t) is the σz-only form of the trace distance") {
    for (const auto& [a, wc] : {std::pair{0.1, 20.0}, {0.3, 20.0}, {0.2, 10.0}, {0.45, 40.0}}) {
        const auto p = weak_coupling_params(a, wc);
        for (int i = 0; i < 200; ++i) {
            const double t = 0.05 * i;
            const double z = sigma_z_analytic(t, p);
            const double y = sigma_z_derivative(t, p) / (2.0 * p.delta);
            CHECK(trace_distance_analytic(t, p) == doctest::Approx(std::hypot(z, y)).epsilon(1e-12));
        }
        CHECK(sigma_z_analytic(0.0, p) == 1.0);
        CHECK(trace_distance_analytic(0.0, p) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("closed-form derivatives agree with finite differences") {
    const auto p = weak_coupling_params(0.2, 20.0);
    const double h = 1e-5;
    for (double t : {0.3, 1.1, 2.7, 5.0}) {
        CHECK(sigma_z_derivative(t, p) ==
              doctest::Approx((sigma_z_analytic(t + h, p) - sigma_z_analytic(t - h, p)) / (2 * h)).epsilon(1e-8));
        CHECK(sigma_z_second_derivative(t, p) ==
              doctest::Approx((sigma_z_derivative(t + h, p) - sigma_z_derivative(t - h, p)) / (2 * h)).epsilon(1e-7));
        CHECK(trace_distance_derivative(t, p) ==
              doctest::Approx((trace_distance_analytic(t + h, p) - trace_distance_analytic(t - h, p)) / (2 * h))
                  .epsilon(1e-7));
    }
}

TEST_CASE("periodicity D(t + π/Δ̃) = e^{−πγ/Δ̃} D(t)") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ua(0.01, 0.45), uw(5.0, 60.0), ut(0.0, 30.0);
    for (int k = 0; k < 5; ++k) {
        const auto p = weak_coupling_params(ua(rng), uw(rng));
        const double q = p.decay_per_period();
        for (int i = 0; i < 1000; ++i) {
            const double t = ut(rng);
            const double lhs = trace_distance_analytic(t + p.period(), p);
            const double rhs = q * trace_distance_analytic(t, p);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, rhs));
        }
    }
}

TEST_CASE("resummed non-Markovianity, frozen values") {
    const auto r1 = resummed_nonmarkovianity(weak_coupling_params(0.1, 20.0));
    REQUIRE(r1.has_interval);
    CHECK(r1.value == doctest::Approx(0.0962431779345551).epsilon(1e-9));
    CHECK(r1.t_min == doctest::Approx(1.36101590126188).epsilon(1e-9));
    CHECK(r1.t_max == doctest::Approx(1.91712499708358).epsilon(1e-9));

    const auto r3 = resummed_nonmarkovianity(weak_coupling_params(0.3, 20.0));
    CHECK(r3.value == doctest::Approx(0.0794939555120182).epsilon(1e-9));
    CHECK(resummed_nonmarkovianity(weak_coupling_params(0.2, 20.0)).value ==
          doctest::Approx(0.087588726654008).epsilon(1e-9));
}

TEST_CASE("backflow intervals end at extrema of <σz>") {
    for (double a : {0.05, 0.1, 0.2, 0.3, 0.4}) {
        const auto p = weak_coupling_params(a, 20.0);
        const auto r = resummed_nonmarkovianity(p);
        REQUIRE(r.has_interval);
        CHECK(std::abs(sigma_z_derivative(r.t_max, p)) < 1e-9);
        CHECK(std::abs(trace_distance_derivative(r.t_min, p)) < 1e-9);
        CHECK(r.t_min < r.t_max);
        CHECK(r.t_max - r.t_min < p.period());
        CHECK(r.gain > 0.0);
    }
}

TEST_CASE("resummation agrees with direct integration and with the partitioned sum") {
    for (double a : {0.1, 0.2, 0.3}) {
        const auto p = weak_coupling_params(a, 20.0);
        const auto r = resummed_nonmarkovianity(p);
        CHECK(std::abs(positive_part_integral(p, 60.0 / p.gamma, 400000) - r.value) < 1e-4);
        CHECK(std::abs(partitioned_nonmarkovianity(p, 200) - r.value) < 1e-10);
        CHECK(partitioned_nonmarkovianity(p, 1) == doctest::Approx(r.gain).epsilon(1e-14));
    }
}

TEST_CASE("N(α) decreases strictly on [0.05, 0.45] and grows with ω_c") {
    for (double wc : {10.0, 20.0, 40.0}) {
        double prev = INFINITY;
        for (int i = 0; i <= 40; ++i) {
            const double a = 0.05 + 0.01 * i;
            const double n = resummed_nonmarkovianity(weak_coupling_params(a, wc)).value;
            CHECK(n < prev);
            prev = n;
        }
    }
    const double n10 = resummed_nonmarkovianity(weak_coupling_params(0.1, 10.0)).value;
    const double n20 = resummed_nonmarkovianity(weak_coupling_params(0.1, 20.0)).value;
    const double n40 = resummed_nonmarkovianity(weak_coupling_params(0.1, 40.0)).value;
    CHECK(n10 == doctest::Approx(0.0390240602347732).epsilon(1e-9));
    CHECK(n40 == doctest::Approx(0.167353429384817).epsilon(1e-9));
    CHECK(n10 < n20);
    CHECK(n20 < n40);
}

TEST_CASE("small-α limit formula") {
    CHECK(nonmarkovianity_alpha_zero(20.0) == doctest::Approx(-0.113595836798851).epsilon(1e-12));
    CHECK(nonmarkovianity_alpha_zero(33.0) == doctest::Approx(-0.0207032090435118).epsilon(1e-12));
    CHECK(nonmarkovianity_alpha_zero(40.0) == doctest::Approx(0.0152215840588428).epsilon(1e-12));
    // depends on ω_c/Δ only
    CHECK(nonmarkovianity_alpha_zero(80.0, 2.0) == doctest::Approx(nonmarkovianity_alpha_zero(40.0)).epsilon(1e-14));

    auto f = [](double w) { return nonmarkovianity_alpha_zero(w); };
    const auto root = boost::math::tools::bisect(f, 30.0, 40.0, [](double a, double b) { return b - a < 1e-10; });
    const double w0 = 0.5 * (root.first + root.second);
    CHECK(w0 == doctest::Approx(36.8737083272546).epsilon(1e-9));
    CHECK(std::abs(nonmarkovianity_alpha_zero(w0)) < 1e-3);
}

TEST_CASE("sampled trajectory") {
    const auto p = weak_coupling_params(0.1, 20.0);
    const auto traj = analytic_trajectory(p, 1e-3, 10.0);
    traj.check_uniform();
    CHECK(traj.size() == 10001);
    CHECK(traj.sz[0] == 1.0);
    CHECK(traj.get_meta("solver") == "analytic");
    for (std::size_t k = 0; k < traj.size(); k += 997) {
        CHECK(traj.sx[k] == 0.0);
        CHECK(traj.sz[k] == doctest::Approx(sigma_z_analytic(traj.t[k], p)).epsilon(1e-14));
        CHECK(traj.sy[k] == doctest::Approx(sigma_z_derivative(traj.t[k], p) / 2.0).epsilon(1e-14));
    }
    const auto s = measure::trace_distance_pair(traj, measure::mirror_bloch(traj));
    for (std::size_t k = 0; k < s.size(); k += 101)
        CHECK(s.d[k] == doctest::Approx(trace_distance_analytic(s.t[k], p)).epsilon(1e-12));
}

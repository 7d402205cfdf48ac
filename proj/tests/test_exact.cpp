// test_exact.cpp

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include <unsupported/Eigen/MatrixFunctions>

#include "sbnm/errors.hpp"
#include "sbnm/exact.hpp"
#include "sbnm/measure.hpp"

using namespace sbnm;
using namespace sbnm::exact;
using cd = std::complex<double>;

namespace {

model::ModelConfig make_model(double alpha, double omega_c, std::size_t modes, double omega_max, double delta = 1.0) {
    return {delta, model::discretize_bath({alpha, omega_c}, modes, omega_max)};
}

// Dense H − E_0 assembled directly from occupation vectors, ordered like `basis` so
// the result can be compared elementwise with HamiltonianAction::dense().
Eigen::MatrixXcd reference_hamiltonian(const model::ModelConfig& cfg, const FockBasis& basis) {
    const auto nb = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * nb, 2 * nb);
    const auto& modes = cfg.bath.modes;
    for (Eigen::Index i = 0; i < nb; ++i) {
        const auto occ = basis.occupation(static_cast<std::size_t>(i));
        double e = 0.0;
        for (std::size_t j = 0; j < modes.size(); ++j) e += modes[j].omega * occ[j];
        h(i, i) = e;
        h(nb + i, nb + i) = e;
        h(i, nb + i) = cfg.delta;
        h(nb + i, i) = cfg.delta;
        for (std::size_t j = 0; j < modes.size(); ++j) {
            auto up = occ;
            up[j] += 1;
            const auto k = basis.index_of(up);
            if (!k) continue;
            const double g = modes[j].c / std::sqrt(2.0 * modes[j].omega) * std::sqrt(static_cast<double>(up[j]));
            const auto kk = static_cast<Eigen::Index>(*k);
            h(kk, i) += g;
            h(i, kk) += g;
            h(nb + kk, nb + i) -= g;
            h(nb + i, nb + kk) -= g;
        }
    }
    return h;
}

measure::BlochVector bloch_of(const Eigen::VectorXcd& psi) {
    const auto nb = psi.size() / 2;
    const cd w = psi.head(nb).dot(psi.tail(nb));
    return {2.0 * w.real(), 2.0 * w.imag(), psi.head(nb).squaredNorm() - psi.tail(nb).squaredNorm()};
}

double max_component_diff(const measure::BlochTrajectory& a, const measure::BlochTrajectory& b) {
    REQUIRE(a.size() == b.size());
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        d = std::max({d, std::abs(a.sx[k] - b.sx[k]), std::abs(a.sy[k] - b.sy[k]), std::abs(a.sz[k] - b.sz[k])});
    return d;
}

} // namespace

TEST_CASE("single mode, cap 2: dense action equals the hand-built Rabi matrix") {
    const auto cfg = make_model(0.2, 3.0, 1, 4.0);
    const FockTruncation trunc{2, 2};
    const auto h = build_hamiltonian_action(cfg, trunc);
    REQUIRE(h.dimension() == 6);
    const double w = cfg.bath.modes[0].omega;
    const double g = cfg.bath.modes[0].c / std::sqrt(2.0 * w);
    // order: ↑|0>, ↑|1>, ↑|2>, ↓|0>, ↓|1>, ↓|2>
    Eigen::MatrixXd rabi = Eigen::MatrixXd::Zero(6, 6);
    for (int s = 0; s < 2; ++s) {
        const double sign = s == 0 ? 1.0 : -1.0;
        for (int n = 0; n < 3; ++n) rabi(3 * s + n, 3 * s + n) = w * n;
        rabi(3 * s, 3 * s + 1) = rabi(3 * s + 1, 3 * s) = sign * g;
        rabi(3 * s + 1, 3 * s + 2) = rabi(3 * s + 2, 3 * s + 1) = sign * g * std::sqrt(2.0);
    }
    for (int n = 0; n < 3; ++n) rabi(n, 3 + n) = rabi(3 + n, n) = 1.0;
    CHECK((h.dense() - rabi.cast<cd>()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(h.zero_point() == doctest::Approx(0.5 * w));
}

TEST_CASE("dense action matches the occupation-vector reference") {
    for (const auto& trunc : {FockTruncation{3, std::nullopt}, FockTruncation{4, 2}}) {
        const auto cfg = make_model(0.3, 5.0, 4, 15.0, 0.7);
        const auto h = build_hamiltonian_action(cfg, trunc);
        const auto ref = reference_hamiltonian(cfg, *h.basis());
        const Eigen::MatrixXcd d = h.dense();
        CHECK((d - ref).cwiseAbs().maxCoeff() < 1e-13);
        CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(h.norm_bound() >= d.selfadjointView<Eigen::Lower>().eigenvalues().cwiseAbs().maxCoeff() - 1e-12);
    }
}

TEST_CASE("zero coupling: spin block is Δσx and the bath is decoupled") {
    const auto cfg = make_model(0.0, 20.0, 3, 60.0);
    const auto h = build_hamiltonian_action(cfg, {2, std::nullopt});
    const Eigen::MatrixXcd d = h.dense();
    const auto nb = static_cast<Eigen::Index>(h.bath_dimension());
    for (Eigen::Index i = 0; i < 2 * nb; ++i)
        for (Eigen::Index j = 0; j < 2 * nb; ++j) {
            if (i == j) continue;
            const bool spin_flip = std::abs(i - j) == nb;
            CHECK(std::abs(d(i, j)) == doctest::Approx(spin_flip ? 1.0 : 0.0));
        }
}

TEST_CASE("resource guard reports the dimension") {
    const auto cfg = make_model(0.1, 20.0, 400, 120.0);
    try {
        build_hamiltonian_action(cfg, {3, std::nullopt}, 1'000'000);
        FAIL("expected ResourceError");
    } catch (const ResourceError& e) {
        CHECK(e.dimension == 2 * count_configurations(400, {3, std::nullopt}));
    }
}

TEST_CASE("initial states") {
    auto basis = std::make_shared<const FockBasis>(5, FockTruncation{2, std::nullopt}, 1000);
    const auto up = initial_state(true, basis);
    const auto dn = initial_state(false, basis);
    CHECK(up.norm() == 1.0);
    CHECK(up.bloch().z == 1.0);
    CHECK(dn.bloch().z == -1.0);
    CHECK(up.bloch().x == 0.0);
    CHECK(dn.bloch().y == 0.0);
}

TEST_CASE("krylov_step: free spin, zero step, and a dense exponential") {
    SUBCASE("free spin") {
        const auto h = build_hamiltonian_action(make_model(0.0, 20.0, 2, 60.0), {1, std::nullopt});
        const auto psi = krylov_step(h, initial_state(true, h.basis()), 0.37, {});
        CHECK(psi.bloch().z == doctest::Approx(std::cos(2.0 * 0.37)).epsilon(1e-12));
    }
    SUBCASE("dt = 0 is the identity") {
        const auto h = build_hamiltonian_action(make_model(0.2, 5.0, 2, 10.0), {2, std::nullopt});
        const auto psi0 = initial_state(true, h.basis());
        const auto psi = krylov_step(h, psi0, 0.0, {});
        CHECK((psi.amplitudes - psi0.amplitudes).norm() == 0.0);
    }
    SUBCASE("one mode, cap 3") {
        const auto h = build_hamiltonian_action(make_model(0.4, 2.0, 1, 3.0), {3, 3});
        REQUIRE(h.dimension() == 8);
        Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(8);
        psi0[0] = cd(0.6, 0.0);
        psi0[5] = cd(0.0, 0.8);
        const JointState s{psi0, h.basis()};
        const double dt = 0.9;
        const Eigen::MatrixXcd u = (cd(0.0, -dt) * h.dense()).exp();
        const auto got = krylov_step(h, s, dt, {6, 1e-12, 40});
        CHECK((got.amplitudes - u * psi0).norm() < 1e-9);
    }
}

TEST_CASE("Krylov subspace of a tiny space is exhausted and exact") {
    const auto h = build_hamiltonian_action(make_model(0.2, 5.0, 1, 6.0), {2, std::nullopt});
    const auto psi0 = initial_state(true, h.basis()).amplitudes;
    const KrylovSubspace ks(h, psi0, 20);
    CHECK(ks.exhausted());
    CHECK(ks.dimension() <= 6);
    CHECK(ks.error_estimate(10.0) == 0.0);
    const Eigen::MatrixXcd u = (cd(0.0, -10.0) * h.dense()).exp();
    CHECK((ks.evolve(10.0) - u * psi0).norm() < 1e-10);
}

TEST_CASE("tiny-instance trajectories match dense exponential propagation to 1e-8") {
    // 3 modes, N_exc = 5: 56 configurations, dense dimension 112.
    const auto cfg = make_model(0.3, 5.0, 3, 15.0);
    const FockTruncation trunc{5, std::nullopt};
    const auto h = build_hamiltonian_action(cfg, trunc);
    REQUIRE(h.dimension() <= 200);
    const PropagatorConfig pc{0.01, 6.0, 12, 1e-12};
    for (bool spin_up : {true, false}) {
        const auto traj = propagate(h, pc, spin_up);
        const Eigen::MatrixXcd u = (cd(0.0, -pc.dt) * h.dense()).exp();
        Eigen::VectorXcd psi = initial_state(spin_up, h.basis()).amplitudes;
        double dev = 0.0;
        for (std::size_t k = 0; k < traj.size(); ++k) {
            const auto b = bloch_of(psi);
            dev = std::max({dev, std::abs(b.x - traj.sx[k]), std::abs(b.y - traj.sy[k]), std::abs(b.z - traj.sz[k])});
            psi = u * psi;
        }
        CHECK(dev < 1e-8);
    }
}

TEST_CASE("free spin: <σz> = cos 2Δt, <σy> = −sin 2Δt, <σx> = 0") {
    const auto traj = propagate(make_model(0.0, 20.0, 10, 120.0), {2, std::nullopt}, {1e-3, 3.0, 20, 1e-10}, true);
    traj.check_uniform();
    REQUIRE(traj.size() == 3001);
    double dev = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double t = traj.t[k];
        dev = std::max({dev, std::abs(traj.sz[k] - std::cos(2.0 * t)), std::abs(traj.sy[k] + std::sin(2.0 * t)),
                        std::abs(traj.sx[k])});
    }
    CHECK(dev < 1e-8);
}

TEST_CASE("Δ = 0: <σz> is conserved") {
    const auto traj = propagate(make_model(0.3, 5.0, 6, 15.0, 0.0), {3, std::nullopt}, {0.01, 4.0, 20, 1e-10}, true);
    for (double z : traj.sz) CHECK(z == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("unitarity, energy, Bloch length, mirror and derivative identities") {
    const auto cfg = make_model(0.1, 20.0, 24, 24.0);
    const FockTruncation trunc{3, std::nullopt};
    const auto h = build_hamiltonian_action(cfg, trunc);
    const PropagatorConfig pc{1e-3, 4.0, 20, 1e-10};
    PropagationStats stats;
    const auto up = propagate(h, pc, true, &stats);
    const auto down = propagate(h, pc, false);

    CHECK(std::abs(stats.final_norm - 1.0) < 1e-8);
    CHECK(std::abs(stats.final_energy - stats.initial_energy) < 1e-7);
    CHECK(up.max_bloch_length() <= 1.0 + 1e-8);

    CHECK(max_component_diff(down, measure::mirror_bloch(up)) < 1e-8);

    const auto dz = measure::time_derivative(up.sz, up.dt);
    double dev = 0.0;
    for (std::size_t k = 1; k + 1 < up.size(); ++k) dev = std::max(dev, std::abs(up.sy[k] - dz[k] / (2.0 * cfg.delta)));
    CHECK(dev < 5e-4);

    const auto pair = measure::trace_distance_pair(up, down);
    const auto sz_form = measure::trace_distance_sigma_z(up, cfg.delta);
    for (std::size_t k = 0; k < pair.size(); ++k) {
        CHECK(pair.d[k] == doctest::Approx(sz_form.from_sigma_y.d[k]).epsilon(1e-12));
        CHECK(pair.d[k] <= 1.0 + 1e-8);
    }
}

TEST_CASE("propagation metadata") {
    const auto traj = propagate(make_model(0.1, 20.0, 4, 24.0), {2, std::nullopt}, {0.01, 0.1, 20, 1e-10}, true);
    CHECK(traj.get_meta("solver") == "exact");
    CHECK(traj.get_meta("n_exc") == "2");
    CHECK(traj.get_meta("n_modes") == "4");
    CHECK(traj.size() == 11);
}

TEST_CASE("convergence scan") {
    const model::OhmicSpectralDensity free{0.0, 20.0};
    const model::OhmicSpectralDensity weak{0.1, 20.0};

    SUBCASE("tol = ∞ returns the first rung") {
        const std::vector<LadderRung> ladder{{8, 24.0, {1, std::nullopt}, 1e-2}, {8, 24.0, {2, std::nullopt}, 1e-2}};
        const auto rep = convergence_scan(1.0, weak, ladder, 2.0, std::numeric_limits<double>::infinity());
        CHECK(rep.converged);
        CHECK(rep.converged_rung == 0);
        CHECK(rep.rungs.size() == 1);
    }
    SUBCASE("zero coupling converges at the first rung") {
        const std::vector<LadderRung> ladder{{8, 0.0, {1, std::nullopt}, 1e-2}, {16, 0.0, {2, std::nullopt}, 1e-2}};
        const auto rep = convergence_scan(1.0, free, ladder, 2.0, 5e-3);
        CHECK(rep.converged);
        CHECK(rep.converged_rung == 0);
        CHECK(rep.rungs[1].deviation < 1e-10);
        CHECK(rep.rungs[0].rung.omega_max == doctest::Approx(120.0));
    }
    SUBCASE("weak coupling, N_exc = 1, 2, 3: deviations shrink") {
        std::vector<LadderRung> ladder;
        for (int n = 1; n <= 4; ++n) ladder.push_back({16, 16.0, {n, std::nullopt}, 1e-2});
        const auto rep = convergence_scan(1.0, weak, ladder, 6.0, 0.0);
        CHECK_FALSE(rep.converged);
        REQUIRE(rep.rungs.size() == 4);
        CHECK(rep.rungs[2].deviation < rep.rungs[1].deviation);
        CHECK(rep.rungs[3].deviation < rep.rungs[2].deviation);
        CHECK(rep.trajectory.size() == rep.rungs.back().trajectory.size());
        CHECK_FALSE(rep.summary().empty());
    }
    CHECK_THROWS_AS(convergence_scan(1.0, weak, {}, 1.0, 1e-3), ConfigError);
}

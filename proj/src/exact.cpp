// exact.cpp: Matrix-free Hamiltonian, Lanczos exponentiation and trajectory propagation

#include "sbnm/exact.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "sbnm/errors.hpp"
#include "sbnm/format.hpp"

namespace sbnm::exact {

// ----------------------------- Hamiltonian ---------------------------------

HamiltonianAction::HamiltonianAction(const model::ModelConfig& cfg, std::shared_ptr<const FockBasis> basis)
    : basis_(std::move(basis)), delta_(cfg.delta), zero_point_(0.0) {
    cfg.validate();
    const auto& modes = cfg.bath.modes;
    if (modes.size() != basis_->n_modes())
        throw ConfigError("hamiltonian: bath has " + std::to_string(modes.size()) + " modes, basis has " +
                          std::to_string(basis_->n_modes()));

    std::vector<double> g(modes.size());
    for (std::size_t j = 0; j < modes.size(); ++j) {
        if (!(modes[j].omega > 0.0)) throw ConfigError("hamiltonian: mode frequencies must be > 0");
        g[j] = modes[j].c / std::sqrt(2.0 * modes[j].omega);
        zero_point_ += 0.5 * modes[j].omega;
    }

    const std::size_t nb = basis_->size();
    bath_energy_.assign(nb, 0.0);
    edge_coef_.reserve(basis_->edge_count());
    std::vector<double> row_sum(nb, 0.0);
    for (std::size_t i = 1; i < nb; ++i) {
        for (const auto& e : basis_->edges(i)) {
            const double coef = g[e.mode] * e.sqrt_n;
            edge_coef_.push_back(coef);
            row_sum[i] += std::abs(coef);
            row_sum[e.parent] += std::abs(coef);
        }
        // Every configuration's energy follows from any one parent.
        const auto& first = basis_->edges(i).front();
        bath_energy_[i] = bath_energy_[first.parent] + modes[first.mode].omega;
    }
    for (std::size_t i = 0; i < nb; ++i)
        norm_bound_ = std::max(norm_bound_, std::abs(bath_energy_[i]) + std::abs(delta_) + row_sum[i]);
}

void HamiltonianAction::apply(Eigen::Ref<const Eigen::VectorXcd> in, Eigen::Ref<Eigen::VectorXcd> out) const {
    const std::size_t nb = basis_->size();
    const cplx* iu = in.data();
    const cplx* id = in.data() + nb;
    cplx* ou = out.data();
    cplx* od = out.data() + nb;
    for (std::size_t i = 0; i < nb; ++i) {
        const double e = bath_energy_[i];
        ou[i] = e * iu[i] + delta_ * id[i];
        od[i] = e * id[i] + delta_ * iu[i];
    }
    // σz ⊗ g(a + a†): +g on the ↑ block, −g on the ↓ block.
    std::size_t k = 0;
    for (std::size_t i = 1; i < nb; ++i) {
        for (const auto& e : basis_->edges(i)) {
            const double c = edge_coef_[k++];
            const std::size_t p = e.parent;
            ou[i] += c * iu[p];
            ou[p] += c * iu[i];
            od[i] -= c * id[p];
            od[p] -= c * id[i];
        }
    }
}

Eigen::VectorXcd HamiltonianAction::operator()(const Eigen::VectorXcd& in) const {
    Eigen::VectorXcd out(in.size());
    apply(in, out);
    return out;
}

double HamiltonianAction::expectation(const Eigen::VectorXcd& psi) const {
    const Eigen::VectorXcd hpsi = (*this)(psi);
    return psi.dot(hpsi).real() / psi.squaredNorm() + zero_point_;
}

Eigen::MatrixXcd HamiltonianAction::dense() const {
    const auto n = static_cast<Eigen::Index>(dimension());
    Eigen::MatrixXcd m(n, n);
    Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(n);
    Eigen::VectorXcd col(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        unit[j] = 1.0;
        apply(unit, col);
        m.col(j) = col;
        unit[j] = 0.0;
    }
    return m;
}

HamiltonianAction build_hamiltonian_action(const model::ModelConfig& cfg, const FockTruncation& trunc,
                                           std::size_t max_dimension) {
    cfg.validate();
    const std::size_t configs = count_configurations(cfg.bath.size(), trunc);
    const std::size_t dim = configs > std::numeric_limits<std::size_t>::max() / 2
                                ? std::numeric_limits<std::size_t>::max()
                                : 2 * configs;
    if (dim > max_dimension)
        throw ResourceError("hamiltonian: joint dimension " + std::to_string(dim) + " exceeds budget " +
                                std::to_string(max_dimension) + " (" + std::to_string(cfg.bath.size()) +
                                " modes, N_exc=" + std::to_string(trunc.max_total_excitations) + ")",
                            dim);
    auto basis = std::make_shared<const FockBasis>(cfg.bath.size(), trunc, max_dimension / 2);
    return HamiltonianAction(cfg, std::move(basis));
}

// ----------------------------- States ---------------------------------------

measure::BlochVector JointState::bloch() const {
    const auto nb = amplitudes.size() / 2;
    const auto up = amplitudes.head(nb);
    const auto dn = amplitudes.tail(nb);
    const cplx w = up.dot(dn);  // Σ conj(ψ↑) ψ↓
    return {2.0 * w.real(), 2.0 * w.imag(), up.squaredNorm() - dn.squaredNorm()};
}

JointState initial_state(bool spin_up, const std::shared_ptr<const FockBasis>& basis) {
    const auto nb = static_cast<Eigen::Index>(basis->size());
    JointState s{Eigen::VectorXcd::Zero(2 * nb), basis};
    s.amplitudes[spin_up ? 0 : nb] = 1.0;
    return s;
}

// ----------------------------- Krylov ---------------------------------------

KrylovSubspace::KrylovSubspace(const HamiltonianAction& h, const Eigen::VectorXcd& psi, int max_dim) {
    if (max_dim < 2) throw ConfigError("krylov: subspace dimension must be >= 2");
    const auto n = static_cast<Eigen::Index>(h.dimension());
    if (psi.size() != n) throw ShapeError("krylov: state dimension mismatch");
    const Eigen::Index m = std::min<Eigen::Index>(max_dim, n);

    start_norm_ = psi.norm();
    if (!std::isfinite(start_norm_)) throw NumericalError("krylov: non-finite amplitudes");
    basis_.resize(n, m);
    std::vector<double> a, b;
    if (start_norm_ == 0.0) {
        invariant_ = true;
        diag_ = Eigen::VectorXd::Zero(1);
        offdiag_.resize(0);
        basis_.col(0).setZero();
        eigvec_ = Eigen::MatrixXd::Identity(1, 1);
        eigval_ = Eigen::VectorXd::Zero(1);
        return;
    }

    basis_.col(0) = psi / start_norm_;
    Eigen::VectorXcd w(n);
    const double scale = std::max(1.0, h.norm_bound());
    for (Eigen::Index j = 0; j < m; ++j) {
        h.apply(basis_.col(j), w);
        const double aj = basis_.col(j).dot(w).real();
        a.push_back(aj);
        w -= aj * basis_.col(j);
        if (j > 0) w -= b.back() * basis_.col(j - 1);
        // No reorthogonalization: for m of a few tens the loss of orthogonality stays
        // below the step tolerance (checked against dense exponentials in the tests).
        const double bj = w.norm();
        if (!std::isfinite(bj)) throw NumericalError("krylov: non-finite Lanczos vector");
        if (bj <= 1e-13 * scale) {
            invariant_ = true;
            residual_ = 0.0;
            break;
        }
        if (j + 1 < m) {
            b.push_back(bj);
            basis_.col(j + 1) = w / bj;
        } else {
            residual_ = bj;
        }
    }
    if (static_cast<Eigen::Index>(a.size()) == n) {
        invariant_ = true;
        residual_ = 0.0;
    }

    const auto k = static_cast<Eigen::Index>(a.size());
    diag_ = Eigen::Map<const Eigen::VectorXd>(a.data(), k);
    offdiag_ = Eigen::Map<const Eigen::VectorXd>(b.data(), k - 1);
    if (k == 1) {
        eigvec_ = Eigen::MatrixXd::Identity(1, 1);
        eigval_ = diag_;
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(diag_, offdiag_, Eigen::ComputeEigenvectors);
        eigvec_ = es.eigenvectors();
        eigval_ = es.eigenvalues();
    }
}

Eigen::VectorXcd KrylovSubspace::coefficients(double tau) const {
    const auto k = eigval_.size();
    Eigen::VectorXcd phase(k);
    for (Eigen::Index i = 0; i < k; ++i)
        phase[i] = std::polar(start_norm_ * eigvec_(0, i), -eigval_[i] * tau);
    return eigvec_.cast<cplx>() * phase;
}

Eigen::VectorXcd KrylovSubspace::evolve(double tau) const {
    return basis_.leftCols(dimension()) * coefficients(tau);
}

double KrylovSubspace::error_estimate(double tau) const {
    if (invariant_) return 0.0;
    const Eigen::VectorXcd c = coefficients(tau);
    return residual_ * std::abs(c[c.size() - 1]);
}

namespace {

void check_finite(const Eigen::VectorXcd& v) {
    if (!std::isfinite(v.squaredNorm())) throw NumericalError("exact: non-finite amplitudes");
}

// exp(-iH·dt)ψ by repeated halving of the substep until the error estimate passes.
Eigen::VectorXcd advance(const HamiltonianAction& h, Eigen::VectorXcd psi, double dt, const KrylovOptions& opt,
                         PropagationStats* stats) {
    double done = 0.0;
    while (done < dt) {
        const KrylovSubspace ks(h, psi, opt.krylov_dim);
        if (stats) {
            ++stats->krylov_builds;
            stats->matvecs += static_cast<std::size_t>(ks.dimension());
        }
        double tau = dt - done;
        int halvings = 0;
        while (ks.error_estimate(tau) > opt.tol) {
            tau *= 0.5;
            if (++halvings > opt.max_halvings)
                throw NumericalError("krylov: step subdivision exhausted at t-offset " + std::to_string(done));
        }
        psi = ks.evolve(tau);
        check_finite(psi);
        done = (halvings == 0) ? dt : done + tau;
    }
    return psi;
}

} // namespace

JointState krylov_step(const HamiltonianAction& h, const JointState& psi, double dt, const KrylovOptions& opt) {
    if (dt < 0.0) throw ConfigError("krylov_step: dt must be >= 0");
    return {advance(h, psi.amplitudes, dt, opt, nullptr), psi.basis};
}

// ----------------------------- Propagation ----------------------------------

void PropagatorConfig::validate() const {
    if (!(dt > 0.0)) throw ConfigError("propagator: dt must be > 0");
    if (!(t_max >= dt)) throw ConfigError("propagator: t_max must be >= dt");
    if (krylov_dim < 2) throw ConfigError("propagator: krylov_dim must be >= 2");
    if (!(krylov_tol > 0.0)) throw ConfigError("propagator: krylov_tol must be > 0");
}

std::size_t PropagatorConfig::n_steps() const {
    return static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
}

measure::BlochTrajectory propagate(const HamiltonianAction& h, const PropagatorConfig& pcfg, bool spin_up,
                                   PropagationStats* stats) {
    pcfg.validate();
    const KrylovOptions opt{pcfg.krylov_dim, pcfg.krylov_tol, 40};
    const std::size_t n_steps = pcfg.n_steps();
    const double dt = pcfg.dt;
    const auto nb = static_cast<Eigen::Index>(h.bath_dimension());

    auto traj = measure::make_trajectory(dt);
    traj.reserve(n_steps + 1);
    JointState state = initial_state(spin_up, h.basis());
    traj.push_back(state.bloch());
    if (stats) stats->initial_energy = h.expectation(state.amplitudes);

    std::size_t k = 0;
    while (k < n_steps) {
        const KrylovSubspace ks(h, state.amplitudes, opt.krylov_dim);
        if (stats) {
            ++stats->krylov_builds;
            stats->matvecs += static_cast<std::size_t>(ks.dimension());
        }
        const std::size_t left = n_steps - k;
        auto ok = [&](std::size_t steps) { return ks.error_estimate(static_cast<double>(steps) * dt) <= opt.tol; };

        if (!ok(1)) {
            state.amplitudes = advance(h, state.amplitudes, dt, opt, stats);
            traj.push_back(state.bloch());
            ++k;
            continue;
        }
        // Grow the step from one grid interval; the estimate is only trusted
        // on the region reached by doubling from a passing step.
        std::size_t good = 1;
        while (good < left && ok(std::min(2 * good, left))) good = std::min(2 * good, left);
        std::size_t bad = std::min(2 * good, left);
        if (good < left && bad > good) {
            while (bad - good > 1) {
                const std::size_t mid = good + (bad - good) / 2;
                (ok(mid) ? good : bad) = mid;
            }
        }

        const Eigen::Index m = ks.dimension();
        const auto v = ks.vectors();
        if (static_cast<double>(good) > 1.5 * static_cast<double>(m)) {
            // Project σ operators once: S_uu = V↑†V↑, S_ud = V↑†V↓.
            Eigen::MatrixXcd suu = Eigen::MatrixXcd::Zero(m, m);
            suu.selfadjointView<Eigen::Lower>().rankUpdate(v.topRows(nb).adjoint());
            suu.triangularView<Eigen::StrictlyUpper>() = suu.adjoint();
            const Eigen::MatrixXcd sud = v.topRows(nb).adjoint() * v.bottomRows(nb);
            for (std::size_t j = 1; j <= good; ++j) {
                const Eigen::VectorXcd c = ks.coefficients(static_cast<double>(j) * dt);
                const double up = c.dot(suu * c).real();
                const cplx w = c.dot(sud * c);
                traj.push_back({2.0 * w.real(), 2.0 * w.imag(), 2.0 * up - c.squaredNorm()});
            }
        } else {
            JointState tmp{Eigen::VectorXcd(), h.basis()};
            for (std::size_t j = 1; j < good; ++j) {
                tmp.amplitudes.noalias() = v * ks.coefficients(static_cast<double>(j) * dt);
                traj.push_back(tmp.bloch());
            }
        }
        state.amplitudes = ks.evolve(static_cast<double>(good) * dt);
        check_finite(state.amplitudes);
        if (static_cast<double>(good) <= 1.5 * static_cast<double>(m)) traj.push_back(state.bloch());
        k += good;
    }

    if (stats) {
        stats->final_norm = state.norm();
        stats->final_energy = h.expectation(state.amplitudes);
    }
    return traj;
}

measure::BlochTrajectory propagate(const model::ModelConfig& cfg, const FockTruncation& trunc,
                                   const PropagatorConfig& pcfg, bool spin_up, std::size_t max_dimension) {
    const auto h = build_hamiltonian_action(cfg, trunc, max_dimension);
    auto traj = propagate(h, pcfg, spin_up);
    traj.set_meta("solver", "exact");
    traj.set_meta("initial_spin", spin_up ? "up" : "down");
    traj.set_meta("alpha", format_double(cfg.bath.source.alpha));
    traj.set_meta("omega_c", format_double(cfg.bath.source.omega_c));
    traj.set_meta("delta", format_double(cfg.delta));
    traj.set_meta("n_modes", std::to_string(cfg.bath.size()));
    traj.set_meta("omega_max", format_double(cfg.bath.omega_max));
    traj.set_meta("n_exc", std::to_string(trunc.max_total_excitations));
    traj.set_meta("dimension", std::to_string(h.dimension()));
    traj.set_meta("dt", format_double(pcfg.dt));
    traj.set_meta("krylov_dim", std::to_string(pcfg.krylov_dim));
    traj.set_meta("krylov_tol", format_double(pcfg.krylov_tol));
    return traj;
}

// ----------------------------- Convergence ladder ---------------------------

namespace {

// max |sz_a − sz_b| at the sample times of the coarser series, linearly
// interpolating the finer one (exact when the grids nest).
double sigma_z_deviation(const measure::BlochTrajectory& a, const measure::BlochTrajectory& b) {
    const auto& coarse = (a.dt >= b.dt) ? a : b;
    const auto& fine = (a.dt >= b.dt) ? b : a;
    double dev = 0.0;
    for (std::size_t k = 0; k < coarse.size(); ++k) {
        const double t = coarse.t[k];
        const double x = t / fine.dt;
        auto i = static_cast<std::size_t>(std::floor(x + 1e-9));
        if (i >= fine.size()) break;
        double v = fine.sz[i];
        const double frac = x - static_cast<double>(i);
        if (frac > 1e-9 && i + 1 < fine.size()) v += frac * (fine.sz[i + 1] - fine.sz[i]);
        dev = std::max(dev, std::abs(v - coarse.sz[k]));
    }
    return dev;
}

} // namespace

std::string ConvergenceReport::summary() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < rungs.size(); ++i) {
        const auto& r = rungs[i];
        os << "rung " << i << ": modes=" << r.rung.n_modes << " omega_max=" << r.rung.omega_max
           << " n_exc=" << r.rung.trunc.max_total_excitations << " dt=" << r.rung.dt << " dim=" << r.dimension
           << " deviation=" << format_double(r.deviation) << " seconds=" << r.seconds << "\n";
    }
    os << (converged ? "converged at rung " + std::to_string(converged_rung) : std::string("not converged")) << "\n";
    return os.str();
}

ConvergenceReport convergence_scan(double delta, const model::OhmicSpectralDensity& sd,
                                   const std::vector<LadderRung>& ladder, double t_max, double tol,
                                   const KrylovOptions& krylov, std::size_t max_dimension) {
    if (ladder.empty()) throw ConfigError("convergence_scan: ladder is empty");
    ConvergenceReport report;
    measure::BlochTrajectory previous;
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        LadderRung rung = ladder[i];
        if (rung.omega_max <= 0.0) rung.omega_max = model::default_omega_max_factor * sd.omega_c;
        const auto clock = std::chrono::steady_clock::now();
        model::ModelConfig cfg{delta, model::discretize_bath(sd, rung.n_modes, rung.omega_max)};
        const PropagatorConfig pcfg{rung.dt, t_max, krylov.krylov_dim, krylov.tol};
        auto traj = propagate(cfg, rung.trunc, pcfg, true, max_dimension);

        RungReport rr;
        rr.rung = rung;
        rr.dimension = 2 * count_configurations(rung.n_modes, rung.trunc);
        rr.deviation = (i == 0) ? 0.0 : sigma_z_deviation(previous, traj);
        rr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock).count();
        rr.trajectory = traj;
        report.rungs.push_back(rr);

        if (i == 0 && std::isinf(tol)) {
            report.converged = true;
            report.converged_rung = 0;
            report.trajectory = std::move(traj);
            return report;
        }
        if (i > 0 && rr.deviation < tol) {
            report.converged = true;
            report.converged_rung = static_cast<int>(i) - 1;
            report.trajectory = std::move(traj);
            return report;
        }
        previous = std::move(traj);
    }
    report.trajectory = std::move(previous);
    return report;
}

} // namespace sbnm::exact

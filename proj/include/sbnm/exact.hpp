// exact.hpp: Zero-temperature state-vector propagation of spin ⊗ truncated bath
//
// H = Δσx + Σ_n ω_n (a_n†a_n + 1/2) + σz Σ_n g_n (a_n + a_n†),  g_n = c_n/√(2ω_n)
//
// Joint amplitudes are laid out as [spin ↑ block | spin ↓ block], each block
// indexed by FockBasis. Propagation is by Lanczos exponentiation; observables
// are evaluated inside the Krylov subspace at every output time, so only the
// current wavefunction is ever stored.

#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sbnm/fock_basis.hpp"
#include "sbnm/model.hpp"
#include "sbnm/trajectory.hpp"

namespace sbnm::exact {

using cplx = std::complex<double>;

class HamiltonianAction {
public:
    HamiltonianAction(const model::ModelConfig& cfg, std::shared_ptr<const FockBasis> basis);

    std::size_t dimension() const noexcept { return 2 * basis_->size(); }
    std::size_t bath_dimension() const noexcept { return basis_->size(); }
    const std::shared_ptr<const FockBasis>& basis() const noexcept { return basis_; }
    double delta() const noexcept { return delta_; }

    // out = (H − E_0)·in with E_0 = Σ ω_n/2, the constant zero-point energy, left out so
    // the Lanczos coefficients stay O(spectral width). `in` and `out` must not alias.
    void apply(Eigen::Ref<const Eigen::VectorXcd> in, Eigen::Ref<Eigen::VectorXcd> out) const;
    Eigen::VectorXcd operator()(const Eigen::VectorXcd& in) const;

    double zero_point() const noexcept { return zero_point_; }

    // <ψ|H|ψ> / <ψ|ψ>, including E_0
    double expectation(const Eigen::VectorXcd& psi) const;

    // Explicit matrix of H − E_0, for small instances only.
    Eigen::MatrixXcd dense() const;

    // Gershgorin bound on the spectral radius.
    double norm_bound() const noexcept { return norm_bound_; }

private:
    std::shared_ptr<const FockBasis> basis_;
    double delta_;
    double zero_point_;
    std::vector<double> bath_energy_;  // Σ ω_j n_j per configuration
    std::vector<double> edge_coef_;    // g_mode √n per lowering edge
    double norm_bound_{0.0};
};

// Throws ResourceError when 2·|basis| exceeds max_dimension.
HamiltonianAction build_hamiltonian_action(const model::ModelConfig& cfg, const FockTruncation& trunc,
                                           std::size_t max_dimension = default_max_dimension);

struct JointState {
    Eigen::VectorXcd amplitudes;
    std::shared_ptr<const FockBasis> basis;

    double norm() const { return amplitudes.norm(); }
    measure::BlochVector bloch() const;
};

// Spin eigenstate of σz times the bath vacuum.
JointState initial_state(bool spin_up, const std::shared_ptr<const FockBasis>& basis);

// Orthonormal Lanczos basis V and tridiagonal projection T of H on span{ψ, Hψ, ...}.
class KrylovSubspace {
public:
    KrylovSubspace(const HamiltonianAction& h, const Eigen::VectorXcd& psi, int max_dim);

    int dimension() const noexcept { return static_cast<int>(diag_.size()); }
    bool exhausted() const noexcept { return invariant_; }
    auto vectors() const { return basis_.leftCols(dimension()); }

    // Subspace coordinates of exp(-iHτ)ψ.
    Eigen::VectorXcd coefficients(double tau) const;
    Eigen::VectorXcd evolve(double tau) const;
    // β_m |[exp(-iTτ)]_{m,1}| ‖ψ‖, the standard a posteriori estimate of the local error.
    double error_estimate(double tau) const;

private:
    Eigen::MatrixXcd basis_;
    Eigen::VectorXd diag_;
    Eigen::VectorXd offdiag_;
    double residual_{0.0};
    double start_norm_{0.0};
    bool invariant_{false};
    Eigen::MatrixXd eigvec_;
    Eigen::VectorXd eigval_;
};

struct KrylovOptions {
    int krylov_dim{20};
    double tol{1e-10};
    int max_halvings{40};
};

// exp(-iH·dt)ψ, subdividing dt until every substep meets the error tolerance.
JointState krylov_step(const HamiltonianAction& h, const JointState& psi, double dt, const KrylovOptions& opt);

struct PropagatorConfig {
    double dt{1e-3};
    double t_max{15.0};
    int krylov_dim{20};
    double krylov_tol{1e-10};

    void validate() const;
    std::size_t n_steps() const;
};

struct PropagationStats {
    std::size_t krylov_builds{0};
    std::size_t matvecs{0};
    double final_norm{1.0};
    double initial_energy{0.0};
    double final_energy{0.0};
};

measure::BlochTrajectory propagate(const HamiltonianAction& h, const PropagatorConfig& pcfg, bool spin_up,
                                   PropagationStats* stats = nullptr);

measure::BlochTrajectory propagate(const model::ModelConfig& cfg, const FockTruncation& trunc,
                                   const PropagatorConfig& pcfg, bool spin_up,
                                   std::size_t max_dimension = default_max_dimension);

struct LadderRung {
    std::size_t n_modes{100};
    double omega_max{0.0};  // 0 → default_omega_max_factor·ω_c
    FockTruncation trunc;
    double dt{1e-3};
};

struct RungReport {
    LadderRung rung;
    std::size_t dimension{0};
    double deviation{0.0};  // max_t |<σz>_i − <σz>_{i−1}| on common grid points; 0 for the first rung
    double seconds{0.0};
    measure::BlochTrajectory trajectory;
};

struct ConvergenceReport {
    std::vector<RungReport> rungs;
    bool converged{false};
    int converged_rung{-1};  // first rung whose successor agrees to tol
    measure::BlochTrajectory trajectory;
    std::string summary() const;
};

// Runs rungs in order and stops at the first pair agreeing to tol in <σz>.
// The finer trajectory of that pair is returned. With tol = ∞ the first rung is
// returned without further runs.
ConvergenceReport convergence_scan(double delta, const model::OhmicSpectralDensity& sd,
                                   const std::vector<LadderRung>& ladder, double t_max, double tol,
                                   const KrylovOptions& krylov = {},
                                   std::size_t max_dimension = default_max_dimension);

} // namespace sbnm::exact

#pragma once

// Brute-force truncated Fock-space realisation of one- and two-mode Gaussian states.
// Used only to cross-check the closed-form phase-space results.
//
// Conventions: a = (xi + i eta) / sqrt(2), so the vacuum has Var(xi) = 1/2 and a
// correlation matrix A corresponds to symmetrised second moments A / 2. A thermal
// one-mode state with parameter d has mean photon number (d - 1) / 2.
//
// Two-mode basis vectors |i, j> are stored at index i * (N + 1) + j.

#include "qf/common.hpp"
#include "qf/state.hpp"

#include <functional>
#include <optional>

namespace qf::oracle {

struct TruncatedOperator {
    int modes;   ///< 1 or 2
    int cutoff;  ///< N: photon numbers 0..N per mode
    CMatrix data;

    int dim() const { return static_cast<int>(data.rows()); }
};

/// Annihilation operator on 0..N.
CMatrix annihilation(int N);

TruncatedOperator vacuum_density(int modes, int N);

/// Thermal state with mean photon number (d - 1) / 2, renormalised on 0..N.
TruncatedOperator thermal_density(double d, int N);

/// exp((r/2)(a^dag^2 - a^2)): maps A -> S^T A S with S = diag(e^r, e^-r). |r| <= 2.
TruncatedOperator squeeze_unitary(double r, int N);

/// exp(alpha a^dag - alpha^* a), alpha = (v_xi + i v_eta) / sqrt(2). |alpha| <= 3.
TruncatedOperator displacement_unitary(Complex alpha, int N);

/// exp(i phi a^dag a): maps A -> R^T A R with R = [[cos, sin], [-sin, cos]](phi).
TruncatedOperator phase_rotation_unitary(double phi, int N);

/// exp(theta (a^dag b - a b^dag)) on two modes, (N+1)^2 <= 4096. Its covariance action
/// is the orthogonal symplectic matrix with X = [[cos, -sin], [sin, cos]](theta), Y = 0.
TruncatedOperator mode_mixer_unitary(double theta, int N);

/// Density matrix of a one- or two-mode state, assembled as thermal modes followed by
/// phase rotations, a mode mixer, single-mode squeezers, a second rotation/mixer stage
/// and a displacement.
TruncatedOperator density_from_state(const QuasifreeState& state, int N);

/// Re tr(rho1 rho2).
double overlap(const TruncatedOperator& rho1, const TruncatedOperator& rho2);

/// Imaginary part of tr(rho1 rho2); vanishes for Hermitian inputs.
double overlap_imaginary(const TruncatedOperator& rho1, const TruncatedOperator& rho2);

/// Trace over the other mode of a two-mode operator; keep is 1 or 2.
TruncatedOperator partial_trace(const TruncatedOperator& rho, int keep);

Complex trace(const TruncatedOperator& rho);

/// First moments and correlation matrix (twice the symmetrised covariance), in
/// (xi_1..xi_n, eta_1..eta_n) order, read off the truncated operator.
struct Moments {
    Vector mean;
    Matrix A;
};
Moments extract_moments(const TruncatedOperator& rho);

/// A quantity evaluated at cutoffs N and N + 10; value is set only when they agree.
struct CutoffCheck {
    double at_n;
    double at_n_plus;
    double delta;
    std::optional<double> value;
};
CutoffCheck at_cutoff_pair(const std::function<double(int)>& f, int N, double tol = 1e-6);

}  // namespace qf::oracle

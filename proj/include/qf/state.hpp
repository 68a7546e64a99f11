#pragma once

#include "qf/common.hpp"
#include "qf/symplectic.hpp"

#include <span>
#include <vector>

namespace qf {

/// Quasifree (Gaussian) state with characteristic function
///   omega(delta_u) = exp(-u^T A u / 4 + i u^T v).
///
/// Instances are immutable and always valid: A is symmetric positive definite and
/// every symplectic eigenvalue is >= 1 - tol at construction.
class QuasifreeState {
public:
    static QuasifreeState vacuum(PhaseSpaceDim n);

    PhaseSpaceDim dim() const { return dim_; }
    int modes() const { return dim_.modes(); }
    const Matrix& covariance() const { return A_; }
    const Vector& mean() const { return v_; }

private:
    QuasifreeState(Matrix A, Vector v) : dim_(PhaseSpaceDim::of(A)), A_(std::move(A)), v_(std::move(v)) {}
    friend QuasifreeState make_state(Matrix A, Vector v, double tol);

    PhaseSpaceDim dim_;
    Matrix A_;
    Vector v_;
};

/// Gaussian Wigner function W(u) = prefactor * exp(-(u - mean)^T G (u - mean)).
struct WignerGaussian {
    Matrix G;
    Vector mean;
    double prefactor;
};

struct ModeDecomposition {
    Vector d;  ///< one-mode thermal parameters, descending, each >= 1
    Matrix S;  ///< symplectic, A = S^T diag(d, d) S
};

/// Validates (A, v). Rejects asymmetric A, shape mismatches and Heisenberg
/// violations (smallest symplectic eigenvalue below 1 - tol).
QuasifreeState make_state(Matrix A, Vector v, double tol = kDefaultTol);

/// Centered state with correlation matrix A.
QuasifreeState make_state(Matrix A, double tol = kDefaultTol);

bool is_pure(const QuasifreeState& state, double tol = kDefaultTol);

Complex characteristic_fn(const QuasifreeState& state, const Vector& u);

/// G = -J A^{-1} J, prefactor pi^{-n} sqrt(det G). The Gaussian is centred at -J v,
/// the image of the mean under the symplectic Fourier transform.
WignerGaussian wigner(const QuasifreeState& state);

double wigner_eval(const QuasifreeState& state, const Vector& u);

/// omega o alpha_S: (S^T A S, S^T v).
QuasifreeState apply_bogoliubov(const QuasifreeState& state, const Matrix& S, double tol = kDefaultTol);

/// omega o tau_w: mean shifted by w.
QuasifreeState displace(const QuasifreeState& state, const Vector& w);

/// Product state on the direct-sum phase space; modes of s1 come first.
QuasifreeState tensor(const QuasifreeState& s1, const QuasifreeState& s2);

/// Marginal on the listed (0-based, strictly increasing) modes, computed as the
/// Schur complement of the Wigner matrix over the discarded block.
QuasifreeState reduce(const QuasifreeState& state, std::span<const int> keep);

/// Williamson mode decomposition of a centered state.
ModeDecomposition mode_decompose(const QuasifreeState& state);

/// Permutation taking phase-space coordinates to (kept xi, kept eta, dropped xi, dropped eta).
std::vector<int> mode_partition(int modes, std::span<const int> keep);

}  // namespace qf

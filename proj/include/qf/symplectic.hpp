#pragma once

// Dense real linear algebra on the phase space R^{2n}.
//
// Coordinates are ordered (xi_1..xi_n, eta_1..eta_n), so the symplectic form is
// J = [[0, I], [-I, 0]] and diagonal "per-mode" matrices are diag(D, D).

#include "qf/common.hpp"

#include <cstdint>

namespace qf {

struct SymplecticForm {
    PhaseSpaceDim dim;
    Matrix J;
};

/// A = S^T diag(d, d) S with S symplectic and d descending.
struct WilliamsonFactors {
    Matrix S;
    Vector d;
};

/// S = O diag(M, M^-1) Oprime with O, Oprime orthogonal symplectic and M_i >= 1 descending.
struct BdiFactors {
    Matrix O;
    Matrix Oprime;
    Vector M;
};

/// Blocks of the orthogonal symplectic matrix [[X, Y], [-Y, X]].
struct OrthoSymplecticXY {
    Matrix X;
    Matrix Y;
};

SymplecticForm standard_form(PhaseSpaceDim n);

/// Shorthand for standard_form(n).J.
Matrix form_matrix(int modes);

bool is_symplectic(const Matrix& S, double tol = kDefaultTol);
bool is_orthogonal(const Matrix& O, double tol = kDefaultTol);

/// Positive square roots of the eigenvalues of -(JA)^2, one per mode, descending.
Vector symplectic_eigenvalues(const Matrix& A);

WilliamsonFactors williamson(const Matrix& A, double tol = kDefaultTol);
Matrix recompose(const WilliamsonFactors& f);

BdiFactors bdi_decompose(const Matrix& S, double tol = kDefaultTol);
Matrix recompose(const BdiFactors& f);

Matrix ortho_symplectic_from_xy(const OrthoSymplecticXY& xy, double tol = kDefaultTol);

/// diag(e^r, e^-r).
Matrix single_mode_squeezer(double r);

/// Principal square root of a symmetric positive semidefinite matrix.
/// Eigenvalues in [-1e-12, 0) are clamped to zero; anything lower is rejected.
Matrix sqrt_spd(const Matrix& P);

/// exp(J H) for a seeded random symmetric H with entries uniform in [-1, 1].
Matrix random_symplectic(std::uint64_t seed, PhaseSpaceDim n);

/// exp(J H) for a given symmetric H.
Matrix symplectic_from_hamiltonian(const Matrix& H);

/// diag(d, d) for a vector of per-mode values.
Matrix mode_diagonal(const Vector& d);

/// Throws DomainError unless A is symmetric (within tol) and positive definite.
void require_spd(const Matrix& A, const char* what, double tol = kDefaultTol);

}  // namespace qf

#pragma once

// Purification of quasifree states on the doubled phase space E + E with the
// form Jtilde = diag(J, -J), and the entanglement measure built from it.

#include "qf/state.hpp"
#include "qf/symplectic.hpp"

namespace qf {

/// Pure state on the doubled phase space. Coordinates are
/// (xi, eta, xi~, eta~), each block of length n; the form is diag(J, -J).
class DoubledState {
public:
    int modes() const { return n_; }  ///< modes of the original system
    const Matrix& covariance() const { return Atilde_; }
    const Matrix& form() const { return Jtilde_; }

private:
    DoubledState(int n, Matrix Atilde, Matrix Jtilde) : n_(n), Atilde_(std::move(Atilde)), Jtilde_(std::move(Jtilde)) {}
    friend DoubledState make_doubled(Matrix Atilde, double tol);

    int n_;
    Matrix Atilde_;
    Matrix Jtilde_;
};

struct PurificationBogoliubov {
    Matrix Sbold;
    Matrix Dbold;
};

enum class Factor { First, Second };

/// diag(J, -J) for n original modes.
Matrix doubled_form(int modes);

/// Validates a 4n x 4n correlation matrix as a pure state w.r.t. diag(J, -J).
DoubledState make_doubled(Matrix Atilde, double tol = 1e-8);

/// [[A, V], [V, A]] with V = S^T diag(sqrt(D^2 - I), sqrt(D^2 - I)) S from A = S^T diag(D, D) S.
DoubledState purify(const QuasifreeState& state);

/// Marginal of the doubled state on one factor (Schur complement of the Wigner matrix).
QuasifreeState reduce_purification(const DoubledState& dstate, Factor which);

/// det(3/4 D^2 + 1/4 I)^{-1}: transition probability between the purification and
/// the uncorrelated product of the system with its twin.
double entanglement_measure(const QuasifreeState& state);

/// The same product evaluated on given thermal parameters d_i >= 1.
double entanglement_from_spectrum(const Vector& d);

/// The same quantity evaluated through the generic transition-probability formula on
/// the explicit 4n x 4n matrices.
double entanglement_by_transition(const QuasifreeState& state);

/// Bogoliubov map S with S^T S = Dbold taking the doubled vacuum to the purification
/// of diag(d, d); blocks sqrt((D + I)/2) on the diagonal and sqrt((D - I)/2) off it.
PurificationBogoliubov purification_bogoliubov(const Vector& d, double tol = 1e-10);

/// det((I + S diag(D, D, D, D) S^T) / 2)^{-1/2} for the map above.
double bogoliubov_transition(const PurificationBogoliubov& pb, const Vector& d);

/// Re-expresses a doubled-space matrix in the standard 2n-mode convention: the twin's
/// eta block changes sign and coordinates are ordered (xi, xi~, eta, eta~).
Matrix doubled_to_standard(const Matrix& M);
QuasifreeState to_standard_form(const DoubledState& dstate);

}  // namespace qf

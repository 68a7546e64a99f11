#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace qf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Default tolerance for membership checks (symplectic, orthogonal, validity).
inline constexpr double kDefaultTol = 1e-9;

/// Raised when matrix or vector shapes do not fit the phase space.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when inputs are well-formed but violate a mathematical precondition
/// (non-SPD matrix, Heisenberg violation, mixed-mixed fidelity, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Number of modes n of a 2n-dimensional phase space.
class PhaseSpaceDim {
public:
    explicit PhaseSpaceDim(int modes) : modes_(modes) {
        if (modes < 1) {
            throw DimensionError("phase space needs at least one mode, got " + std::to_string(modes));
        }
    }

    int modes() const { return modes_; }
    int dim() const { return 2 * modes_; }

    /// Modes of a square 2n x 2n matrix; throws for odd or non-square input.
    static PhaseSpaceDim of(const Matrix& m) {
        if (m.rows() != m.cols()) {
            throw DimensionError("expected a square matrix, got " + std::to_string(m.rows()) + "x" +
                                 std::to_string(m.cols()));
        }
        if (m.rows() == 0 || m.rows() % 2 != 0) {
            throw DimensionError("phase-space matrices have even positive dimension, got " +
                                 std::to_string(m.rows()));
        }
        return PhaseSpaceDim(static_cast<int>(m.rows() / 2));
    }

    friend bool operator==(PhaseSpaceDim a, PhaseSpaceDim b) { return a.modes_ == b.modes_; }

private:
    int modes_;
};

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace qf

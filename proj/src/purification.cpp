#include "qf/purification.hpp"

#include "qf/transition.hpp"

#include <cmath>
#include <string>

namespace qf {

Matrix doubled_form(int modes) {
    const Matrix J = form_matrix(modes);
    Matrix Jt = Matrix::Zero(4 * modes, 4 * modes);
    Jt.topLeftCorner(2 * modes, 2 * modes) = J;
    Jt.bottomRightCorner(2 * modes, 2 * modes) = -J;
    return Jt;
}

DoubledState make_doubled(Matrix Atilde, double tol) {
    if (Atilde.rows() != Atilde.cols() || Atilde.rows() == 0 || Atilde.rows() % 4 != 0) {
        throw DimensionError("doubled correlation matrix must be 4n x 4n");
    }
    const int n = static_cast<int>(Atilde.rows() / 4);
    require_spd(Atilde, "doubled correlation matrix");
    Atilde = 0.5 * (Atilde + Atilde.transpose()).eval();
    Matrix Jt = doubled_form(n);
    const Matrix JA = Jt * Atilde;
    const double scale = std::max(1.0, max_abs(Atilde));
    if (max_abs(JA * JA + Matrix::Identity(4 * n, 4 * n)) > tol * scale * scale) {
        throw DomainError("doubled state is not pure with respect to diag(J, -J)");
    }
    return DoubledState(n, std::move(Atilde), std::move(Jt));
}

DoubledState purify(const QuasifreeState& state) {
    if (state.mean().cwiseAbs().maxCoeff() != 0.0) {
        throw DomainError("purification is defined for centered states");
    }
    const int n = state.modes();
    const WilliamsonFactors w = williamson(state.covariance());
    const Vector root = (w.d.array().square() - 1.0).max(0.0).sqrt();
    Matrix V = w.S.transpose() * mode_diagonal(root) * w.S;
    V = 0.5 * (V + V.transpose()).eval();

    Matrix At(4 * n, 4 * n);
    At << state.covariance(), V, V, state.covariance();
    return make_doubled(std::move(At));
}

QuasifreeState reduce_purification(const DoubledState& dstate, Factor which) {
    const int n = dstate.modes();
    const int h = 2 * n;
    const Matrix& Jt = dstate.form();
    const Matrix G = -Jt * dstate.covariance().inverse() * Jt;
    const int keep = which == Factor::First ? 0 : h;
    const int drop = h - keep;
    const Matrix U = G.block(keep, keep, h, h);
    const Matrix B = G.block(keep, drop, h, h);
    const Matrix C = G.block(drop, drop, h, h);
    if (std::abs(C.determinant()) < 1e-12) {
        throw DomainError("diagonal block of the doubled Wigner matrix is singular");
    }
    Matrix G1 = U - B * C.partialPivLu().solve(B.transpose());
    G1 = 0.5 * (G1 + G1.transpose()).eval();
    // the twin carries -J, and -(-J) X (-J) = -J X J, so both factors map back alike
    const Matrix J = form_matrix(n);
    Matrix A = -J * G1.inverse() * J;
    A = 0.5 * (A + A.transpose()).eval();
    return make_state(std::move(A), 1e-8);
}

double entanglement_measure(const QuasifreeState& state) {
    if (state.mean().cwiseAbs().maxCoeff() != 0.0) {
        throw DomainError("entanglement measure is defined for centered states");
    }
    return entanglement_from_spectrum(symplectic_eigenvalues(state.covariance()).cwiseMax(1.0));
}

double entanglement_from_spectrum(const Vector& d) {
    if (d.size() == 0) {
        throw DimensionError("at least one thermal parameter expected");
    }
    if (!d.allFinite() || d.minCoeff() < 1.0) {
        throw DomainError("thermal parameters must be finite and >= 1");
    }
    double p = 1.0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        p /= 0.75 * d(i) * d(i) + 0.25;
    }
    return p;
}

double entanglement_by_transition(const QuasifreeState& state) {
    const DoubledState pure = purify(state);
    const int n = state.modes();
    Matrix product = Matrix::Zero(4 * n, 4 * n);
    product.topLeftCorner(2 * n, 2 * n) = state.covariance();
    product.bottomRightCorner(2 * n, 2 * n) = state.covariance();
    return transition_probability(make_state(doubled_to_standard(product)), to_standard_form(pure));
}

PurificationBogoliubov purification_bogoliubov(const Vector& d, double tol) {
    if (d.size() == 0) {
        throw DimensionError("at least one thermal parameter expected");
    }
    if (!d.allFinite() || d.minCoeff() < 1.0) {
        throw DomainError("thermal parameters must be finite and >= 1");
    }
    const int n = static_cast<int>(d.size());
    const int h = 2 * n;
    const Matrix diag_block = mode_diagonal(((d.array() + 1.0) / 2.0).sqrt().matrix());
    const Matrix off_block = mode_diagonal(((d.array() - 1.0) / 2.0).sqrt().matrix());
    PurificationBogoliubov pb;
    pb.Sbold.resize(2 * h, 2 * h);
    pb.Sbold << diag_block, off_block, off_block, diag_block;
    pb.Dbold.resize(2 * h, 2 * h);
    pb.Dbold << mode_diagonal(d), mode_diagonal((d.array().square() - 1.0).sqrt().matrix()),
        mode_diagonal((d.array().square() - 1.0).sqrt().matrix()), mode_diagonal(d);

    const Matrix Jt = doubled_form(n);
    const double scale = std::max(1.0, d.maxCoeff());
    if (max_abs(pb.Sbold.transpose() * Jt * pb.Sbold - Jt) > tol * scale) {
        throw DomainError("purifying Bogoliubov map failed the symplectic check");
    }
    if (max_abs(pb.Sbold.transpose() * pb.Sbold - pb.Dbold) > tol * scale) {
        throw DomainError("purifying Bogoliubov map does not reproduce its target correlation matrix");
    }
    return pb;
}

double bogoliubov_transition(const PurificationBogoliubov& pb, const Vector& d) {
    const Eigen::Index m = pb.Sbold.rows();
    if (m != 4 * d.size()) {
        throw DimensionError("thermal parameters do not match the Bogoliubov map");
    }
    Vector diag(m);
    diag << d, d, d, d;
    const Matrix mid = 0.5 * (Matrix::Identity(m, m) + pb.Sbold * diag.asDiagonal() * pb.Sbold.transpose());
    return 1.0 / std::sqrt(mid.determinant());
}

Matrix doubled_to_standard(const Matrix& M) {
    if (M.rows() != M.cols() || M.rows() == 0 || M.rows() % 4 != 0) {
        throw DimensionError("doubled matrices are 4n x 4n");
    }
    const int n = static_cast<int>(M.rows() / 4);
    std::vector<int> src(4 * n);
    Vector sign = Vector::Ones(4 * n);
    for (int k = 0; k < n; ++k) {
        src[k] = k;                  // xi
        src[n + k] = 2 * n + k;      // xi~
        src[2 * n + k] = n + k;      // eta
        src[3 * n + k] = 3 * n + k;  // eta~
        sign(3 * n + k) = -1.0;
    }
    Matrix out(4 * n, 4 * n);
    for (int i = 0; i < 4 * n; ++i) {
        for (int j = 0; j < 4 * n; ++j) {
            out(i, j) = sign(i) * sign(j) * M(src[i], src[j]);
        }
    }
    return out;
}

QuasifreeState to_standard_form(const DoubledState& dstate) {
    return make_state(doubled_to_standard(dstate.covariance()), 1e-8);
}

}  // namespace qf

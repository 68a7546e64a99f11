#include "qf/state.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace qf {

namespace {

void require_length(const Vector& v, PhaseSpaceDim n, const char* what) {
    if (v.size() != n.dim()) {
        throw DimensionError(std::string(what) + " has length " + std::to_string(v.size()) + ", expected " +
                             std::to_string(n.dim()));
    }
}

Matrix permute(const Matrix& m, const std::vector<int>& p) {
    Matrix out(p.size(), p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = 0; j < p.size(); ++j) {
            out(i, j) = m(p[i], p[j]);
        }
    }
    return out;
}

}  // namespace

QuasifreeState QuasifreeState::vacuum(PhaseSpaceDim n) {
    return QuasifreeState(Matrix::Identity(n.dim(), n.dim()), Vector::Zero(n.dim()));
}

QuasifreeState make_state(Matrix A, Vector v, double tol) {
    const auto n = PhaseSpaceDim::of(A);
    require_length(v, n, "mean vector");
    if (!v.allFinite()) {
        throw DomainError("mean vector has non-finite entries");
    }
    require_spd(A, "correlation matrix", tol);
    A = 0.5 * (A + A.transpose()).eval();
    const Vector d = symplectic_eigenvalues(A);
    if (d.minCoeff() < 1.0 - tol) {
        throw DomainError("uncertainty relation violated: smallest symplectic eigenvalue " +
                          std::to_string(d.minCoeff()) + " < 1");
    }
    return QuasifreeState(std::move(A), std::move(v));
}

QuasifreeState make_state(Matrix A, double tol) {
    const auto n = PhaseSpaceDim::of(A);
    return make_state(std::move(A), Vector::Zero(n.dim()), tol);
}

bool is_pure(const QuasifreeState& state, double tol) {
    const Matrix JA = form_matrix(state.modes()) * state.covariance();
    return max_abs(JA * JA + Matrix::Identity(JA.rows(), JA.cols())) <= tol;
}

Complex characteristic_fn(const QuasifreeState& state, const Vector& u) {
    require_length(u, state.dim(), "argument");
    const double quad = u.dot(state.covariance() * u);
    return std::exp(Complex(-quad / 4.0, u.dot(state.mean())));
}

WignerGaussian wigner(const QuasifreeState& state) {
    const Matrix J = form_matrix(state.modes());
    Eigen::LLT<Matrix> llt(state.covariance());
    if (llt.info() != Eigen::Success) {
        throw DomainError("correlation matrix is singular");
    }
    const Matrix Ainv = llt.solve(Matrix::Identity(state.dim().dim(), state.dim().dim()));
    Matrix G = -J * Ainv * J;
    G = 0.5 * (G + G.transpose()).eval();
    const double prefactor = std::pow(std::numbers::pi, -state.modes()) * std::sqrt(G.determinant());
    return {std::move(G), -J * state.mean(), prefactor};
}

double wigner_eval(const QuasifreeState& state, const Vector& u) {
    require_length(u, state.dim(), "phase-space point");
    const WignerGaussian w = wigner(state);
    const Vector x = u - w.mean;
    return w.prefactor * std::exp(-x.dot(w.G * x));
}

QuasifreeState apply_bogoliubov(const QuasifreeState& state, const Matrix& S, double tol) {
    if (PhaseSpaceDim::of(S).modes() != state.modes()) {
        throw DimensionError("Bogoliubov matrix does not match the state's phase space");
    }
    if (!is_symplectic(S, tol)) {
        throw DomainError("Bogoliubov transformation needs a symplectic matrix");
    }
    Matrix A = S.transpose() * state.covariance() * S;
    A = 0.5 * (A + A.transpose()).eval();
    return make_state(std::move(A), S.transpose() * state.mean(), std::max(tol, 1e-8));
}

QuasifreeState displace(const QuasifreeState& state, const Vector& w) {
    require_length(w, state.dim(), "displacement");
    return make_state(state.covariance(), state.mean() + w);
}

QuasifreeState tensor(const QuasifreeState& s1, const QuasifreeState& s2) {
    const int n1 = s1.modes();
    const int n2 = s2.modes();
    const int n = n1 + n2;
    // global index of each factor's local coordinate
    auto place1 = [&](int i) { return i < n1 ? i : n + (i - n1); };
    auto place2 = [&](int i) { return i < n2 ? n1 + i : n + n1 + (i - n2); };

    Matrix A = Matrix::Zero(2 * n, 2 * n);
    Vector v = Vector::Zero(2 * n);
    for (int i = 0; i < 2 * n1; ++i) {
        v(place1(i)) = s1.mean()(i);
        for (int j = 0; j < 2 * n1; ++j) A(place1(i), place1(j)) = s1.covariance()(i, j);
    }
    for (int i = 0; i < 2 * n2; ++i) {
        v(place2(i)) = s2.mean()(i);
        for (int j = 0; j < 2 * n2; ++j) A(place2(i), place2(j)) = s2.covariance()(i, j);
    }
    return make_state(std::move(A), std::move(v));
}

std::vector<int> mode_partition(int modes, std::span<const int> keep) {
    std::vector<bool> kept(modes, false);
    int prev = -1;
    for (int k : keep) {
        if (k < 0 || k >= modes) {
            throw DimensionError("mode index " + std::to_string(k) + " out of range");
        }
        if (k <= prev) {
            throw DimensionError("kept modes must be strictly increasing");
        }
        kept[k] = true;
        prev = k;
    }
    std::vector<int> order;
    for (int k : keep) order.push_back(k);
    for (int k : keep) order.push_back(modes + k);
    for (int k = 0; k < modes; ++k)
        if (!kept[k]) order.push_back(k);
    for (int k = 0; k < modes; ++k)
        if (!kept[k]) order.push_back(modes + k);
    return order;
}

QuasifreeState reduce(const QuasifreeState& state, std::span<const int> keep) {
    if (keep.empty()) {
        throw DimensionError("reduce needs at least one kept mode");
    }
    const int n = state.modes();
    const int k = static_cast<int>(keep.size());
    const std::vector<int> order = mode_partition(n, keep);
    if (k == n) {
        return state;
    }

    const Matrix G = permute(wigner(state).G, order);
    const int kd = 2 * k;
    const int dd = 2 * (n - k);
    const Matrix Gkk = G.topLeftCorner(kd, kd);
    const Matrix B = G.topRightCorner(kd, dd);
    const Matrix C = G.bottomRightCorner(dd, dd);
    if (std::abs(C.determinant()) < 1e-12) {
        throw DomainError("discarded block of the Wigner matrix is singular");
    }
    Matrix G1 = Gkk - B * C.partialPivLu().solve(B.transpose());
    G1 = 0.5 * (G1 + G1.transpose()).eval();

    const Matrix J1 = form_matrix(k);
    Matrix A1 = -J1 * G1.inverse() * J1;
    A1 = 0.5 * (A1 + A1.transpose()).eval();
    Vector v1(kd);
    for (int i = 0; i < kd; ++i) v1(i) = state.mean()(order[i]);
    return make_state(std::move(A1), std::move(v1), 1e-8);
}

ModeDecomposition mode_decompose(const QuasifreeState& state) {
    if (state.mean().cwiseAbs().maxCoeff() != 0.0) {
        throw DomainError("mode decomposition is defined for centered states only");
    }
    WilliamsonFactors w = williamson(state.covariance());
    return {std::move(w.d), std::move(w.S)};
}

}  // namespace qf

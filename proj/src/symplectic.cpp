#include "qf/symplectic.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace qf {

namespace {

// Scale used to turn absolute tolerances into relative ones for badly scaled input.
double scale_of(const Matrix& m) { return std::max(1.0, max_abs(m)); }

// Orthogonal R with R^T W R = [[0, D], [-D, 0]], D > 0 descending, for a
// nondegenerate antisymmetric W. The positive eigenvectors z = (x + i y)/sqrt(2)
// of the Hermitian matrix iW give an orthonormal real basis {x_j, -y_j}.
struct CanonicalPairing {
    Matrix R;
    Vector D;
};

CanonicalPairing canonical_pairing(const Matrix& W) {
    const Eigen::Index m = W.rows();
    const Eigen::Index k = m / 2;
    const CMatrix H = Complex(0.0, 1.0) * W.cast<Complex>();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
    if (es.info() != Eigen::Success) {
        throw DomainError("eigen-decomposition of the antisymmetric form failed");
    }
    CanonicalPairing out{Matrix(m, m), Vector(k)};
    for (Eigen::Index j = 0; j < k; ++j) {
        const Eigen::Index src = m - 1 - j;  // eigenvalues ascending; take positives from the top
        const CVector z = es.eigenvectors().col(src);
        out.D(j) = es.eigenvalues()(src);
        out.R.col(j) = std::sqrt(2.0) * z.real();
        out.R.col(k + j) = -std::sqrt(2.0) * z.imag();
    }
    if (k > 0 && out.D(k - 1) <= 0.0) {
        throw DomainError("antisymmetric form is degenerate");
    }
    return out;
}

}  // namespace

SymplecticForm standard_form(PhaseSpaceDim n) { return {n, form_matrix(n.modes())}; }

Matrix form_matrix(int modes) {
    const PhaseSpaceDim n(modes);
    Matrix J = Matrix::Zero(n.dim(), n.dim());
    J.topRightCorner(modes, modes).setIdentity();
    J.bottomLeftCorner(modes, modes) = -Matrix::Identity(modes, modes);
    return J;
}

bool is_symplectic(const Matrix& S, double tol) {
    const auto n = PhaseSpaceDim::of(S);
    const Matrix J = form_matrix(n.modes());
    return max_abs(S.transpose() * J * S - J) <= tol;
}

bool is_orthogonal(const Matrix& O, double tol) {
    if (O.rows() != O.cols()) {
        throw DimensionError("orthogonality check needs a square matrix");
    }
    return max_abs(O.transpose() * O - Matrix::Identity(O.rows(), O.cols())) <= tol;
}

void require_spd(const Matrix& A, const char* what, double tol) {
    PhaseSpaceDim::of(A);
    if (!A.allFinite()) {
        throw DomainError(std::string(what) + " has non-finite entries");
    }
    if (max_abs(A - A.transpose()) > tol * scale_of(A)) {
        throw DomainError(std::string(what) + " is not symmetric");
    }
    Eigen::LLT<Matrix> llt(A);
    if (llt.info() != Eigen::Success) {
        throw DomainError(std::string(what) + " is not positive definite");
    }
}

Vector symplectic_eigenvalues(const Matrix& A) {
    require_spd(A, "correlation matrix");
    const auto n = PhaseSpaceDim::of(A);
    const Matrix K = sqrt_spd(A);
    const Matrix W = K * form_matrix(n.modes()) * K;
    return canonical_pairing(W).D;
}

WilliamsonFactors williamson(const Matrix& A, double tol) {
    require_spd(A, "correlation matrix", tol);
    const auto n = PhaseSpaceDim::of(A);
    const Matrix J = form_matrix(n.modes());
    const Matrix K = sqrt_spd(A);
    const CanonicalPairing cp = canonical_pairing(K * J * K);

    // S = Delta^{-1/2} R^T K: then S^T Delta S = K^2 = A and S J S^T = J.
    Vector inv_sqrt(n.dim());
    inv_sqrt << cp.D.cwiseSqrt().cwiseInverse(), cp.D.cwiseSqrt().cwiseInverse();
    WilliamsonFactors f{inv_sqrt.asDiagonal() * cp.R.transpose() * K, cp.D};

    const double residual = max_abs(recompose(f) - A);
    if (residual > tol * scale_of(A)) {
        throw DomainError("Williamson factorisation residual " + std::to_string(residual) +
                          " exceeds tolerance (ill-conditioned input)");
    }
    if (max_abs(f.S.transpose() * J * f.S - J) > tol * scale_of(f.S) * scale_of(f.S)) {
        throw DomainError("Williamson factor is not symplectic within tolerance (ill-conditioned input)");
    }
    return f;
}

Matrix recompose(const WilliamsonFactors& f) {
    return f.S.transpose() * mode_diagonal(f.d) * f.S;
}

BdiFactors bdi_decompose(const Matrix& S, double tol) {
    const auto n = PhaseSpaceDim::of(S);
    const int k = n.modes();
    const Matrix J = form_matrix(k);
    if (max_abs(S.transpose() * J * S - J) > tol * scale_of(S) * scale_of(S)) {
        throw DomainError("BDI decomposition needs a symplectic matrix");
    }

    // Eigenvalues of S S^T come in pairs (mu, 1/mu). Eigenvectors x of the large ones,
    // together with J^T x, span an orthogonal symplectic basis.
    Eigen::SelfAdjointEigenSolver<Matrix> es(S * S.transpose());
    if (es.info() != Eigen::Success) {
        throw DomainError("eigen-decomposition of S S^T failed");
    }
    const Vector& mu = es.eigenvalues();
    const Matrix& V = es.eigenvectors();

    // Pairs with |log mu| below this threshold are treated as unsqueezed and
    // resolved inside their common (J-invariant) eigenspace.
    constexpr double kCluster = 2e-8;
    Matrix X(n.dim(), k);
    int chosen = 0;
    for (Eigen::Index i = n.dim() - 1; i >= 0 && chosen < k; --i) {
        if (std::log(mu(i)) <= kCluster) break;
        X.col(chosen++) = V.col(i);
    }
    const int remaining = k - chosen;
    if (remaining > 0) {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index i = 0; i < n.dim(); ++i) {
            if (std::abs(std::log(mu(i))) <= kCluster) idx.push_back(i);
        }
        if (static_cast<int>(idx.size()) != 2 * remaining) {
            throw DomainError("symplectic spectrum does not pair up (ill-conditioned input)");
        }
        Matrix E(n.dim(), 2 * remaining);
        for (int c = 0; c < 2 * remaining; ++c) E.col(c) = V.col(idx[c]);
        const CanonicalPairing cp = canonical_pairing(E.transpose() * J * E);
        X.rightCols(remaining) = E * cp.R.leftCols(remaining);
    }

    BdiFactors f;
    f.O.resize(n.dim(), n.dim());
    f.O.leftCols(k) = X;
    f.O.rightCols(k) = J.transpose() * X;
    f.M.resize(k);
    for (int j = 0; j < k; ++j) {
        const double rq = X.col(j).dot(S * (S.transpose() * X.col(j)));
        f.M(j) = std::max(1.0, std::sqrt(rq));
    }
    Vector inv_sigma(n.dim());
    inv_sigma << f.M.cwiseInverse(), f.M;
    f.Oprime = inv_sigma.asDiagonal() * f.O.transpose() * S;

    const double residual = max_abs(recompose(f) - S);
    if (residual > tol * scale_of(S)) {
        throw DomainError("BDI recomposition residual " + std::to_string(residual) + " exceeds tolerance");
    }
    return f;
}

Matrix recompose(const BdiFactors& f) {
    Vector sigma(2 * f.M.size());
    sigma << f.M, f.M.cwiseInverse();
    return f.O * sigma.asDiagonal() * f.Oprime;
}

Matrix ortho_symplectic_from_xy(const OrthoSymplecticXY& xy, double tol) {
    const Eigen::Index k = xy.X.rows();
    if (k == 0 || xy.X.cols() != k || xy.Y.rows() != k || xy.Y.cols() != k) {
        throw DimensionError("X and Y must be square n x n blocks of equal size");
    }
    const Matrix I = Matrix::Identity(k, k);
    if (max_abs(xy.X.transpose() * xy.X + xy.Y.transpose() * xy.Y - I) > tol) {
        throw DomainError("X^T X + Y^T Y != I");
    }
    if (max_abs(xy.X.transpose() * xy.Y - xy.Y.transpose() * xy.X) > tol) {
        throw DomainError("X^T Y is not symmetric");
    }
    Matrix O(2 * k, 2 * k);
    O << xy.X, xy.Y, -xy.Y, xy.X;
    return O;
}

Matrix single_mode_squeezer(double r) {
    Matrix S = Matrix::Zero(2, 2);
    S(0, 0) = std::exp(r);
    S(1, 1) = std::exp(-r);
    return S;
}

Matrix sqrt_spd(const Matrix& P) {
    if (P.rows() != P.cols()) {
        throw DimensionError("square root needs a square matrix");
    }
    if (!P.allFinite()) {
        throw DomainError("square root of a matrix with non-finite entries");
    }
    if (max_abs(P - P.transpose()) > kDefaultTol * scale_of(P)) {
        throw DomainError("square root needs a symmetric matrix");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (P + P.transpose()));
    Vector lambda = es.eigenvalues();
    if (lambda.size() > 0 && lambda.minCoeff() < -1e-12) {
        throw DomainError("square root of a matrix with negative eigenvalue " + std::to_string(lambda.minCoeff()));
    }
    lambda = lambda.cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * lambda.asDiagonal() * es.eigenvectors().transpose();
}

Matrix symplectic_from_hamiltonian(const Matrix& H) {
    const auto n = PhaseSpaceDim::of(H);
    if (max_abs(H - H.transpose()) > 0.0) {
        throw DomainError("generator must be symmetric");
    }
    const Matrix JH = form_matrix(n.modes()) * H;
    return JH.exp();
}

Matrix random_symplectic(std::uint64_t seed, PhaseSpaceDim n) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Matrix H(n.dim(), n.dim());
    for (int i = 0; i < n.dim(); ++i) {
        for (int j = i; j < n.dim(); ++j) {
            H(i, j) = H(j, i) = uni(gen);
        }
    }
    return symplectic_from_hamiltonian(H);
}

Matrix mode_diagonal(const Vector& d) {
    Vector full(2 * d.size());
    full << d, d;
    return full.asDiagonal();
}

}  // namespace qf

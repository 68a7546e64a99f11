#include "qf/transition.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace qf {

double purity_defect(const QuasifreeState& state) {
    return (symplectic_eigenvalues(state.covariance()).array() - 1.0).abs().maxCoeff();
}

double transition_probability(const QuasifreeState& s1, const QuasifreeState& s2, double tol) {
    if (s1.modes() != s2.modes()) {
        throw DimensionError("states live on different phase spaces");
    }
    if (purity_defect(s1) > tol && purity_defect(s2) > tol) {
        throw DomainError("transition probability formula requires a pure state; both inputs are mixed");
    }
    const Matrix sum = s1.covariance() + s2.covariance();
    const Vector dv = s2.mean() - s1.mean();
    Eigen::LLT<Matrix> llt(sum);
    const Matrix L = llt.matrixL();
    // det((A+B)/2) = det(A+B) / 2^{2n}
    const double log_det_half = 2.0 * L.diagonal().array().log().sum() - sum.rows() * std::log(2.0);
    const double quad = dv.dot(llt.solve(dv));
    return std::exp(-0.5 * log_det_half - quad);
}

double fidelity_to_vacuum(const QuasifreeState& state) {
    return transition_probability(state, QuasifreeState::vacuum(state.dim()));
}

QuadratureResult overlap_quadrature(const QuasifreeState& s1, const QuasifreeState& s2, const QuadratureSpec& spec) {
    if (s1.modes() != s2.modes()) {
        throw DimensionError("states live on different phase spaces");
    }
    if (s1.modes() > 2) {
        throw DomainError("quadrature is limited to n <= 2 modes");
    }
    const int dim = s1.dim().dim();
    // integrand: exp(-u^T K u / 2) * cos(u . c); the odd imaginary part vanishes on a symmetric grid
    const Matrix K = 0.5 * (s1.covariance() + s2.covariance());
    const Vector c = s2.mean() - s1.mean();
    Eigen::SelfAdjointEigenSolver<Matrix> es(K);
    const double lambda_min = es.eigenvalues().minCoeff();
    const double lambda_max = es.eigenvalues().maxCoeff();
    const double radius = std::sqrt(2.0 * std::log(1.0 / spec.tail) / lambda_min);

    auto sweep = [&](double h, long long& points) {
        const long long half = static_cast<long long>(std::ceil(radius / h));
        const long long per_axis = 2 * half + 1;
        points = 1;
        for (int i = 0; i < dim; ++i) points *= per_axis;
        if (points > spec.max_points) {
            throw DomainError("quadrature grid too coarse: refinement would need " + std::to_string(points) +
                              " points");
        }
        std::vector<long long> idx(dim, 0);
        Vector u(dim);
        double total = 0.0;
        for (long long p = 0; p < points; ++p) {
            for (int i = 0; i < dim; ++i) u(i) = static_cast<double>(idx[i] - half) * h;
            total += std::exp(-0.5 * u.dot(K * u)) * std::cos(u.dot(c));
            for (int i = 0; i < dim; ++i) {
                if (++idx[i] < per_axis) break;
                idx[i] = 0;
            }
        }
        return total * std::pow(h, dim) / std::pow(2.0 * std::numbers::pi, s1.modes());
    };

    double h = std::min(1.0 / std::sqrt(lambda_max), 1.0 / (1.0 + c.cwiseAbs().maxCoeff()));
    long long points = 0;
    double coarse = sweep(h, points);
    for (int level = 0; level < spec.max_refinements; ++level) {
        h *= 0.5;
        const double fine = sweep(h, points);
        const double err = std::abs(fine - coarse);
        if (err <= spec.tol) {
            return {fine, err, h, points};
        }
        coarse = fine;
    }
    throw DomainError("quadrature did not reach the requested tolerance");
}

double per_mode_fidelity(const BdiFactors& bdi, const Vector& d, double tol) {
    if (d.size() != bdi.M.size()) {
        throw DimensionError("one thermal parameter per squeezing factor expected");
    }
    const bool pure_modes = (d.array() - 1.0).abs().maxCoeff() <= tol;
    const bool trivial_mixer =
        max_abs(bdi.O - Matrix::Identity(bdi.O.rows(), bdi.O.cols())) <= tol;
    if (!pure_modes && !trivial_mixer) {
        throw DomainError("per-mode factorisation needs D = I or O = I");
    }
    double p = 1.0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        const double m2 = bdi.M(i) * bdi.M(i);
        p *= 2.0 / std::sqrt((m2 + d(i)) * (1.0 / m2 + d(i)));
    }
    return p;
}

double thermal_squeezed_fidelity(double m, double d, PhaseSpaceDim n) {
    if (!(m > 0.0)) {
        throw DomainError("squeezing factor must be positive");
    }
    if (!(d >= 1.0)) {
        throw DomainError("thermal parameter must be >= 1");
    }
    const double m2 = m * m;
    return std::pow(2.0 / std::sqrt((m2 + d) * (1.0 / m2 + d)), n.modes());
}

}  // namespace qf

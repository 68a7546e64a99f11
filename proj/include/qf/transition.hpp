#pragma once

#include "qf/state.hpp"
#include "qf/symplectic.hpp"

namespace qf {

/// Default purity tolerance for the transition-probability precondition: max |d_i - 1|.
inline constexpr double kPurityTol = 1e-6;

/// max_i |d_i - 1| over the symplectic spectrum.
double purity_defect(const QuasifreeState& state);

/// det((A+B)/2)^{-1/2} exp(-(w-v)^T (A+B)^{-1} (w-v)).
///
/// Valid when at least one argument is pure; two mixed states raise DomainError
/// because the expression is then only the trace overlap, not a fidelity.
double transition_probability(const QuasifreeState& s1, const QuasifreeState& s2, double tol = kPurityTol);

double fidelity_to_vacuum(const QuasifreeState& state);

/// Tensor-grid settings for overlap_quadrature.
struct QuadratureSpec {
    double tol = 1e-9;                 ///< requested bound on the step-halving error estimate
    double tail = 1e-12;               ///< integrand magnitude at the box boundary
    int max_refinements = 8;
    long long max_points = 200'000'000;
};

struct QuadratureResult {
    double value;
    double error_estimate;
    double step;
    long long points;  ///< grid points in the finest sweep
};

/// (2 pi)^{-n} \int omega_1(delta_{-u}) omega_2(delta_u) du on a trapezoid tensor grid
/// (n <= 2). For mixed-mixed inputs the result is the trace overlap tr(rho_1 rho_2).
QuadratureResult overlap_quadrature(const QuasifreeState& s1, const QuasifreeState& s2,
                                    const QuadratureSpec& spec = {});

/// prod_i 2 / sqrt((m_i^2 + d_i)(m_i^-2 + d_i)); requires D = I or O = I.
double per_mode_fidelity(const BdiFactors& bdi, const Vector& d, double tol = kDefaultTol);

/// (2 / sqrt((m^2 + d)(m^-2 + d)))^n for M = m I, D = d I.
double thermal_squeezed_fidelity(double m, double d, PhaseSpaceDim n);

}  // namespace qf

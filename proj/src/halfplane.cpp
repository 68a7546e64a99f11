#include "qf/halfplane.hpp"

#include <cmath>
#include <string>

namespace qf {

HalfPlanePoint make_point(double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y) || !(y > 0.0)) {
        throw DomainError("half-plane points need finite coordinates with y > 0");
    }
    return {x, y};
}

MobiusElement make_mobius(double a, double b, double c, double d, double tol) {
    const double det = a * d - b * c;
    if (std::abs(det - 1.0) > tol) {
        throw DomainError("Mobius element needs ad - bc = 1, got " + std::to_string(det));
    }
    return {a, b, c, d};
}

MobiusElement mobius_from_matrix(const Matrix& g, double tol) {
    if (g.rows() != 2 || g.cols() != 2) {
        throw DimensionError("Mobius elements are 2x2 matrices");
    }
    return make_mobius(g(0, 0), g(0, 1), g(1, 0), g(1, 1), tol);
}

HalfPlanePoint mobius_apply(const MobiusElement& g, const HalfPlanePoint& z) {
    const Complex w(z.x, z.y);
    const Complex image = (g.a * w + g.b) / (g.c * w + g.d);
    return {image.real(), image.imag()};
}

double u_function(const HalfPlanePoint& z, const HalfPlanePoint& zp) {
    const double dx = z.x - zp.x;
    const double dy = z.y - zp.y;
    return (dx * dx + dy * dy) / (4.0 * z.y * zp.y);
}

double geodesic_distance(const HalfPlanePoint& z, const HalfPlanePoint& zp) {
    return 2.0 * std::asinh(std::sqrt(u_function(z, zp)));
}

HalfPlanePoint pure_state_to_point(const QuasifreeState& state, double tol) {
    if (state.modes() != 1) {
        throw DimensionError("half-plane correspondence is defined for one mode");
    }
    if (!is_pure(state, tol)) {
        throw DomainError("half-plane correspondence needs a pure state");
    }
    const Matrix gamma = sqrt_spd(state.covariance());
    const double det = gamma.determinant();
    // inverse of a unit-determinant 2x2 matrix, renormalised against rounding
    const double s = 1.0 / std::sqrt(det);
    const MobiusElement inv{gamma(1, 1) * s, -gamma(0, 1) * s, -gamma(1, 0) * s, gamma(0, 0) * s};
    return mobius_apply(inv, {0.0, 1.0});
}

double fidelity_from_distance(double s) {
    if (!(s >= 0.0)) {
        throw DomainError("geodesic distance must be nonnegative");
    }
    return 1.0 / std::cosh(0.5 * s);
}

}  // namespace qf

#pragma once

// One-mode pure squeezed states as points of the Poincare upper half plane.

#include "qf/state.hpp"

namespace qf {

struct HalfPlanePoint {
    double x;
    double y;  ///< > 0
};

/// Real 2x2 matrix [[a, b], [c, d]] with unit determinant.
struct MobiusElement {
    double a, b, c, d;
};

HalfPlanePoint make_point(double x, double y);
MobiusElement make_mobius(double a, double b, double c, double d, double tol = kDefaultTol);
MobiusElement mobius_from_matrix(const Matrix& g, double tol = kDefaultTol);

/// z -> (a z + b) / (c z + d).
HalfPlanePoint mobius_apply(const MobiusElement& g, const HalfPlanePoint& z);

/// |z - z'|^2 / (4 y y').
double u_function(const HalfPlanePoint& z, const HalfPlanePoint& zp);

/// Hyperbolic distance, evaluated as 2 asinh(sqrt(u)).
double geodesic_distance(const HalfPlanePoint& z, const HalfPlanePoint& zp);

/// Point gamma^{-1} i where gamma = A^{1/2}. Squeezing in xi (A_00 > 1) lands
/// below the unit height: diag(e^{2r}, e^{-2r}) maps to i e^{-2r}.
HalfPlanePoint pure_state_to_point(const QuasifreeState& state, double tol = 1e-8);

/// 1 / cosh(s / 2).
double fidelity_from_distance(double s);

}  // namespace qf

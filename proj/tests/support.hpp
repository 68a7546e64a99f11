#pragma once

#include "qf/state.hpp"
#include "qf/symplectic.hpp"

#include <cstdint>
#include <random>

namespace qf::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Seeded symplectic matrix of moderate condition: exp(J H) with H scaled down.
inline Matrix moderate_symplectic(std::uint64_t seed, int n, double scale = 0.6) {
    std::mt19937_64 rng(seed);
    Matrix H(2 * n, 2 * n);
    for (int i = 0; i < 2 * n; ++i) {
        for (int j = 0; j <= i; ++j) {
            H(i, j) = H(j, i) = uniform(rng, -scale, scale);
        }
    }
    return symplectic_from_hamiltonian(H);
}

/// S^T diag(d, d) S with d uniform in [1, dmax] (dmax = 1 gives a pure state).
inline Matrix random_covariance(std::uint64_t seed, int n, double dmax = 4.0) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    Vector d(n);
    for (int i = 0; i < n; ++i) {
        d(i) = dmax > 1.0 ? uniform(rng, 1.0, dmax) : 1.0;
    }
    const Matrix S = moderate_symplectic(seed, n);
    Matrix A = S.transpose() * mode_diagonal(d) * S;
    return 0.5 * (A + A.transpose());
}

inline Vector random_vector(std::uint64_t seed, int size, double scale = 1.0) {
    std::mt19937_64 rng(seed + 17);
    Vector v(size);
    for (int i = 0; i < size; ++i) {
        v(i) = uniform(rng, -scale, scale);
    }
    return v;
}

/// Generic SPD matrix, not necessarily a valid state.
inline Matrix random_spd(std::uint64_t seed, int size, double shift = 0.5) {
    std::mt19937_64 rng(seed + 101);
    Matrix M(size, size);
    for (int i = 0; i < size; ++i) {
        for (int j = 0; j < size; ++j) {
            M(i, j) = uniform(rng, -1.0, 1.0);
        }
    }
    return M * M.transpose() + shift * Matrix::Identity(size, size);
}

}  // namespace qf::testing

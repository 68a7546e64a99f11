#include "qf/fock_oracle.hpp"

#include "qf/symplectic.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace qf::oracle {

namespace {

constexpr double kMaxSqueeze = 2.0;
constexpr double kMaxDisplacement = 3.0;
constexpr int kMaxMixerDim = 4096;

void require_cutoff(int N) {
    if (N < 1) {
        throw DimensionError("cutoff must be >= 1");
    }
}

CMatrix number_operator(int N) {
    CMatrix n = CMatrix::Zero(N + 1, N + 1);
    for (int k = 0; k <= N; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

// Number-conserving blocks of the two-mode mixer, one per total photon number.
struct MixerBlocks {
    std::vector<std::vector<int>> index;
    std::vector<Matrix> unitary;
};

MixerBlocks mixer_blocks(double theta, int N) {
    MixerBlocks mb;
    const int side = N + 1;
    for (int total = 0; total <= 2 * N; ++total) {
        const int lo = std::max(0, total - N);
        const int hi = std::min(N, total);
        const int size = hi - lo + 1;
        Matrix G = Matrix::Zero(size, size);
        std::vector<int> idx(size);
        for (int i = lo; i <= hi; ++i) {
            const int j = total - i;
            idx[i - lo] = i * side + j;
            // a^dag b |i, j> = sqrt((i+1) j) |i+1, j-1>
            if (i + 1 <= hi) G(i + 1 - lo, i - lo) += theta * std::sqrt(static_cast<double>((i + 1) * j));
            // a b^dag |i, j> = sqrt(i (j+1)) |i-1, j+1>
            if (i - 1 >= lo) G(i - 1 - lo, i - lo) -= theta * std::sqrt(static_cast<double>(i * (j + 1)));
        }
        mb.index.push_back(std::move(idx));
        mb.unitary.push_back(G.exp());
    }
    return mb;
}

enum class GateKind { Phase, Mixer, Squeeze, Displace };

struct Gate {
    GateKind kind;
    int mode;      // 0 or 1; ignored for the mixer
    double param;  // phase, mixer angle, squeeze parameter
    Complex alpha; // displacement amplitude
    Matrix symplectic;
};

Matrix embed_single(const Matrix& s2, int mode, int modes) {
    Matrix S = Matrix::Identity(2 * modes, 2 * modes);
    const int xi = mode;
    const int eta = modes + mode;
    S(xi, xi) = s2(0, 0);
    S(xi, eta) = s2(0, 1);
    S(eta, xi) = s2(1, 0);
    S(eta, eta) = s2(1, 1);
    return S;
}

Gate phase_gate(double phi, int mode, int modes) {
    Matrix r(2, 2);
    r << std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi);
    return {GateKind::Phase, mode, phi, {}, embed_single(r, mode, modes)};
}

Gate squeeze_gate(double r, int mode, int modes) {
    return {GateKind::Squeeze, mode, r, {}, embed_single(single_mode_squeezer(r), mode, modes)};
}

// Beam splitter with X = [[c, s], [-s, c]], Y = 0.
Gate mixer_gate(double theta) {
    Matrix S = Matrix::Zero(4, 4);
    Matrix X(2, 2);
    X << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
    S.topLeftCorner(2, 2) = X;
    S.bottomRightCorner(2, 2) = X;
    return {GateKind::Mixer, 0, theta, {}, S};
}

// Orthogonal symplectic [[X, Y], [-Y, X]] as rotations and (for two modes) one mixer,
// through the unitary W = X + iY = diag(e^{i a}) B(theta) diag(e^{i b}).
std::vector<Gate> passive_gates(const Matrix& O, int modes) {
    const int n = modes;
    const Matrix X = O.topLeftCorner(n, n);
    const Matrix Y = O.topRightCorner(n, n);
    const CMatrix W = X.cast<Complex>() + Complex(0.0, 1.0) * Y.cast<Complex>();
    if (n == 1) {
        return {phase_gate(std::arg(W(0, 0)), 0, 1)};
    }
    const double c = std::abs(W(0, 0));
    const double s = std::abs(W(0, 1));
    const double theta = std::atan2(s, c);
    double a1 = 0, a2 = 0, b2 = 0;
    constexpr double kTiny = 1e-12;
    if (s < kTiny) {
        a1 = std::arg(W(0, 0));
        a2 = std::arg(W(1, 1));
    } else if (c < kTiny) {
        a1 = std::arg(W(0, 1));
        a2 = std::arg(-W(1, 0));
    } else {
        a1 = std::arg(W(0, 0));
        b2 = std::arg(W(0, 1)) - a1;
        a2 = std::arg(-W(1, 0));
    }
    return {phase_gate(a1, 0, 2), phase_gate(a2, 1, 2), mixer_gate(theta), phase_gate(b2, 1, 2)};
}

// Fock-space realisation of each gate, single-mode matrices or mixer blocks.
struct RealisedGate {
    const Gate* gate;
    CMatrix single;
    MixerBlocks blocks;
};

RealisedGate realise(const Gate& g, int N) {
    RealisedGate rg{&g, {}, {}};
    switch (g.kind) {
        case GateKind::Phase: rg.single = phase_rotation_unitary(g.param, N).data; break;
        case GateKind::Squeeze: rg.single = squeeze_unitary(g.param, N).data; break;
        case GateKind::Displace: rg.single = displacement_unitary(g.alpha, N).data; break;
        // the Fock mixer exp(t(a^dag b - a b^dag)) realises X = R(-t)
        case GateKind::Mixer: rg.blocks = mixer_blocks(-g.param, N); break;
    }
    return rg;
}

// X <- U X where U acts on one factor (or both, for the mixer) of the Fock space.
void left_apply(const RealisedGate& rg, CMatrix& X, int modes, int N) {
    const int side = N + 1;
    if (modes == 1) {
        X = (rg.single * X).eval();
        return;
    }
    const Eigen::Index K = X.cols();
    if (rg.gate->kind == GateKind::Mixer) {
        for (std::size_t b = 0; b < rg.blocks.index.size(); ++b) {
            const auto& idx = rg.blocks.index[b];
            const CMatrix sub = X(idx, Eigen::all);
            X(idx, Eigen::all) = rg.blocks.unitary[b].cast<Complex>() * sub;
        }
        return;
    }
    if (rg.gate->mode == 1) {
        Eigen::Map<CMatrix> view(X.data(), side, side * K);
        view = (rg.single * view).eval();
        return;
    }
    const CMatrix Ut = rg.single.transpose();
    CMatrix tmp(side, side);
    for (Eigen::Index c = 0; c < K; ++c) {
        Eigen::Map<CMatrix> block(X.col(c).data(), side, side);  // (j, i) layout
        tmp.noalias() = block * Ut;
        block = tmp;
    }
}

CMatrix expect_base(int N, int which) {
    // which: 0 -> x, 1 -> p, 2 -> x^2, 3 -> p^2, 4 -> (xp + px)/2
    const CMatrix a = annihilation(N);
    const CMatrix ad = a.adjoint();
    const CMatrix a2 = a * a;
    const CMatrix ad2 = a2.adjoint();
    const CMatrix num = number_operator(N);
    const CMatrix I = CMatrix::Identity(N + 1, N + 1);
    const double r2 = std::sqrt(2.0);
    const Complex i(0.0, 1.0);
    switch (which) {
        case 0: return (a + ad) / r2;
        case 1: return (a - ad) / (i * r2);
        case 2: return (a2 + ad2 + 2.0 * num + I) / 2.0;
        case 3: return -(a2 + ad2 - 2.0 * num - I) / 2.0;
        default: return (a2 - ad2) / (2.0 * i);
    }
}

// tr(rho (O1 x O2)) for a two-mode rho, skipping zero entries of the factors.
Complex expect_two(const TruncatedOperator& rho, const CMatrix& O1, const CMatrix& O2) {
    const int side = rho.cutoff + 1;
    Complex total(0.0, 0.0);
    for (int i = 0; i < side; ++i) {
        for (int ip = 0; ip < side; ++ip) {
            const Complex o1 = O1(i, ip);
            if (o1 == Complex(0.0, 0.0)) continue;
            for (int j = 0; j < side; ++j) {
                for (int jp = 0; jp < side; ++jp) {
                    const Complex o2 = O2(j, jp);
                    if (o2 == Complex(0.0, 0.0)) continue;
                    total += o1 * o2 * rho.data(ip * side + jp, i * side + j);
                }
            }
        }
    }
    return total;
}

}  // namespace

CMatrix annihilation(int N) {
    require_cutoff(N);
    CMatrix a = CMatrix::Zero(N + 1, N + 1);
    for (int k = 1; k <= N; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return a;
}

TruncatedOperator vacuum_density(int modes, int N) {
    require_cutoff(N);
    if (modes != 1 && modes != 2) {
        throw DimensionError("oracle supports one or two modes");
    }
    const int dim = modes == 1 ? N + 1 : (N + 1) * (N + 1);
    TruncatedOperator rho{modes, N, CMatrix::Zero(dim, dim)};
    rho.data(0, 0) = 1.0;
    return rho;
}

TruncatedOperator thermal_density(double d, int N) {
    require_cutoff(N);
    if (!(d >= 1.0)) {
        throw DomainError("thermal parameter must be >= 1");
    }
    const double nbar = (d - 1.0) / 2.0;
    const double q = nbar / (nbar + 1.0);
    Vector p(N + 1);
    double w = 1.0;
    for (int k = 0; k <= N; ++k) {
        p(k) = w;
        w *= q;
    }
    p /= p.sum();
    return {1, N, p.cast<Complex>().asDiagonal()};
}

TruncatedOperator squeeze_unitary(double r, int N) {
    require_cutoff(N);
    if (!(std::abs(r) <= kMaxSqueeze)) {
        throw DomainError("squeeze parameter outside the truncation guard |r| <= 2");
    }
    const CMatrix a = annihilation(N);
    const CMatrix a2 = a * a;
    const CMatrix gen = (0.5 * r) * (a2.adjoint() - a2);
    return {1, N, gen.exp()};
}

TruncatedOperator displacement_unitary(Complex alpha, int N) {
    require_cutoff(N);
    if (!(std::abs(alpha) <= kMaxDisplacement)) {
        throw DomainError("displacement outside the truncation guard |alpha| <= 3");
    }
    const CMatrix a = annihilation(N);
    const CMatrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
    return {1, N, gen.exp()};
}

TruncatedOperator phase_rotation_unitary(double phi, int N) {
    require_cutoff(N);
    CVector diag(N + 1);
    for (int k = 0; k <= N; ++k) diag(k) = std::exp(Complex(0.0, phi * k));
    return {1, N, diag.asDiagonal()};
}

TruncatedOperator mode_mixer_unitary(double theta, int N) {
    require_cutoff(N);
    const int dim = (N + 1) * (N + 1);
    if (dim > kMaxMixerDim) {
        throw DomainError("two-mode cutoff too large for a dense mixer: (N+1)^2 = " + std::to_string(dim));
    }
    const MixerBlocks mb = mixer_blocks(theta, N);
    CMatrix U = CMatrix::Zero(dim, dim);
    for (std::size_t b = 0; b < mb.index.size(); ++b) {
        const auto& idx = mb.index[b];
        for (std::size_t r = 0; r < idx.size(); ++r)
            for (std::size_t c = 0; c < idx.size(); ++c) U(idx[r], idx[c]) = mb.unitary[b](r, c);
    }
    return {2, N, std::move(U)};
}

TruncatedOperator density_from_state(const QuasifreeState& state, int N) {
    require_cutoff(N);
    const int n = state.modes();
    if (n > 2) {
        throw DomainError("oracle supports one or two modes");
    }
    const WilliamsonFactors w = williamson(state.covariance());
    const BdiFactors bdi = bdi_decompose(w.S);

    // omega = (thermal) o alpha_O o alpha_Sigma o alpha_O' o tau_v; gates act in this order
    std::vector<Gate> gates = passive_gates(bdi.O, n);
    for (int k = 0; k < n; ++k) {
        const double r = std::log(bdi.M(k));
        if (r > kMaxSqueeze) {
            throw DomainError("state needs squeezing beyond the oracle guard");
        }
        gates.push_back(squeeze_gate(r, k, n));
    }
    for (Gate& g : passive_gates(bdi.Oprime, n)) gates.push_back(std::move(g));

    Matrix circuit = Matrix::Identity(2 * n, 2 * n);
    for (const Gate& g : gates) circuit = circuit * g.symplectic;
    if (max_abs(circuit - w.S) > 1e-8 * std::max(1.0, max_abs(w.S))) {
        throw DomainError("Williamson factor does not match the supported gate circuit");
    }
    for (int k = 0; k < n; ++k) {
        const Complex alpha(state.mean()(k) / std::sqrt(2.0), state.mean()(n + k) / std::sqrt(2.0));
        if (std::abs(alpha) > kMaxDisplacement) {
            throw DomainError("state needs displacement beyond the oracle guard");
        }
        if (alpha != Complex(0.0, 0.0)) gates.push_back({GateKind::Displace, k, 0.0, alpha, {}});
    }

    const bool pure = (w.d.array() - 1.0).abs().maxCoeff() <= 1e-9;
    const Vector d = w.d.cwiseMax(1.0);
    const int side = N + 1;
    const int dim = n == 1 ? side : side * side;
    CMatrix X;
    if (pure) {
        X = CMatrix::Zero(dim, 1);
        X(0, 0) = 1.0;
    } else if (n == 1) {
        X = thermal_density(d(0), N).data;
    } else {
        const CMatrix p1 = thermal_density(d(0), N).data;
        const CMatrix p2 = thermal_density(d(1), N).data;
        X = CMatrix::Zero(dim, dim);
        for (int i = 0; i < side; ++i)
            for (int j = 0; j < side; ++j) X(i * side + j, i * side + j) = p1(i, i) * p2(j, j);
    }

    for (const Gate& g : gates) {
        const RealisedGate rg = realise(g, N);
        left_apply(rg, X, n, N);
        if (!pure) {
            // (U rho)^dag = rho U^dag, so a second left application gives U rho U^dag
            X = X.adjoint().eval();
            left_apply(rg, X, n, N);
        }
    }
    if (pure) {
        return {n, N, X * X.adjoint()};
    }
    return {n, N, std::move(X)};
}

double overlap(const TruncatedOperator& rho1, const TruncatedOperator& rho2) {
    if (rho1.modes != rho2.modes || rho1.dim() != rho2.dim()) {
        throw DimensionError("overlap of operators on different truncated spaces");
    }
    return (rho1.data.cwiseProduct(rho2.data.transpose())).sum().real();
}

double overlap_imaginary(const TruncatedOperator& rho1, const TruncatedOperator& rho2) {
    if (rho1.modes != rho2.modes || rho1.dim() != rho2.dim()) {
        throw DimensionError("overlap of operators on different truncated spaces");
    }
    return (rho1.data.cwiseProduct(rho2.data.transpose())).sum().imag();
}

TruncatedOperator partial_trace(const TruncatedOperator& rho, int keep) {
    if (rho.modes != 2) {
        throw DimensionError("partial trace needs a two-mode operator");
    }
    if (keep != 1 && keep != 2) {
        throw DimensionError("keep must be 1 or 2");
    }
    const int side = rho.cutoff + 1;
    CMatrix out = CMatrix::Zero(side, side);
    for (int a = 0; a < side; ++a) {
        for (int b = 0; b < side; ++b) {
            Complex s(0.0, 0.0);
            for (int t = 0; t < side; ++t) {
                s += keep == 1 ? rho.data(a * side + t, b * side + t) : rho.data(t * side + a, t * side + b);
            }
            out(a, b) = s;
        }
    }
    return {1, rho.cutoff, std::move(out)};
}

Complex trace(const TruncatedOperator& rho) { return rho.data.trace(); }

Moments extract_moments(const TruncatedOperator& rho) {
    const int N = rho.cutoff;
    const int n = rho.modes;
    std::vector<CMatrix> base;
    for (int k = 0; k < 5; ++k) base.push_back(expect_base(N, k));
    const CMatrix I = CMatrix::Identity(N + 1, N + 1);

    // R_k = quadrature q (0 = xi, 1 = eta) of mode m, with k = q * n + m
    auto one_mode = [&](const CMatrix& op, int mode) -> double {
        if (n == 1) return (rho.data * op).trace().real();
        return (mode == 0 ? expect_two(rho, op, I) : expect_two(rho, I, op)).real();
    };

    Moments out{Vector(2 * n), Matrix(2 * n, 2 * n)};
    for (int k = 0; k < 2 * n; ++k) out.mean(k) = one_mode(base[k / n], k % n);
    for (int k = 0; k < 2 * n; ++k) {
        for (int l = k; l < 2 * n; ++l) {
            const int qk = k / n, mk = k % n, ql = l / n, ml = l % n;
            double second;
            if (mk == ml) {
                const int which = qk == ql ? 2 + qk : 4;
                second = one_mode(base[which], mk);
            } else {
                const CMatrix& o1 = base[mk == 0 ? qk : ql];
                const CMatrix& o2 = base[mk == 0 ? ql : qk];
                second = expect_two(rho, o1, o2).real();
            }
            out.A(k, l) = out.A(l, k) = 2.0 * (second - out.mean(k) * out.mean(l));
        }
    }
    return out;
}

CutoffCheck at_cutoff_pair(const std::function<double(int)>& f, int N, double tol) {
    CutoffCheck c{f(N), f(N + 10), 0.0, std::nullopt};
    c.delta = std::abs(c.at_n_plus - c.at_n);
    if (c.delta <= tol) c.value = c.at_n;
    return c;
}

}  // namespace qf::oracle

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "cli.hpp"
#include "support.hpp"

#include "qf/fock_oracle.hpp"
#include "qf/halfplane.hpp"
#include "qf/purification.hpp"
#include "qf/state.hpp"
#include "qf/symplectic.hpp"
#include "qf/transition.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace qf;
using qf::testing::moderate_symplectic;
using qf::testing::random_covariance;
using qf::testing::random_spd;
using qf::testing::random_vector;

namespace {

// Tracks the worst observed error against a bound.
struct Gauge {
    double bound;
    double worst = 0.0;
    bool ok = true;

    void see(double err) {
        if (!(err <= bound)) ok = false;
        if (!(err <= worst)) worst = err;
    }
};

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

struct Outcome {
    bool pass;
    std::string detail;
};

Vector two(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

Outcome fock_values() {
    using namespace qf::oracle;
    const QuasifreeState vac = QuasifreeState::vacuum(PhaseSpaceDim(1));
    const std::vector<std::pair<QuasifreeState, double>> cases{
        {displace(vac, two(1, 0)), std::exp(-0.5)},
        {make_state(3.0 * Matrix::Identity(2, 2)), 0.5},
        {apply_bogoliubov(vac, single_mode_squeezer(1.0)), 1.0 / std::cosh(1.0)},
    };
    Gauge g{1e-5};
    bool converged = true;
    for (const auto& [state, expected] : cases) {
        const double closed = transition_probability(state, vac);
        const CutoffCheck c = at_cutoff_pair(
            [&](int n) { return overlap(density_from_state(state, n), vacuum_density(1, n)); }, 60);
        converged = converged && c.value.has_value();
        g.see(std::abs(c.at_n - expected));
        g.see(std::abs(closed - expected));
    }
    return {g.ok && converged, "max |oracle - value| = " + sci(g.worst) + " at N=60"};
}

Outcome quadrature_vs_closed_form() {
    Gauge g{1e-6};
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const QuasifreeState p = make_state(random_covariance(seed, 1, 1.0), random_vector(seed, 2), 1e-8);
        const QuasifreeState m = make_state(random_covariance(seed + 50, 1, 3.0), random_vector(seed + 50, 2));
        g.see(std::abs(overlap_quadrature(p, m).value - transition_probability(p, m)));
    }
    return {g.ok, "10 pairs, max discrepancy " + sci(g.worst)};
}

Outcome bogoliubov_invariance() {
    Gauge g{1e-8};
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const int n = 1 + static_cast<int>(seed % 3);
        const QuasifreeState p = make_state(random_covariance(seed, n, 1.0), random_vector(seed, 2 * n), 1e-8);
        const QuasifreeState m = make_state(random_covariance(seed + 1000, n), random_vector(seed + 1000, 2 * n));
        const Matrix S = moderate_symplectic(seed + 2000, n);
        const double before = transition_probability(p, m);
        const double after = transition_probability(apply_bogoliubov(p, S, 1e-8), apply_bogoliubov(m, S, 1e-8));
        g.see(std::abs(before - after));
    }
    return {g.ok, "50 trials, max change " + sci(g.worst)};
}

Outcome decomposition_roundtrips() {
    Gauge w{1e-9}, b{1e-9}, o{1e-9};
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const int n = 1 + static_cast<int>(seed % 3);
        const Matrix A = random_covariance(seed, n);
        w.see(max_abs(recompose(williamson(A)) - A));
        const Matrix S = random_symplectic(seed, PhaseSpaceDim(n));
        b.see(max_abs(recompose(bdi_decompose(S)) - S));

        // orthogonal symplectic exp(J H) with H commuting with J
        const Matrix J = form_matrix(n);
        const Matrix H0 = random_spd(seed + 7, 2 * n);
        const Matrix O = symplectic_from_hamiltonian(0.5 * (H0 - J * H0 * J));
        o.see(std::abs(fidelity_to_vacuum(make_state(A)) - fidelity_to_vacuum(make_state(O.transpose() * A * O))));
    }
    return {w.ok && b.ok && o.ok, "williamson " + sci(w.worst) + ", bdi " + sci(b.worst) + ", orthogonal invariance " +
                                      sci(o.worst)};
}

Outcome per_mode_formulas() {
    Gauge g{1e-9};
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const int n = 1 + static_cast<int>(seed % 3);
        const BdiFactors f = bdi_decompose(moderate_symplectic(seed, n));
        const Matrix S = recompose(f);
        g.see(std::abs(per_mode_fidelity(f, Vector::Ones(n)) - fidelity_to_vacuum(make_state(S.transpose() * S, 1e-8))));

        const BdiFactors h{Matrix::Identity(2 * n, 2 * n), f.Oprime, f.M};
        const Vector d = Vector::LinSpaced(n, 1.2, 3.5);
        const Matrix Sh = recompose(h);
        g.see(std::abs(per_mode_fidelity(h, d) - fidelity_to_vacuum(make_state(Sh.transpose() * mode_diagonal(d) * Sh))));

        const double m = f.M(0);
        const double dd = 1.0 + 0.1 * static_cast<double>(seed);
        Vector diag(2 * n);
        diag << Vector::Constant(n, m * m * dd), Vector::Constant(n, dd / (m * m));
        g.see(std::abs(thermal_squeezed_fidelity(m, dd, PhaseSpaceDim(n)) - fidelity_to_vacuum(make_state(Matrix(diag.asDiagonal())))));
    }
    return {g.ok, "max deviation from the generic formula " + sci(g.worst)};
}

Outcome halfplane_law() {
    Gauge g{1e-8}, e{1e-10};
    const HalfPlanePoint i{0.0, 1.0};
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Matrix Sa = moderate_symplectic(seed, 1, 0.8);
        const Matrix Sb = moderate_symplectic(seed + 500, 1, 0.8);
        const QuasifreeState a = make_state(Sa.transpose() * Sa, 1e-8);
        const QuasifreeState b = make_state(Sb.transpose() * Sb, 1e-8);
        const double s = geodesic_distance(pure_state_to_point(a), pure_state_to_point(b));
        g.see(std::abs(transition_probability(a, b) - fidelity_from_distance(s)));

        const MobiusElement m = mobius_from_matrix(Sa, 1e-9);
        const HalfPlanePoint z = mobius_apply(m, i);
        const double rhs = (m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d + 2) / 4;
        e.see(std::abs(1 + u_function(z, i) - rhs));
    }
    return {g.ok && e.ok, "fidelity vs 1/cosh(s/2) " + sci(g.worst) + ", 1+u identity " + sci(e.worst)};
}

Outcome reduction_vs_partial_trace() {
    using namespace qf::oracle;
    Gauge g{1e-5}, schur{1e-10};
    // pure states inside the oracle guard range plus one mixed state
    std::vector<QuasifreeState> states;
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const Matrix S = moderate_symplectic(seed, 2, 0.35);
        states.push_back(make_state(S.transpose() * S, random_vector(seed, 4, 0.5), 1e-8));
    }
    states.push_back(make_state(random_covariance(8, 2, 1.8)));
    int unconverged = 0;
    for (const QuasifreeState& s : states) {
        const TruncatedOperator rho = density_from_state(s, 50);
        const bool pure = is_pure(s, 1e-8);
        const std::optional<TruncatedOperator> finer = pure ? std::optional(density_from_state(s, 60)) : std::nullopt;
        for (int keep : {1, 2}) {
            const Moments m = extract_moments(partial_trace(rho, keep));
            if (finer) {
                const Moments f = extract_moments(partial_trace(*finer, keep));
                if (max_abs(m.A - f.A) > 1e-6) ++unconverged;
            }
            const QuasifreeState r = reduce(s, std::vector<int>{keep - 1});
            g.see(max_abs(m.A - r.covariance()));
            g.see((m.mean - r.mean()).cwiseAbs().maxCoeff());
        }
    }
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const int k = 2 + 2 * static_cast<int>(seed % 2);
        const Matrix G = random_spd(seed, 2 * k);
        const Matrix U = G.topLeftCorner(k, k);
        const Matrix B = G.topRightCorner(k, k);
        const Matrix C = G.bottomRightCorner(k, k);
        const double det = G.determinant();
        schur.see(std::abs(det - C.determinant() * (U - B * C.inverse() * B.transpose()).determinant()) / std::abs(det));
        schur.see(std::abs(det - U.determinant() * (C - B.transpose() * U.inverse() * B).determinant()) / std::abs(det));
    }
    return {g.ok && schur.ok && unconverged == 0, "moments vs oracle " + sci(g.worst) + " at N=50 (" +
                                                      std::to_string(unconverged) + " unconverged), Schur identities " +
                                                      sci(schur.worst)};
}

Outcome purification_properties() {
    Gauge pure{1e-8}, det{1e-8}, round{1e-8};
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const int n = 1 + static_cast<int>(seed % 2);
        const Matrix A = random_covariance(seed, n);
        const DoubledState d = purify(make_state(A));
        const Matrix JA = d.form() * d.covariance();
        pure.see(max_abs(JA * JA + Matrix::Identity(4 * n, 4 * n)));
        det.see(std::abs(d.covariance().determinant() - 1.0));
        round.see(max_abs(reduce_purification(d, Factor::First).covariance() - A));
    }
    return {pure.ok && det.ok && round.ok,
            "purity " + sci(pure.worst) + ", det " + sci(det.worst) + ", roundtrip " + sci(round.worst)};
}

Outcome entanglement_properties() {
    Gauge g{1e-8};
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const int n = 1 + static_cast<int>(seed % 2);
        const QuasifreeState s = make_state(random_covariance(seed, n));
        const DoubledState p = purify(s);
        Matrix product = Matrix::Zero(4 * n, 4 * n);
        product.topLeftCorner(2 * n, 2 * n) = s.covariance();
        product.bottomRightCorner(2 * n, 2 * n) = s.covariance();
        const double generic = 1.0 / std::sqrt(((p.covariance() + product) / 2).determinant());
        g.see(std::abs(entanglement_measure(s) - generic));
        g.see(std::abs(entanglement_measure(s) - entanglement_by_transition(s)));
    }
    const bool exact = entanglement_from_spectrum(Vector::Constant(1, 3.0)) == 1.0 / 7.0;
    bool monotone = true;
    for (double other = 1.0; other <= 4.0; other += 0.5) {
        for (int slot = 0; slot < 2; ++slot) {
            double previous = 2.0;
            for (double x = 1.0; x <= 8.0; x += 0.125) {
                Vector d(2);
                d(slot) = x;
                d(1 - slot) = other;
                const double e = entanglement_measure(make_state(mode_diagonal(d)));
                monotone = monotone && e < previous;
                previous = e;
            }
        }
    }
    return {g.ok && exact && monotone, "generic determinant " + sci(g.worst) + ", d=3 gives 1/7 " +
                                           (exact ? "exactly" : "inexactly") + ", monotone " + (monotone ? "yes" : "no")};
}

Outcome bogoliubov_purification() {
    Gauge inv{1e-10}, val{1e-8};
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const int n = 1 + static_cast<int>(seed % 3);
        const Vector d = (random_vector(seed, n, 1.0).array() + 1.0) * 2.5 + 1.0;
        const PurificationBogoliubov pb = purification_bogoliubov(d);
        const Matrix Jt = doubled_form(n);
        inv.see(max_abs(pb.Sbold.transpose() * Jt * pb.Sbold - Jt));
        inv.see(max_abs(pb.Sbold.transpose() * pb.Sbold - pb.Dbold));
        val.see(std::abs(bogoliubov_transition(pb, d) - entanglement_from_spectrum(d)));
    }
    return {inv.ok && val.ok, "invariants " + sci(inv.worst) + ", determinant formula " + sci(val.worst)};
}

Outcome cli_contract() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "qf_acceptance";
    fs::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream((dir / name)) << text;
        return (dir / name).string();
    };
    auto read = [](const std::string& path) {
        std::ifstream in(path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    auto call = [](const std::vector<std::string>& args, std::string* out = nullptr) {
        std::ostringstream o, e;
        const int code = qf::cli::run(args, o, e);
        if (out) *out = o.str();
        return code;
    };

    std::vector<std::string> failures;
    // bit-stable roundtrip of everything the CLI writes
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const int n = 1 + static_cast<int>(seed % 3);
        const QuasifreeState s = make_state(random_covariance(seed, n), random_vector(seed, 2 * n));
        const std::string text = qf::cli::dump_document(qf::cli::to_document(s));
        const qf::cli::StateDocument back = qf::cli::parse_document(text);
        if (back.covariance != s.covariance() || back.mean != s.mean() || qf::cli::dump_document(back) != text) {
            failures.push_back("roundtrip seed " + std::to_string(seed));
        }
    }
    const std::string three = write("three.json", qf::cli::dump_document(qf::cli::to_document(make_state(random_covariance(4, 3)))));
    const std::string reduced = (dir / "reduced.json").string();
    const std::string purified = (dir / "purified.json").string();
    const std::string centered = write("centered.json", qf::cli::dump_document(qf::cli::to_document(make_state(random_covariance(4, 2)))));
    if (call({"reduce", three, "--keep", "0,2", "--out", reduced}) != 0 ||
        qf::cli::dump_document(qf::cli::read_document(reduced)) != read(reduced)) {
        failures.push_back("reduce output roundtrip");
    }
    if (call({"purify", centered, "--out", purified}) != 0 ||
        qf::cli::dump_document(qf::cli::read_document(purified)) != read(purified)) {
        failures.push_back("purify output roundtrip");
    }

    // exit codes
    const std::string vac = write("vac.json", R"({"modes": 1, "covariance": [[1, 0], [0, 1]], "mean": [0, 0]})");
    const std::string bad = write("bad.json", R"({"modes": 1, "covariance": [[0.5, 0], [0, 0.5]], "mean": [0, 0]})");
    const std::string broken = write("broken.json", R"({"modes": 1, "covariance": [[1, 0], )");
    const std::string th = write("th.json", R"({"modes": 1, "covariance": [[3, 0], [0, 3]], "mean": [0, 0]})");
    const std::string th2 = write("th2.json", R"({"modes": 1, "covariance": [[2, 0], [0, 2]], "mean": [0, 0]})");
    const std::vector<std::pair<std::vector<std::string>, int>> codes{
        {{"validate", vac}, 0},
        {{"validate", bad}, 2},
        {{"validate", broken}, 1},
        {{"validate", (dir / "missing.json").string()}, 1},
        {{"fidelity", th, th2}, 2},
        {{"fidelity", th, vac}, 0},
        {{"entanglement", th}, 0},
        {{"frobnicate"}, 1},
    };
    for (const auto& [args, expected] : codes) {
        if (call(args) != expected) failures.push_back(args[0] + " exit code");
    }
    std::string out;
    call({"entanglement", th}, &out);
    if (out != "0.142857142857\n") failures.push_back("entanglement output");

    // oracle agreement suite
    std::string table;
    const int oracle_code = call({"oracle-check"}, &table);
    int rows = 0;
    int bad_rows = 0;
    std::istringstream in(table);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        ++rows;
        if (line.size() < 5 || line.substr(line.size() - 5) != ",pass") ++bad_rows;
    }
    if (oracle_code != 0 || bad_rows != 0 || rows == 0) failures.push_back("oracle-check");
    fs::remove_all(dir);

    std::string detail = "oracle-check " + std::to_string(rows - bad_rows) + "/" + std::to_string(rows) + " pass";
    for (const std::string& f : failures) detail += "; failed: " + f;
    return {failures.empty(), detail};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"fock oracle values", fock_values},
        {"quadrature vs closed form", quadrature_vs_closed_form},
        {"bogoliubov invariance", bogoliubov_invariance},
        {"decomposition roundtrips", decomposition_roundtrips},
        {"per-mode fidelity formulas", per_mode_formulas},
        {"half-plane fidelity law", halfplane_law},
        {"reduction vs partial trace", reduction_vs_partial_trace},
        {"purification", purification_properties},
        {"entanglement measure", entanglement_properties},
        {"purifying bogoliubov map", bogoliubov_purification},
        {"cli contract", cli_contract},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, check] : criteria) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        Outcome r;
        try {
            r = check();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s  %2d  %-28s %s (%.1fs)\n", r.pass ? "PASS" : "FAIL", index, name, r.detail.c_str(), secs);
        std::fflush(stdout);
        if (!r.pass) ++failed;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}

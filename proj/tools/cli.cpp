#include "cli.hpp"

#include "scan_expr.hpp"

#include "qf/fock_oracle.hpp"
#include "qf/halfplane.hpp"
#include "qf/symplectic.hpp"
#include "qf/transition.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

namespace qf::cli {

namespace {

using nlohmann::json;

std::string format12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string format_list(const Vector& v) {
    std::string s = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += format12(v(i));
    }
    return s + "]";
}

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

// Entry reader: plain numbers, or (in scan templates) expression strings.
using Scalar = std::function<double(const json&)>;

double plain_number(const json& j) {
    if (!j.is_number()) throw InputError("expected a number, got " + j.dump());
    return j.get<double>();
}

StateDocument document_from_json(const json& j, const Scalar& scalar) {
    if (!j.is_object()) throw InputError("state document must be a JSON object");
    StateDocument doc;
    if (j.contains("form")) {
        const json& f = j.at("form");
        if (f == "standard") doc.form = Form::Standard;
        else if (f == "doubled") doc.form = Form::Doubled;
        else throw InputError("form must be \"standard\" or \"doubled\"");
    }
    if (!j.contains("modes") || !j.at("modes").is_number_integer()) throw InputError("missing integer field 'modes'");
    doc.modes = j.at("modes").get<int>();
    if (doc.modes < 1) throw InputError("'modes' must be positive");
    const int dim = (doc.form == Form::Doubled ? 4 : 2) * doc.modes;

    if (!j.contains("covariance") || !j.at("covariance").is_array()) throw InputError("missing array field 'covariance'");
    const json& rows = j.at("covariance");
    if (static_cast<int>(rows.size()) != dim) {
        throw InputError("covariance must have " + std::to_string(dim) + " rows");
    }
    doc.covariance.resize(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const json& row = rows[r];
        if (!row.is_array() || static_cast<int>(row.size()) != dim) {
            throw InputError("covariance row " + std::to_string(r) + " must have " + std::to_string(dim) + " entries");
        }
        for (int c = 0; c < dim; ++c) doc.covariance(r, c) = scalar(row[c]);
    }
    doc.mean = Vector::Zero(dim);
    if (j.contains("mean")) {
        const json& m = j.at("mean");
        if (!m.is_array() || static_cast<int>(m.size()) != dim) {
            throw InputError("mean must have " + std::to_string(dim) + " entries");
        }
        for (int i = 0; i < dim; ++i) doc.mean(i) = scalar(m[i]);
    }
    if (!doc.covariance.allFinite() || !doc.mean.allFinite()) throw InputError("non-finite number in state document");
    return doc;
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write " + path);
    f << text;
    if (!f) throw InputError("failed writing " + path);
}

QuasifreeState standard_only(const StateDocument& doc, double tol, const char* what) {
    if (doc.form == Form::Doubled) {
        throw DomainError(std::string(what) + " expects a standard-form state");
    }
    return as_state(doc, tol);
}

// ---- oracle suite ---------------------------------------------------------------

struct OracleRow {
    std::string name;
    int cutoff;
    double oracle;
    double closed_form;
    double cutoff_delta;
    bool converged;
    double error;
    bool pass;
};

Vector two(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

std::vector<OracleRow> oracle_suite(int N, int N2, double tol) {
    using namespace qf::oracle;
    std::vector<OracleRow> rows;
    auto record = [&](std::string name, int cutoff, const std::function<double(int)>& f, double exact) {
        const CutoffCheck c = at_cutoff_pair(f, cutoff, 1e-6);
        const double err = std::abs(c.at_n - exact);
        rows.push_back({std::move(name), cutoff, c.at_n, exact, c.delta, c.value.has_value(), err,
                        c.value.has_value() && err <= tol});
    };
    const QuasifreeState vac1 = QuasifreeState::vacuum(PhaseSpaceDim(1));
    const QuasifreeState vac2 = QuasifreeState::vacuum(PhaseSpaceDim(2));
    auto fidelity_pair = [&](std::string name, int cutoff, const QuasifreeState& a, const QuasifreeState& b) {
        record(std::move(name), cutoff,
               [&](int n) { return overlap(density_from_state(a, n), density_from_state(b, n)); },
               transition_probability(a, b));
    };

    fidelity_pair("coherent_vs_vacuum", N, displace(vac1, two(1, 0)), vac1);
    fidelity_pair("thermal3_vs_vacuum", N, make_state(3.0 * Matrix::Identity(2, 2)), vac1);
    fidelity_pair("squeezed1_vs_vacuum", N, apply_bogoliubov(vac1, single_mode_squeezer(1.0)), vac1);

    Matrix rot(2, 2);
    rot << std::cos(0.4), std::sin(0.4), -std::sin(0.4), std::cos(0.4);
    const QuasifreeState dsq = displace(apply_bogoliubov(vac1, single_mode_squeezer(0.5) * rot), two(0.6, -0.3));
    fidelity_pair("displaced_squeezed_vs_coherent", N, dsq, displace(vac1, two(-0.2, 0.4)));
    Matrix sqth(2, 2);
    sqth << 2.0 * std::exp(0.6), 0.0, 0.0, 2.0 * std::exp(-0.6);
    fidelity_pair("squeezed_vs_squeezed_thermal", N, apply_bogoliubov(vac1, single_mode_squeezer(-0.4)),
                  make_state(sqth, two(0.3, 0.1)));

    // two modes: squeezers, a mixer and rotations, checked through overlaps and moments
    Matrix H(4, 4);
    H << 0.3, 0.1, -0.2, 0.05,
         0.1, -0.25, 0.15, 0.1,
         -0.2, 0.15, 0.2, -0.1,
         0.05, 0.1, -0.1, 0.35;
    const Matrix S = symplectic_from_hamiltonian(H);
    Vector mean(4);
    mean << 0.3, -0.2, 0.1, 0.25;
    const QuasifreeState pure2 = make_state(S.transpose() * S, mean, 1e-8);
    fidelity_pair("two_mode_pure_vs_vacuum", N2, pure2, vac2);
    const QuasifreeState mixed2 = make_state(S.transpose() * mode_diagonal(two(1.6, 1.2)) * S);
    fidelity_pair("two_mode_pure_vs_mixed", N2, pure2, mixed2);

    for (int keep : {1, 2}) {
        const std::vector<int> modes{keep - 1};
        const Matrix reduced = reduce(pure2, modes).covariance();
        record("reduce_mode" + std::to_string(keep) + "_moments", N2,
               [&](int n) {
                   const Moments m = extract_moments(partial_trace(density_from_state(pure2, n), keep));
                   return max_abs(m.A - reduced);
               },
               0.0);
    }
    record("two_mode_mixed_moments", N2,
           [&](int n) { return max_abs(extract_moments(density_from_state(mixed2, n)).A - mixed2.covariance()); }, 0.0);
    return rows;
}

std::string oracle_csv(const std::vector<OracleRow>& rows) {
    std::string s = "check,cutoff,oracle,closed_form,cutoff_delta,abs_error,status\n";
    for (const OracleRow& r : rows) {
        const char* status = !r.converged ? "not_converged" : (r.pass ? "pass" : "fail");
        s += r.name + "," + std::to_string(r.cutoff) + "," + format_real(r.oracle) + "," + format_real(r.closed_form) +
             "," + format_real(r.cutoff_delta) + "," + format_real(r.error) + "," + status + "\n";
    }
    return s;
}

// ---- scan -------------------------------------------------------------------------

struct Range {
    double lo;
    double hi;
    int count;
};

Range parse_range(const std::string& text) {
    Range r{};
    const auto a = text.find(':');
    const auto b = a == std::string::npos ? a : text.find(':', a + 1);
    if (b == std::string::npos) throw InputError("range must look like lo:hi:count");
    auto num = [&](std::string_view s, auto& out) {
        const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        if (ec != std::errc() || end != s.data() + s.size()) throw InputError("bad number in range: " + std::string(s));
    };
    const std::string_view t(text);
    num(t.substr(0, a), r.lo);
    num(t.substr(a + 1, b - a - 1), r.hi);
    num(t.substr(b + 1), r.count);
    if (r.count < 1) throw DomainError("empty range");
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi)) throw DomainError("range bounds must be finite");
    if (r.count > 1 && r.hi < r.lo) throw DomainError("empty range: hi < lo");
    return r;
}

std::string scan_csv(const json& tmpl, const std::string& param, const Range& range, double tol) {
    if (!tmpl.is_object() || !tmpl.contains("state")) throw InputError("scan template needs a 'state' object");
    const std::string measure = tmpl.value("measure", std::string("fidelity"));
    if (measure != "fidelity" && measure != "entanglement") {
        throw InputError("measure must be \"fidelity\" or \"entanglement\"");
    }
    auto at = [&](double x) -> Scalar {
        return [&param, x](const json& j) {
            if (j.is_number()) return j.get<double>();
            if (j.is_string()) {
                try {
                    return evaluate(j.get<std::string>(), param, x);
                } catch (const ExpressionError& e) {
                    throw InputError(e.what());
                }
            }
            throw InputError("template entries must be numbers or expression strings");
        };
    };

    std::string out;
    bool with_distance = false;
    for (int k = 0; k < range.count; ++k) {
        const double x = range.count == 1 ? range.lo : range.lo + (range.hi - range.lo) * k / (range.count - 1);
        const QuasifreeState s = standard_only(document_from_json(tmpl.at("state"), at(x)), tol, "scan");
        if (measure == "entanglement") {
            if (k == 0) out = param + ",entanglement\n";
            out += format_real(x) + "," + format_real(entanglement_measure(s)) + "\n";
            continue;
        }
        const QuasifreeState ref = tmpl.contains("reference")
                                       ? standard_only(document_from_json(tmpl.at("reference"), at(x)), tol, "scan")
                                       : QuasifreeState::vacuum(s.dim());
        const bool geometric = s.modes() == 1 && ref.modes() == 1 && is_pure(s, 1e-8) && is_pure(ref, 1e-8) &&
                               s.mean().isZero(0.0) && ref.mean().isZero(0.0);
        if (k == 0) {
            with_distance = s.modes() == 1;
            out = param + ",fidelity" + (with_distance ? ",distance" : "") + "\n";
        }
        out += format_real(x) + "," + format_real(transition_probability(s, ref));
        if (with_distance) {
            out += ",";
            if (geometric) out += format_real(geodesic_distance(pure_state_to_point(s), pure_state_to_point(ref)));
        }
        out += "\n";
    }
    return out;
}

// ---- subcommands ------------------------------------------------------------------

struct Options {
    double tol = kDefaultTol;
    std::string out_path;
    std::vector<std::string> paths;
    bool quadrature = false;
    bool overlap = false;
    std::vector<int> keep;
    int cutoff = 60;
    int cutoff2 = 30;
    std::string param;
    std::string range;
};

int cmd_validate(const Options& o, std::ostream& out) {
    const StateDocument doc = read_document(o.paths.at(0));
    if (doc.form == Form::Doubled) {
        try {
            make_doubled(doc.covariance, std::max(o.tol, 1e-8));
        } catch (const DomainError& e) {
            out << "invalid: " << e.what() << "\n";
            return kDomainError;
        }
        if (!doc.mean.isZero(0.0)) {
            out << "invalid: doubled states are centered\n";
            return kDomainError;
        }
        out << "valid, pure doubled state, modes=" << doc.modes << "\n";
        return kOk;
    }
    std::optional<Vector> d;
    try {
        d = symplectic_eigenvalues(doc.covariance);
    } catch (const DomainError&) {
    }
    try {
        const QuasifreeState s = make_state(doc.covariance, doc.mean, o.tol);
        out << "valid, " << (is_pure(s, std::max(o.tol, 1e-8)) ? "pure" : "mixed") << ", d=" << format_list(*d) << "\n";
        return kOk;
    } catch (const DomainError& e) {
        out << "invalid: " << e.what();
        if (d) out << ", d=" << format_list(*d);
        out << "\n";
        return kDomainError;
    }
}

int cmd_fidelity(const Options& o, std::ostream& out) {
    const QuasifreeState a = as_state(read_document(o.paths.at(0)), o.tol);
    const QuasifreeState b = as_state(read_document(o.paths.at(1)), o.tol);
    if (a.dim() != b.dim()) throw DomainError("states have different numbers of modes");
    const bool mixed = purity_defect(a) > kPurityTol && purity_defect(b) > kPurityTol;
    double value = 0.0;
    if (mixed) {
        if (!o.overlap) {
            throw DomainError("both states are mixed: the formula requires a pure state (pass --overlap for the trace overlap)");
        }
        // the Gaussian overlap integral in closed form, labelled as such
        const Matrix K = 0.5 * (a.covariance() + b.covariance());
        const Vector c = b.mean() - a.mean();
        value = std::exp(-0.5 * c.dot(K.llt().solve(c))) / std::sqrt(K.determinant());
        out << "overlap " << format12(value) << "\n";
    } else {
        value = transition_probability(a, b);
        out << "fidelity " << format12(value) << "\n";
    }
    if (o.quadrature) {
        const QuadratureResult q = overlap_quadrature(a, b);
        out << "quadrature " << format12(q.value) << "\n";
        out << "discrepancy " << format12(std::abs(q.value - value)) << "\n";
    }
    return kOk;
}

int cmd_purify(const Options& o, std::ostream& out) {
    const QuasifreeState s = standard_only(read_document(o.paths.at(0)), o.tol, "purify");
    write_output(dump_document(to_document(purify(s))), o.out_path, out);
    return kOk;
}

int cmd_entanglement(const Options& o, std::ostream& out) {
    const QuasifreeState s = standard_only(read_document(o.paths.at(0)), o.tol, "entanglement");
    out << format12(entanglement_measure(s)) << "\n";
    return kOk;
}

int cmd_reduce(const Options& o, std::ostream& out) {
    const QuasifreeState s = as_state(read_document(o.paths.at(0)), o.tol);
    write_output(dump_document(to_document(reduce(s, o.keep))), o.out_path, out);
    return kOk;
}

int cmd_decompose(const Options& o, std::ostream& out) {
    const QuasifreeState s = standard_only(read_document(o.paths.at(0)), o.tol, "decompose");
    const ModeDecomposition md = mode_decompose(s);
    const BdiFactors bdi = bdi_decompose(md.S);
    json j;
    j["d"] = vector_json(md.d);
    j["S"] = matrix_json(md.S);
    j["M"] = vector_json(bdi.M);
    j["O"] = matrix_json(bdi.O);
    j["Oprime"] = matrix_json(bdi.Oprime);
    j["williamson_residual"] = max_abs(recompose(WilliamsonFactors{md.S, md.d}) - s.covariance());
    j["bdi_residual"] = max_abs(recompose(bdi) - md.S);
    write_output(j.dump(2) + "\n", o.out_path, out);
    return kOk;
}

int cmd_halfplane(const Options& o, std::ostream& out) {
    const QuasifreeState a = standard_only(read_document(o.paths.at(0)), o.tol, "halfplane");
    const HalfPlanePoint i{0.0, 1.0};
    const HalfPlanePoint za = pure_state_to_point(a);
    json j;
    j["point"] = {za.x, za.y};
    const HalfPlanePoint other = o.paths.size() > 1
                                     ? pure_state_to_point(standard_only(read_document(o.paths.at(1)), o.tol, "halfplane"))
                                     : i;
    if (o.paths.size() > 1) j["other_point"] = {other.x, other.y};
    const double s = geodesic_distance(za, other);
    j["u"] = u_function(za, other);
    j["distance"] = s;
    j["fidelity"] = fidelity_from_distance(s);
    write_output(j.dump(2) + "\n", o.out_path, out);
    return kOk;
}

int cmd_oracle_check(const Options& o, std::ostream& out) {
    const std::vector<OracleRow> rows = oracle_suite(o.cutoff, o.cutoff2, 1e-5);
    write_output(oracle_csv(rows), o.out_path, out);
    for (const OracleRow& r : rows) {
        if (!r.pass) return kDomainError;
    }
    return kOk;
}

int cmd_scan(const Options& o, std::ostream& out) {
    const json tmpl = parse_json(read_file(o.paths.at(0)));
    write_output(scan_csv(tmpl, o.param, parse_range(o.range), o.tol), o.out_path, out);
    return kOk;
}

}  // namespace

std::string format_real(double x) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

StateDocument parse_document(const std::string& text) { return document_from_json(parse_json(text), plain_number); }

StateDocument read_document(const std::string& path) { return parse_document(read_file(path)); }

std::string dump_document(const StateDocument& doc) {
    json j;
    j["modes"] = doc.modes;
    j["form"] = doc.form == Form::Doubled ? "doubled" : "standard";
    j["covariance"] = matrix_json(doc.covariance);
    j["mean"] = vector_json(doc.mean);
    return j.dump(2) + "\n";
}

StateDocument to_document(const QuasifreeState& state) {
    return {Form::Standard, state.modes(), state.covariance(), state.mean()};
}

StateDocument to_document(const DoubledState& state) {
    return {Form::Doubled, state.modes(), state.covariance(), Vector::Zero(state.covariance().rows())};
}

QuasifreeState as_state(const StateDocument& doc, double tol) {
    if (doc.form == Form::Doubled) {
        if (!doc.mean.isZero(0.0)) throw DomainError("doubled states are centered");
        return to_standard_form(make_doubled(doc.covariance, std::max(tol, 1e-8)));
    }
    return make_state(doc.covariance, doc.mean, tol);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quasifree state toolkit"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--tol", o.tol, "validation tolerance")->check(CLI::PositiveNumber);

    auto paths = [&](CLI::App* sub, int count, const char* help) {
        sub->add_option("paths", o.paths, help)->required()->expected(count);
    };
    auto with_out = [&](CLI::App* sub) { sub->add_option("--out", o.out_path, "output file (default stdout)"); };

    CLI::App* validate = app.add_subcommand("validate", "check a state document");
    paths(validate, 1, "state document");
    CLI::App* fidelity = app.add_subcommand("fidelity", "transition probability of two states");
    paths(fidelity, 2, "two state documents");
    fidelity->add_flag("--quadrature", o.quadrature, "also evaluate the overlap integral numerically");
    fidelity->add_flag("--overlap", o.overlap, "allow two mixed states (reports the trace overlap)");
    CLI::App* purify_cmd = app.add_subcommand("purify", "purification on the doubled phase space");
    paths(purify_cmd, 1, "state document");
    with_out(purify_cmd);
    CLI::App* ent = app.add_subcommand("entanglement", "entanglement measure of a centered state");
    paths(ent, 1, "state document");
    CLI::App* red = app.add_subcommand("reduce", "marginal on a subset of modes");
    paths(red, 1, "state document");
    red->add_option("--keep", o.keep, "0-based modes to keep, increasing")->required()->delimiter(',');
    with_out(red);
    CLI::App* dec = app.add_subcommand("decompose", "Williamson and BDI factors");
    paths(dec, 1, "state document");
    with_out(dec);
    CLI::App* hp = app.add_subcommand("halfplane", "one-mode pure states as half-plane points");
    hp->add_option("paths", o.paths, "one or two state documents")->required()->expected(1, 2);
    with_out(hp);
    CLI::App* oc = app.add_subcommand("oracle-check", "truncated Fock-space agreement suite (CSV)");
    oc->add_option("--cutoff", o.cutoff, "one-mode cutoff")->check(CLI::Range(1, 200));
    oc->add_option("--cutoff2", o.cutoff2, "two-mode cutoff")->check(CLI::Range(1, 60));
    with_out(oc);
    CLI::App* scan = app.add_subcommand("scan", "parameter scan of a state template (CSV)");
    paths(scan, 1, "template document");
    scan->add_option("--param", o.param, "placeholder name used in the template")->required();
    scan->add_option("--range", o.range, "lo:hi:count")->required();
    with_out(scan);

    std::vector<std::string> argv_store{"qf"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const std::string& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }

    try {
        if (validate->parsed()) return cmd_validate(o, out);
        if (fidelity->parsed()) return cmd_fidelity(o, out);
        if (purify_cmd->parsed()) return cmd_purify(o, out);
        if (ent->parsed()) return cmd_entanglement(o, out);
        if (red->parsed()) return cmd_reduce(o, out);
        if (dec->parsed()) return cmd_decompose(o, out);
        if (hp->parsed()) return cmd_halfplane(o, out);
        if (oc->parsed()) return cmd_oracle_check(o, out);
        if (scan->parsed()) return cmd_scan(o, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kDomainError;
    } catch (const DimensionError& e) {
        err << "error: " << e.what() << "\n";
        return kDomainError;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}

}  // namespace qf::cli

#pragma once

#include "qf/purification.hpp"
#include "qf/state.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace qf::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kDomainError = 2 };

/// Malformed or unreadable input: maps to exit code 1.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Form { Standard, Doubled };

/// On-disk state: {modes, covariance, mean, form}. For the doubled form `modes` is the
/// original mode count and the matrices are 4n x 4n in (xi, eta, xi~, eta~) order.
struct StateDocument {
    Form form = Form::Standard;
    int modes = 0;
    Matrix covariance;
    Vector mean;
};

StateDocument parse_document(const std::string& text);
StateDocument read_document(const std::string& path);
std::string dump_document(const StateDocument& doc);

StateDocument to_document(const QuasifreeState& state);
StateDocument to_document(const DoubledState& state);

/// Standard-form state; doubled documents are re-expressed with the standard form.
QuasifreeState as_state(const StateDocument& doc, double tol);

/// Shortest decimal string that reads back to the same double.
std::string format_real(double x);

/// Runs one invocation (args excludes the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qf::cli

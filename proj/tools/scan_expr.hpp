#pragma once

// Arithmetic over one named parameter, used to fill scan templates.
// Grammar: + - * / ^, parentheses, unary minus, numbers, the constants pi and e,
// and the functions exp log sqrt sin cos tan sinh cosh tanh abs.

#include <stdexcept>
#include <string>
#include <string_view>

namespace qf::cli {

class ExpressionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double evaluate(std::string_view expr, std::string_view param, double value);

}  // namespace qf::cli

#pragma once

#include <stdexcept>
#include <string>

namespace sublab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised while reading a map definition; positions are 1-based.
struct ParseError : Error {
    ParseError(std::string msg, int line_, int col_)
        : Error(std::move(msg) + " (line " + std::to_string(line_) + ", column " +
                std::to_string(col_) + ")"),
          line(line_), col(col_) {}
    int line;
    int col;
};

// Raised during evaluation; component is the 1-based index of the offending
// map component, or 0 when the failure is not tied to one component.
struct EvalError : Error {
    explicit EvalError(std::string msg, int component_ = 0)
        : Error(std::move(msg)), component(component_) {}
    int component;
};

// Numerical geometry failures: rank deficiency, invalid frames, undefined
// operators.
struct GeometryError : Error {
    using Error::Error;
};

}  // namespace sublab

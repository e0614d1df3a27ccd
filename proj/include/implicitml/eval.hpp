#ifndef IMPLICITML_EVAL_HPP
#define IMPLICITML_EVAL_HPP

#include <ostream>
#include <string>

#include "implicitml/core.hpp"

namespace implicitml {

// Raised for the one runtime partiality in the dialect (division by zero).
struct RuntimeError : std::runtime_error {
  Span span;
  RuntimeError(Span s, const std::string& msg) : std::runtime_error(msg), span(s) {}
};

// Call-by-value, left-to-right evaluation of an elaborated program. The print
// primitives append to `out`.
void eval_program(const core::CoreProgram& p, std::ostream& out);

// Convenience wrapper used by tests.
std::string eval_to_string(const core::CoreProgram& p);

}  // namespace implicitml

#endif

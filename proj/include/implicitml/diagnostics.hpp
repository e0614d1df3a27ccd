#ifndef IMPLICITML_DIAGNOSTICS_HPP
#define IMPLICITML_DIAGNOSTICS_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace implicitml {

// Half-open source range. Lines and columns are 1-based; an end column of c
// means the range stops just before column c.
struct Span {
  int line = 0;
  int col = 0;
  int end_line = 0;
  int end_col = 0;

  bool valid() const { return line > 0; }
  bool contains(const Span& other) const;
  std::string str() const;
};

enum class Code {
  Syntax,
  Unbound,
  Type,
  SigMismatch,
  NoSolution,
  Ambiguous,
  Termination,
  DepthCap,
  MissingAnnot,
  ImpureFunctor,
  AliasCycle,
};

const char* code_name(Code c);

struct Diagnostic {
  Code code = Code::Type;
  Span span;
  std::string message;
  // Structured extras: candidate normal forms for E-AMBIGUOUS, the two
  // constraint snapshots for E-TERMINATION, etc.
  nlohmann::json payload = nlohmann::json::object();
};

enum class RenderMode { Human, Json };

std::string render(const Diagnostic& d, RenderMode mode);

// Thrown by any phase on a fatal diagnostic; the driver renders it.
class CompileError : public std::runtime_error {
 public:
  explicit CompileError(Diagnostic d)
      : std::runtime_error(d.message), diag_(std::move(d)) {}
  const Diagnostic& diag() const { return diag_; }

 private:
  Diagnostic diag_;
};

[[noreturn]] inline void fail(Code code, Span span, std::string message,
                              nlohmann::json payload = nlohmann::json::object()) {
  throw CompileError(Diagnostic{code, span, std::move(message), std::move(payload)});
}

}  // namespace implicitml

#endif

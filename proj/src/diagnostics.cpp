#include "implicitml/diagnostics.hpp"

#include <sstream>

namespace implicitml {

bool Span::contains(const Span& o) const {
  if (!valid() || !o.valid()) return true;  // unknown spans nest anywhere
  auto le = [](int l1, int c1, int l2, int c2) {
    return l1 < l2 || (l1 == l2 && c1 <= c2);
  };
  return le(line, col, o.line, o.col) && le(o.end_line, o.end_col, end_line, end_col);
}

std::string Span::str() const {
  std::ostringstream os;
  os << line << ":" << col << "-" << end_line << ":" << end_col;
  return os.str();
}

const char* code_name(Code c) {
  switch (c) {
    case Code::Syntax: return "E-SYNTAX";
    case Code::Unbound: return "E-UNBOUND";
    case Code::Type: return "E-TYPE";
    case Code::SigMismatch: return "E-SIG-MISMATCH";
    case Code::NoSolution: return "E-NO-SOLUTION";
    case Code::Ambiguous: return "E-AMBIGUOUS";
    case Code::Termination: return "E-TERMINATION";
    case Code::DepthCap: return "E-DEPTH-CAP";
    case Code::MissingAnnot: return "E-MISSING-ANNOT";
    case Code::ImpureFunctor: return "E-IMPURE-FUNCTOR";
    case Code::AliasCycle: return "E-ALIAS-CYCLE";
  }
  return "E-UNKNOWN";
}

std::string render(const Diagnostic& d, RenderMode mode) {
  if (mode == RenderMode::Json) {
    nlohmann::json j;
    j["code"] = code_name(d.code);
    j["span"] = {{"line", d.span.line},
                 {"col", d.span.col},
                 {"end_line", d.span.end_line},
                 {"end_col", d.span.end_col}};
    j["message"] = d.message;
    j["payload"] = d.payload;
    return j.dump();
  }
  std::ostringstream os;
  os << code_name(d.code);
  if (d.span.valid()) os << " at " << d.span.str();
  os << ": " << d.message;
  if (d.payload.contains("candidates") && !d.payload["candidates"].empty()) {
    os << "\n  candidates:";
    for (const auto& c : d.payload["candidates"]) {
      os << "\n    " << c["normal_form"].get<std::string>();
      if (c.contains("expression") &&
          c["expression"].get<std::string>() != c["normal_form"].get<std::string>())
        os << " (written " << c["expression"].get<std::string>() << ")";
    }
  }
  if (d.payload.contains("previous_snapshot")) {
    os << "\n  previous: " << d.payload["previous_snapshot"].dump();
    os << "\n  incoming: " << d.payload["incoming_snapshot"].dump();
  }
  return os.str();
}

}  // namespace implicitml

#include "implicitml/pipeline.hpp"

#include <sstream>

#include "implicitml/corecheck.hpp"
#include "implicitml/elaborate.hpp"
#include "implicitml/eval.hpp"
#include "implicitml/parser.hpp"

namespace implicitml {

CheckedProgram check_source(const std::string& source, const PipelineOptions& opts) {
  CheckedProgram out;
  out.ast = parse(source);
  InferOptions io;
  io.max_depth = opts.max_depth;
  io.trace = opts.trace;
  out.infer = infer_program(out.ast, io);
  return out;
}

core::CoreProgram elaborate_source(const std::string& source, const PipelineOptions& opts) {
  auto checked = check_source(source, opts);
  return elaborate_program(checked.ast, checked.infer);
}

std::string run_source(const std::string& source, const PipelineOptions& opts) {
  auto checked = check_source(source, opts);
  auto cp = elaborate_program(checked.ast, checked.infer);
  check_core(cp, *checked.infer.store);
  return eval_to_string(cp);
}

}  // namespace implicitml

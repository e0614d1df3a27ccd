#ifndef IMPLICITML_PIPELINE_HPP
#define IMPLICITML_PIPELINE_HPP

#include <functional>
#include <string>

#include "implicitml/core.hpp"
#include "implicitml/infer.hpp"

namespace implicitml {

struct PipelineOptions {
  int max_depth = 64;
  std::function<void(const std::string&)> trace;
};

struct CheckedProgram {
  ast::Program ast;
  InferResult infer;
};

// parse + infer (+ resolve at every generalization point).
CheckedProgram check_source(const std::string& source, const PipelineOptions& opts = {});

// check_source + elaboration into the implicit-free core.
core::CoreProgram elaborate_source(const std::string& source, const PipelineOptions& opts = {});

// Full pipeline: parse, infer, elaborate, evaluate; returns the output.
std::string run_source(const std::string& source, const PipelineOptions& opts = {});

}  // namespace implicitml

#endif

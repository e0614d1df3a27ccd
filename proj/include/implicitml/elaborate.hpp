#ifndef IMPLICITML_ELABORATE_HPP
#define IMPLICITML_ELABORATE_HPP

#include "implicitml/ast.hpp"
#include "implicitml/core.hpp"
#include "implicitml/infer.hpp"

namespace implicitml {

// Translates an inferred surface program into the implicit-free core.
// Implicit parameters become packed functors, implicit eliminations become
// explicit functor applications driven by the recorded resolutions.
core::CoreProgram elaborate_program(const ast::Program& p, const InferResult& r);

}  // namespace implicitml

#endif

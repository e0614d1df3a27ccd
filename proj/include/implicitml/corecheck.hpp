#ifndef IMPLICITML_CORECHECK_HPP
#define IMPLICITML_CORECHECK_HPP

#include "implicitml/core.hpp"
#include "implicitml/types.hpp"

namespace implicitml {

// Re-typechecks an elaborated program with the implicit machinery disabled:
// no implicit scope, no obligations. Every functor application and module
// projection must be explicit. Expressions are re-inferred from scratch; the
// signature annotations carried by the IR may reference bindings in the
// store that produced them, so checking continues from a copy of that store.
// Throws CompileError on failure.
void check_core(const core::CoreProgram& p, const types::TypeStore& seed);

}  // namespace implicitml

#endif

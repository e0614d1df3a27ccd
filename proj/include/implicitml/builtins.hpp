#ifndef IMPLICITML_BUILTINS_HPP
#define IMPLICITML_BUILTINS_HPP

#include "implicitml/env.hpp"
#include "implicitml/types.hpp"

namespace implicitml {

// The initial typing environment: arithmetic and comparison operators,
// string and printing primitives, and the List/String library modules.
// The evaluator provides matching runtime definitions.
env::Env builtin_env(types::TypeStore& store);

}  // namespace implicitml

#endif

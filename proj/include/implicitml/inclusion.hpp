#ifndef IMPLICITML_INCLUSION_HPP
#define IMPLICITML_INCLUSION_HPP

#include <string>

#include "implicitml/env.hpp"
#include "implicitml/obligations.hpp"
#include "implicitml/types.hpp"

namespace implicitml {

// Structural signature inclusion: does the module described by `candidate`
// satisfy `target`? The candidate may have extra members; its value schemes
// must be at least as general. Type manifests in the target are checked by
// unification and may bind ambient store variables (all on the trail, so
// callers can undo). `why` receives a human-readable reason on failure.
bool signature_includes(const env::Env& e, types::TypeStore& store, ObligationSet* obs,
                        const env::ModuleInfoPtr& candidate, const types::Signature& target,
                        std::string* why = nullptr);

}  // namespace implicitml

#endif

#ifndef IMPLICITML_UNIFY_HPP
#define IMPLICITML_UNIFY_HPP

#include <functional>

#include "implicitml/env.hpp"
#include "implicitml/obligations.hpp"
#include "implicitml/types.hpp"

namespace implicitml {

// Unification over the store trail. Member types with equal paths decompose
// into their arguments (abstract type constructors are injective); members
// whose signature provides a manifest are expanded through the environment
// before comparison. Returns false on mismatch; all bindings stay on the
// trail so callers can undo.
class Unifier {
 public:
  Unifier(types::TypeStore& store, const env::Env& e, ObligationSet* obs = nullptr)
      : store_(store), env_(e), obs_(obs) {}

  bool unify(types::TypePtr a, types::TypePtr b);

  // Instantiates a scheme with fresh store variables.
  types::TypePtr instantiate(const types::Scheme& s);
  // Replaces quantified variables with fresh rigids (for inclusion checks).
  types::TypePtr skolemize(const types::Scheme& s);

 private:
  types::TypeStore& store_;
  const env::Env& env_;
  ObligationSet* obs_;

  types::TypePtr expand(const types::TypePtr& member);
};

// Structural signature equivalence modulo self names and rigid parameter
// names. Used when unifying two implicit arrow types.
bool sig_equal(const types::Signature& a, const types::Signature& b);

}  // namespace implicitml

#endif

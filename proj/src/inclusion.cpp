#include "implicitml/inclusion.hpp"

#include "implicitml/unify.hpp"

namespace implicitml {

using namespace types;

namespace {

bool set_why(std::string* why, const std::string& msg) {
  if (why) *why = msg;
  return false;
}

}  // namespace

bool signature_includes(const env::Env& e, TypeStore& store, ObligationSet* obs,
                        const env::ModuleInfoPtr& candidate, const Signature& target,
                        std::string* why) {
  if (candidate->is_functor || !candidate->sig)
    return set_why(why, "candidate is a functor, not a module");
  Unifier u(store, e, obs);
  auto tgt_sig = std::make_shared<Signature>(target);
  auto tgt = subst_path_sig(tgt_sig, target.self, candidate->nf);

  for (auto& item : tgt->items) {
    const SigEntry* cand = candidate->sig->find(item.kind, item.name);
    if (!cand) {
      const char* what = item.kind == SigEntry::Type    ? "type"
                         : item.kind == SigEntry::Val   ? "value"
                                                        : "module";
      return set_why(why, std::string("missing ") + what + " member '" + item.name + "'");
    }
    switch (item.kind) {
      case SigEntry::Type: {
        if (cand->type.params.size() != item.type.params.size())
          return set_why(why, "type member '" + item.name + "' has a different arity");
        if (item.type.manifest) {
          std::vector<TypePtr> args;
          for (int r : item.type.params) args.push_back(mk_rigid(r));
          auto lhs = mk_member(candidate->nf, item.name, std::move(args));
          if (!u.unify(lhs, item.type.manifest))
            return set_why(why, "type member '" + item.name + "' does not match its manifest");
        }
        break;
      }
      case SigEntry::Val: {
        Scheme cs = cand->val;
        cs.body = subst_path(cs.body, candidate->sig->self, candidate->nf);
        auto want = u.skolemize(item.val);
        auto have = u.instantiate(cs);
        if (!u.unify(have, want))
          return set_why(why, "value member '" + item.name + "' has an incompatible type");
        break;
      }
      case SigEntry::Module: {
        auto sub_path = ModPath::mk_proj(candidate->nf, item.name);
        env::ModuleInfoPtr sub;
        try {
          sub = env::resolve_module(e, sub_path, Span{});
        } catch (const CompileError&) {
          return set_why(why, "module member '" + item.name + "' cannot be resolved");
        }
        if (item.mod.alias) {
          ModPathPtr want;
          try {
            want = env::resolve_module(e, item.mod.alias, Span{})->nf;
          } catch (const CompileError&) {
            want = item.mod.alias;
          }
          if (!path_equal(*sub->nf, *want))
            return set_why(why, "module member '" + item.name + "' is not an alias of '" +
                                    path_str(*want) + "'");
        }
        if (item.mod.sig) {
          if (!signature_includes(e, store, obs, sub, *item.mod.sig, why)) return false;
        }
        break;
      }
    }
  }
  return true;
}

}  // namespace implicitml

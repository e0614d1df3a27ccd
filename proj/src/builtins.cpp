#include "implicitml/builtins.hpp"

#include "implicitml/parser.hpp"
#include "implicitml/sigelab.hpp"

namespace implicitml {

using namespace types;

namespace {

struct BuiltinVal {
  const char* name;
  const char* type;
};

const BuiltinVal kValues[] = {
    {"+", "int -> int -> int"},
    {"-", "int -> int -> int"},
    {"*", "int -> int -> int"},
    {"/", "int -> int -> int"},
    {"mod", "int -> int -> int"},
    {"+.", "float -> float -> float"},
    {"-.", "float -> float -> float"},
    {"*.", "float -> float -> float"},
    {"/.", "float -> float -> float"},
    {"=", "'a -> 'a -> bool"},
    {"<>", "'a -> 'a -> bool"},
    {"<", "'a -> 'a -> bool"},
    {">", "'a -> 'a -> bool"},
    {"<=", "'a -> 'a -> bool"},
    {">=", "'a -> 'a -> bool"},
    {"compare", "'a -> 'a -> int"},
    {"^", "string -> string -> string"},
    {"not", "bool -> bool"},
    {"string_of_int", "int -> string"},
    {"string_of_float", "float -> string"},
    {"string_of_bool", "bool -> string"},
    {"print_string", "string -> unit"},
    {"print_endline", "string -> unit"},
    {"print_int", "int -> unit"},
    {"sqrt", "float -> float"},
    {"float", "int -> float"},
    {"float_of_int", "int -> float"},
    {"fst", "'a * 'b -> 'a"},
    {"snd", "'a * 'b -> 'b"},
    {"ignore", "'a -> unit"},
};

struct BuiltinMod {
  const char* name;
  const char* sig;
};

const BuiltinMod kModules[] = {
    {"List",
     "sig"
     " val map : ('a -> 'b) -> 'a list -> 'b list"
     " val map2 : ('a -> 'b -> 'c) -> 'a list -> 'b list -> 'c list"
     " val fold_left : ('a -> 'b -> 'a) -> 'a -> 'b list -> 'a"
     " val concat : 'a list list -> 'a list"
     " val append : 'a list -> 'a list -> 'a list"
     " val length : 'a list -> int"
     " val rev : 'a list -> 'a list"
     " val sort : ('a -> 'a -> int) -> 'a list -> 'a list"
     " end"},
    {"String",
     "sig"
     " val concat : string -> string list -> string"
     " val length : string -> int"
     " end"},
};

}  // namespace

env::Env builtin_env(TypeStore& store) {
  env::Env e;
  for (auto& m : kModules) {
    TypeElab te(e, store);
    auto sig = te.modtype(*parse_module_type(m.sig));
    auto info = std::make_shared<env::ModuleInfo>();
    info->sig = sig;
    info->nf = ModPath::mk_name(m.name);
    info->access = info->nf;
    info->display = m.name;
    e.modules[m.name] = info;
  }
  for (auto& v : kValues) {
    TypeElab te(e, store);
    te.policy = TypeElab::Scheme;
    Scheme s;
    s.body = te.type(*parse_type(v.type));
    s.vars = te.take_scheme_vars();
    e.values[v.name] = std::move(s);
  }
  return e;
}

}  // namespace implicitml

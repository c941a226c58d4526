#pragma once

// Simply-typed lambda-calculus and its parallel call-by-value encoding into
// the localised pi-calculus.

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "piterm/impure.hpp"
#include "piterm/syntax.hpp"

namespace piterm {

struct Lambda;
using LambdaTerm = std::shared_ptr<const Lambda>;

struct Lambda {
  enum class Kind { Var, Abs, App };

  Kind kind = Kind::Var;
  std::string name;  // Var, and the parameter of Abs
  LambdaTerm fn;     // App function, Abs body
  LambdaTerm arg;    // App argument

  static LambdaTerm var(std::string name);
  static LambdaTerm abs(std::string param, LambdaTerm body);
  static LambdaTerm app(LambdaTerm fn, LambdaTerm arg);
};

/// Base types, arrows, and variables (only during inference).
struct LambdaType {
  enum class Kind { Base, Arrow, Var };

  Kind kind = Kind::Base;
  std::string name;
  unsigned var = 0;
  std::vector<LambdaType> args;  // Arrow: {from, to}

  static LambdaType base(std::string name) { return {Kind::Base, std::move(name), 0, {}}; }
  static LambdaType arrow(LambdaType from, LambdaType to) {
    return {Kind::Arrow, {}, 0, {std::move(from), std::move(to)}};
  }
  static LambdaType variable(unsigned id) { return {Kind::Var, {}, id, {}}; }

  friend bool operator==(const LambdaType&, const LambdaType&) = default;
};

using LambdaContext = std::map<std::string, LambdaType>;

class IllTypedLambda : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string to_string(const LambdaType& t);
std::string to_string(const LambdaTerm& m);

struct LambdaProgram {
  LambdaContext context;
  LambdaTerm term;
};

/// `.lam` files: `name : type` declarations, then a term written with `\x.`,
/// juxtaposition and parentheses. `--` starts a comment.
LambdaProgram parse_lambda(std::string_view text);
LambdaType parse_lambda_type(std::string_view text);
LambdaTerm parse_lambda_term(std::string_view text);

/// Principal type of M under the context. Throws IllTypedLambda.
LambdaType check_stlc(const LambdaContext& ctx, const LambdaTerm& m);

/// [x]p = p<x>; [\x.M]p = (new y)(!y(x,q).[M]q | p<y>);
/// [M N]p = (new q,r)([M]q | [N]r | q(f).r(z).f<z,p>).
/// Free lambda variables become free names with the same spelling.
Process encode(const LambdaTerm& m, const Name& p);

/// The encoding with every restriction functional and annotated at level 0,
/// together with the environment typing its free names and p.
struct TypedEncoding {
  Process process;
  ImpureEnv env;
};

TypedEncoding encode_typed(const LambdaContext& ctx, const LambdaTerm& m, const Name& p);

/// The channel type of a lambda type: base types become o0[Unit] and
/// s -> t becomes o0[[s], o0[[t]]].
Type channel_type(const LambdaType& t);

}  // namespace piterm

#pragma once

// Typing for a calculus mixing functional names (defined once by replicated
// inputs, used in output elsewhere) with level-controlled imperative names.

#include <optional>
#include <string_view>

#include "piterm/syntax.hpp"
#include "piterm/typing.hpp"

namespace piterm {

/// The single name allowed to carry functional replicated inputs. Its type
/// is an output type o^k[T...].
struct Isolated {
  Name name;
  Type type;
};

struct ImpureEnv {
  TypeEnv gamma;
  std::optional<Isolated> isolated;  // empty: the dummy name
};

/// Environment file format for the impure system: `name : type` lines, where
/// a line starting with `fun` declares the isolated functional name.
ImpureEnv parse_impure_env(std::string_view text);

/// Weight of P. Restrictions must be annotated; `fun` marks functional ones.
/// A linear input on a functional name reads the payload from the declared
/// type and adds no level constraint, like an input in the base system.
unsigned check_impure(const ImpureEnv& env, const Process& p);

/// A process congruent to P arranged so that check_impure can succeed on it:
/// imperative restrictions outermost, then the definitions of the isolated
/// name, then functional names without definitions, then each functional
/// definition under its own restriction, names that are referenced first.
Process impure_arrangement(const ImpureEnv& env, const Process& p);

}  // namespace piterm

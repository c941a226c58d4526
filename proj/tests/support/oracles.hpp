#pragma once

// Independent oracles and generators shared by the unit tests and the
// acceptance runner.

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "piterm/inference.hpp"
#include "piterm/semantics.hpp"
#include "piterm/syntax.hpp"
#include "piterm/typing.hpp"

namespace oracle {

using namespace piterm;

// --- multisets -------------------------------------------------------------

/// All multisets (sorted vectors) of size <= max_size over {0..max_value}.
std::vector<std::vector<unsigned>> all_multisets(std::size_t max_size, unsigned max_value);

/// Brute-force multiset extension: some non-empty X taken out of m1 and some
/// Y put in, every element of Y below an element of X, gives m2.
bool multiset_greater_bruteforce(const std::vector<unsigned>& m1, const std::vector<unsigned>& m2);

// --- subtyping ---------------------------------------------------------------

struct SubtypeReport {
  std::size_t classes = 0;
  std::size_t types = 0;
  std::size_t pairs = 0;
  std::size_t related = 0;
  std::size_t mismatches = 0;
  std::string first_mismatch;
};

/// Enumerates Unit and every channel type with at most `max_nodes` channel
/// constructors, payload arity <= max_arity, levels <= max_level and any
/// capability; computes the reflexive-transitive closure of the subtyping
/// axioms class by class and compares it with piterm::subtype on every pair.
SubtypeReport check_subtype_against_closure(unsigned max_nodes, unsigned max_level,
                                            unsigned max_arity);

// --- level graphs ------------------------------------------------------------

LevelGraph random_graph(std::mt19937& rng, std::size_t nodes, std::size_t edges);

/// Every assignment with levels <= max_level satisfying the edges, with
/// replicated-input subjects at level 1 or more.
std::vector<std::vector<unsigned>> satisfying_assignments(const LevelGraph& g, unsigned max_level);

// --- inference completeness ---------------------------------------------------

/// True if some annotation of the free and restricted names with levels
/// <= max_level (output capability on carried types, # or o on free names,
/// # on restricted names) makes check succeed.
bool typable_by_enumeration(const Process& p, unsigned max_level);

/// Localised, simply-typable processes, typable and untypable.
std::vector<std::string> lpi_corpus();

/// `.lam` programs of the simply-typed lambda-calculus.
std::vector<std::string> stlc_corpus();

// --- typed process generator ------------------------------------------------

struct GenConfig {
  unsigned max_level = 4;
  unsigned max_depth = 4;
  unsigned top_components = 5;
};

struct TypedCase {
  TypeEnv env;
  Process process;
};

/// A random process that checks under its environment by construction.
TypedCase generate_typed(std::mt19937& rng, const GenConfig& cfg = {});

/// A random process structurally congruent to p: components shuffled and
/// regrouped, nil components added, restrictions pushed to their users.
Process congruent_variant(const Process& p, std::mt19937& rng);

struct PropertyStats {
  std::size_t cases = 0;
  std::size_t edges = 0;
  std::size_t subject_reduction_failures = 0;
  std::size_t measure_failures = 0;
  std::size_t congruence_failures = 0;
  std::size_t bound_exceeded = 0;
  std::size_t diverged = 0;
  std::size_t generator_failures = 0;
  std::string first_failure;
};

/// Runs subject reduction, measure decrease, congruence invariance and
/// termination on `cases` generated processes.
PropertyStats run_properties(unsigned seed, std::size_t cases, std::size_t state_cap,
                             const GenConfig& cfg = {});

}  // namespace oracle

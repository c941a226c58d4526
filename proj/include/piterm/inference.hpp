#pragma once

// Type inference for the localised fragment: simple types by unification,
// then a graph of level constraints solved by SCC condensation.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "piterm/syntax.hpp"
#include "piterm/typing.hpp"

namespace piterm {

class InferenceError : public std::runtime_error {
 public:
  enum class Kind { NotLocalised, UnificationFailure, OccursCheckFailure, CyclicLevelConstraint };

  InferenceError(Kind kind, const std::string& message, std::vector<std::string> witness = {});

  Kind kind() const { return kind_; }
  /// For cyclic constraints: node labels along a cycle through a strict edge.
  const std::vector<std::string>& witness() const { return witness_; }

 private:
  Kind kind_;
  std::vector<std::string> witness_;
};

std::string to_string(InferenceError::Kind kind);

/// Channel shapes over Unit, Nat and type variables. Capabilities and levels
/// of the stored types are meaningless (always # and 0).
struct SimpleEnv {
  std::map<Name, Type> types;

  const Type& at(const Name& n) const;
};

/// Most general simple typing of every name of P, free or bound. Restricted
/// names always get a channel type.
SimpleEnv infer_simple(const Process& p);

/// True iff no received name is used as the subject of an input.
bool locality_check(const Process& p);

struct LevelGraph {
  enum class EdgeKind { GE, GT };

  /// A node is a path: a free or restricted name followed by payload positions.
  struct Node {
    Name root;
    std::vector<std::size_t> path;
    std::vector<std::string> labels;
  };
  struct Edge {
    std::size_t src;
    std::size_t dst;
    EdgeKind kind;
    friend auto operator<=>(const Edge&, const Edge&) = default;
  };

  std::vector<Node> nodes;
  std::vector<Edge> edges;  // sorted, without duplicates
  /// Subjects of replicated inputs: a replicated input needs a level above
  /// the weight of its body, so these nodes sit at level 1 or more.
  std::vector<std::size_t> replicated;

  std::optional<std::size_t> find(const Name& root, const std::vector<std::size_t>& path) const;
  /// The node carrying `label`, if any.
  std::optional<std::size_t> find_label(const std::string& label) const;
};

/// Node creation only: one node per free or restricted name, one per payload
/// position of each channel, received names added as labels.
LevelGraph build_nodes(const Process& p, const SimpleEnv& env);

/// Nodes plus the constraint edges of outputs and replicated inputs.
/// Requires locality_check(p).
LevelGraph build_graph(const Process& p, const SimpleEnv& env);

enum class InferMode { Flexible, DSEquality };

/// Least levels satisfying every edge. In DSEquality mode the two ends of
/// every GE edge are forced to the same level. Throws CyclicLevelConstraint.
std::vector<unsigned> assign_levels(const LevelGraph& g, InferMode mode = InferMode::Flexible);

/// `NODE <id>: {labels}` lines, then sorted `EDGE <src> >= <dst>` and
/// `EDGE <src> > <dst>` lines; levels are appended to node lines when given.
std::string dump_graph(const LevelGraph& g, const std::vector<unsigned>* levels = nullptr);

struct Inference {
  TypeEnv env;            // free names
  TypeEnv restricted;     // annotations written into `process`
  Process process;        // P with every restriction annotated
  unsigned weight = 0;
  SimpleEnv simple;
  LevelGraph graph;
  std::vector<unsigned> levels;
};

/// Builds the typing from simple types and levels and annotates P.
Inference reconstruct(const Process& p, const SimpleEnv& env, const LevelGraph& g,
                      const std::vector<unsigned>& levels);

/// The whole pipeline; the result is verified with check.
Inference infer(const Process& p, InferMode mode = InferMode::Flexible);

}  // namespace piterm

#pragma once

// Structural congruence, reduction and bounded exhaustive execution.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "piterm/syntax.hpp"
#include "piterm/typing.hpp"

namespace piterm {

struct Restriction {
  Name name;
  std::optional<Type> annotation;
  ResKind kind = ResKind::Imperative;
};

/// Restrictions hoisted to the top, then a flat list of threads (outputs and
/// input-prefixed processes). Prefix bodies are normalized recursively.
struct NormalProcess {
  std::vector<Restriction> restrictions;
  std::vector<Process> components;
};

NormalProcess normalize(const Process& p);

/// Rebuilds a process: restrictions outermost, then the components in order.
Process to_process(const NormalProcess& n);

/// Canonical serialization of the congruence class: bound names are renamed
/// by position and components are sorted. Equal keys imply congruence.
std::string canonical_key(const Process& p);
std::string canonical_key(const NormalProcess& n);

bool congruent(const Process& a, const Process& b);

struct Successor {
  Process process;  // normalized
  std::string key;
};

/// All one-step reducts, normalized, deduplicated up to congruence and sorted
/// by canonical key.
std::vector<Successor> successors(const Process& p);
std::vector<Process> step(const Process& p);

enum class Verdict { Terminated, BoundExceeded, DivergenceWitness };

std::string to_string(Verdict v);

struct Bounds {
  std::size_t max_states = 100000;
  std::size_t max_depth = 100000;
};

struct ExecutionReport {
  Verdict verdict = Verdict::Terminated;
  std::size_t steps_explored = 0;  // reduction edges examined
  std::size_t states = 0;          // distinct states up to congruence
  std::size_t max_depth = 0;
  std::vector<std::string> witness;  // cycle of canonical states, first repeated last
  std::vector<Measure> measure_trace;  // per state, in discovery order (certified runs)
  std::vector<std::string> trace;      // one line per edge when requested
};

class CertificationFailure : public std::runtime_error {
 public:
  CertificationFailure(const std::string& message, std::string parent, std::string child)
      : std::runtime_error(message), parent_(std::move(parent)), child_(std::move(child)) {}

  const std::string& parent() const { return parent_; }
  const std::string& child() const { return child_; }

 private:
  std::string parent_;
  std::string child_;
};

/// Level-synchronous breadth-first exploration. Successors of a frontier are
/// computed concurrently and merged in frontier order, so the report does not
/// depend on the schedule.
ExecutionReport explore(const Process& p, Bounds bounds, bool record_trace = false);

/// Single-threaded reference implementation with the same report.
ExecutionReport explore_serial(const Process& p, Bounds bounds, bool record_trace = false);

/// Explores while checking that the measure strictly decreases along every
/// edge. Throws TypeError if P is ill typed and CertificationFailure on a
/// violated edge or a divergence witness.
ExecutionReport certified_run(const TypeEnv& env, const Process& p, Bounds bounds,
                              bool parallel = true);

}  // namespace piterm

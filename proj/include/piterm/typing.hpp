#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "piterm/syntax.hpp"

namespace piterm {

enum class ErrorCode {
  Capability,          // CAP
  PayloadMismatch,     // PAY
  LevelViolation,      // LVL
  UnboundName,         // UNB
  MissingAnnotation,   // ANN
  Sort,                // SRT
  FunctionalNotIsolated,  // FUN
};

/// Stable three-letter code used in machine-readable output.
std::string code_of(ErrorCode code);

class TypeError : public std::runtime_error {
 public:
  TypeError(ErrorCode code, const std::string& message)
      : std::runtime_error(code_of(code) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Finite map from names to types; each name is bound at most once.
class TypeEnv {
 public:
  TypeEnv() = default;
  TypeEnv(std::initializer_list<std::pair<const Name, Type>> init) : bindings_(init) {}

  /// Throws std::invalid_argument if the name is already bound.
  void bind(const Name& n, Type t);
  /// Adds or replaces a binding.
  void set(const Name& n, Type t) { bindings_[n] = std::move(t); }
  void erase(const Name& n) { bindings_.erase(n); }

  bool contains(const Name& n) const { return bindings_.count(n) != 0; }
  const Type* find(const Name& n) const;
  const Type& at(const Name& n) const;

  const std::map<Name, Type>& bindings() const { return bindings_; }
  std::size_t size() const { return bindings_.size(); }

 private:
  std::map<Name, Type> bindings_;
};

std::string to_string(const TypeEnv& env);

/// Multiset of natural numbers, kept sorted.
class Measure {
 public:
  Measure() = default;
  explicit Measure(std::vector<unsigned> elems);

  void insert(unsigned k);
  void merge(const Measure& other);

  const std::vector<unsigned>& elements() const { return elems_; }
  bool empty() const { return elems_.empty(); }
  std::size_t size() const { return elems_.size(); }

  friend bool operator==(const Measure&, const Measure&) = default;

 private:
  std::vector<unsigned> elems_;
};

std::string to_string(const Measure& m);

/// The multiset extension of > on naturals: after cancelling the largest
/// common sub-multiset, what is left of `greater` is non-empty and every
/// element left of `smaller` is strictly below one of its elements.
bool multiset_greater(const Measure& greater, const Measure& smaller);

/// Subtyping with capabilities and levels. Input is covariant in the payload
/// and may lower the level; output is contravariant and may raise it.
bool subtype(const Type& s, const Type& u);

/// Minimal type of a value.
Type value_type(const TypeEnv& env, const Value& v);

/// Minimal weight of P under env, with subsumption on subjects and payloads.
/// Every restriction must carry a type annotation.
unsigned check(const TypeEnv& env, const Process& p);

/// The restricted system with the # capability only: subjects must be # and
/// payloads must match the declared types exactly.
unsigned check_ds(const TypeEnv& env, const Process& p);

/// Multiset of declared levels of the outputs that are not under a
/// replication. Runs check first and propagates its errors.
Measure measure(const TypeEnv& env, const Process& p);

}  // namespace piterm

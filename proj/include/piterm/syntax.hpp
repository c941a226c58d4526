#pragma once

// Abstract syntax of the asynchronous polyadic pi-calculus: names, values,
// types and processes. Every node is immutable once built, so processes can
// be shared freely between threads.

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace piterm {

/// A channel name. Identity is the integer id; the display string is only
/// used for printing. Free names are interned by spelling so that the same
/// spelling in a process and in an environment file denotes the same name.
class Name {
 public:
  Name();

  static Name free(std::string_view spelling);
  static Name fresh(std::string_view spelling);

  std::uint32_t id() const { return id_; }
  const std::string& display() const { return *display_; }
  bool valid() const { return id_ != 0; }

  friend bool operator==(const Name& a, const Name& b) { return a.id_ == b.id_; }
  friend auto operator<=>(const Name& a, const Name& b) { return a.id_ <=> b.id_; }

 private:
  Name(std::uint32_t id, const std::string* display) : id_(id), display_(display) {}

  std::uint32_t id_;
  const std::string* display_;
};

enum class Cap { Sharp, In, Out };

/// Channel types carry a capability, a level and a payload list. Var only
/// appears while inferring types.
struct Type {
  enum class Kind { Unit, Nat, Chan, Var };

  Kind kind = Kind::Unit;
  Cap cap = Cap::Sharp;
  unsigned level = 0;
  std::vector<Type> payload;
  unsigned var = 0;

  static Type unit() { return {}; }
  static Type nat() { return Type{Kind::Nat, Cap::Sharp, 0, {}, 0}; }
  static Type chan(Cap cap, unsigned level, std::vector<Type> payload) {
    return Type{Kind::Chan, cap, level, std::move(payload), 0};
  }
  static Type variable(unsigned id) { return Type{Kind::Var, Cap::Sharp, 0, {}, id}; }

  bool is_chan() const { return kind == Kind::Chan; }

  friend bool operator==(const Type&, const Type&) = default;
};

std::string to_string(Cap cap);
std::string to_string(const Type& type);

struct Value {
  enum class Kind { Star, Ref, Nat, Add, Mul };

  Kind kind = Kind::Star;
  Name name;
  std::uint64_t nat = 0;
  std::shared_ptr<const Value> lhs;
  std::shared_ptr<const Value> rhs;

  static Value star() { return {}; }
  static Value ref(Name n) {
    Value v;
    v.kind = Kind::Ref;
    v.name = n;
    return v;
  }
  static Value number(std::uint64_t n) {
    Value v;
    v.kind = Kind::Nat;
    v.nat = n;
    return v;
  }
  static Value add(Value a, Value b);
  static Value mul(Value a, Value b);

  bool is_name() const { return kind == Kind::Ref; }
  bool is_arith() const { return kind == Kind::Add || kind == Kind::Mul; }
};

bool operator==(const Value& a, const Value& b);

/// Folds arithmetic whose operands are all literals. Expressions over names
/// of sort Nat are left symbolic.
Value evaluate(const Value& v);

enum class ResKind { Imperative, Functional };

class Process;

namespace detail {
struct ProcessNode;
}

class Process {
 public:
  enum class Kind { Nil, Par, Out, Res, In, RepIn };

  Process() = default;  // Nil

  static Process nil();
  static Process par(Process left, Process right);
  static Process par(const std::vector<Process>& parts);
  static Process out(Name subject, std::vector<Value> payload);
  static Process res(Name bound, std::optional<Type> annotation, ResKind kind, Process body);
  static Process in(Name subject, std::vector<Name> params, Process body);
  static Process rep_in(Name subject, std::vector<Name> params, Process body);

  Kind kind() const;
  bool is_input() const { return kind() == Kind::In || kind() == Kind::RepIn; }

  // Out / In / RepIn
  const Name& subject() const;
  // Out
  const std::vector<Value>& payload() const;
  // In / RepIn
  const std::vector<Name>& params() const;
  // Res
  const Name& bound() const;
  const std::optional<Type>& annotation() const;
  ResKind res_kind() const;
  // Res / In / RepIn
  const Process& body() const;
  // Par
  const Process& left() const;
  const Process& right() const;

  bool same_node(const Process& other) const { return node_ == other.node_; }

 private:
  explicit Process(std::shared_ptr<const detail::ProcessNode> node) : node_(std::move(node)) {}
  const detail::ProcessNode& fields() const;
  std::shared_ptr<const detail::ProcessNode> node_;
};

namespace detail {
struct ProcessNode {
  Process::Kind kind = Process::Kind::Nil;
  Name subject;
  std::vector<Value> payload;
  std::vector<Name> params;
  std::optional<Type> annotation;
  ResKind res_kind = ResKind::Imperative;
  Process first;
  Process second;
};
}  // namespace detail

class SortError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input with no parameters receives a single unit value, and an output
/// with no values sends one; these are the abbreviations `a().P` and `a<>`.
bool arity_matches(std::size_t params, std::size_t values);

std::set<Name> free_names(const Process& p);
std::set<Name> free_names(const Value& v);
std::set<Name> bound_names(const Process& p);
/// Names bound by an input prefix anywhere in p.
std::set<Name> received_names(const Process& p);
std::set<Name> restricted_names(const Process& p);

/// Simultaneous capture-avoiding substitution. Every binder of the result is
/// renamed to a fresh name, which keeps all bound names pairwise distinct even
/// when the same replicated body is instantiated repeatedly. Output payloads
/// whose operands all become literals are folded.
Process substitute(const Process& p, const std::map<Name, Value>& subst);
Process substitute(const Process& p, Name x, const Value& v);

/// Display strings that are unique within a process. Free names keep their
/// spelling; bound names that clash get a numeric suffix.
class NameDisplay {
 public:
  NameDisplay() = default;
  explicit NameDisplay(const Process& p);

  void add(const Name& n);
  void add_all(const Process& p);
  std::string operator()(const Name& n) const;

 private:
  std::unordered_map<std::uint32_t, std::string> shown_;
  std::set<std::string> taken_;
};

std::string to_string(const Value& v, const NameDisplay& names);
std::string to_string(const Process& p, const NameDisplay& names);
std::string to_string(const Process& p);

/// Alpha-equivalence: equal up to a consistent renaming of bound names.
bool alpha_equivalent(const Process& a, const Process& b);

}  // namespace piterm

#include <optional>

#include "piterm/inference.hpp"

namespace piterm {

InferenceError::InferenceError(Kind kind, const std::string& message,
                               std::vector<std::string> witness)
    : std::runtime_error(to_string(kind) + ": " + message),
      kind_(kind),
      witness_(std::move(witness)) {}

std::string to_string(InferenceError::Kind kind) {
  switch (kind) {
    case InferenceError::Kind::NotLocalised: return "NotLocalised";
    case InferenceError::Kind::UnificationFailure: return "UnificationFailure";
    case InferenceError::Kind::OccursCheckFailure: return "OccursCheckFailure";
    case InferenceError::Kind::CyclicLevelConstraint: return "CyclicLevelConstraint";
  }
  return "?";
}

const Type& SimpleEnv::at(const Name& n) const {
  auto it = types.find(n);
  if (it == types.end()) throw std::out_of_range("no simple type for '" + n.display() + "'");
  return it->second;
}

namespace {

class Unifier {
 public:
  Type fresh() {
    bindings_.emplace_back();
    return Type::variable(static_cast<unsigned>(bindings_.size() - 1));
  }

  Type resolve(const Type& t) const {
    Type r = shallow(t);
    for (Type& s : r.payload) s = resolve(s);
    return r;
  }

  void unify(const Type& a0, const Type& b0, const std::string& where) {
    Type a = shallow(a0), b = shallow(b0);
    if (a.kind == Type::Kind::Var && b.kind == Type::Kind::Var && a.var == b.var) return;
    if (a.kind == Type::Kind::Var) return bind(a.var, b, where);
    if (b.kind == Type::Kind::Var) return bind(b.var, a, where);
    if (a.kind != b.kind)
      throw InferenceError(InferenceError::Kind::UnificationFailure,
                           "sort clash at " + where + ": " + to_string(resolve(a)) + " vs " +
                               to_string(resolve(b)));
    if (a.kind != Type::Kind::Chan) return;
    if (a.payload.size() != b.payload.size())
      throw InferenceError(InferenceError::Kind::UnificationFailure,
                           "arity clash at " + where + ": " + std::to_string(a.payload.size()) +
                               " vs " + std::to_string(b.payload.size()));
    for (std::size_t i = 0; i < a.payload.size(); ++i) unify(a.payload[i], b.payload[i], where);
  }

 private:
  std::vector<std::optional<Type>> bindings_;

  Type shallow(Type t) const {
    while (t.kind == Type::Kind::Var && bindings_[t.var]) t = *bindings_[t.var];
    return t;
  }

  bool occurs(unsigned v, const Type& t) const {
    Type r = shallow(t);
    if (r.kind == Type::Kind::Var) return r.var == v;
    for (const Type& s : r.payload)
      if (occurs(v, s)) return true;
    return false;
  }

  void bind(unsigned v, const Type& t, const std::string& where) {
    if (occurs(v, t))
      throw InferenceError(InferenceError::Kind::OccursCheckFailure,
                           "recursive type required at " + where);
    bindings_[v] = t;
  }
};

class SimpleInference {
 public:
  SimpleEnv run(const Process& p) {
    walk(p);
    for (const Name& r : restricted_) {
      Type t = u_.resolve(type_of(r));
      if (t.kind == Type::Kind::Var) u_.unify(t, Type::chan(Cap::Sharp, 0, {u_.fresh()}), r.display());
    }
    SimpleEnv env;
    for (const auto& [n, t] : vars_) env.types.emplace(n, u_.resolve(t));
    return env;
  }

 private:
  Unifier u_;
  std::map<Name, Type> vars_;
  std::vector<Name> restricted_;

  Type type_of(const Name& n) {
    auto it = vars_.find(n);
    if (it == vars_.end()) it = vars_.emplace(n, u_.fresh()).first;
    return it->second;
  }

  Type value(const Value& v) {
    switch (v.kind) {
      case Value::Kind::Star: return Type::unit();
      case Value::Kind::Nat: return Type::nat();
      case Value::Kind::Ref: return type_of(v.name);
      case Value::Kind::Add:
      case Value::Kind::Mul:
        u_.unify(value(*v.lhs), Type::nat(), "arithmetic");
        u_.unify(value(*v.rhs), Type::nat(), "arithmetic");
        return Type::nat();
    }
    return Type::unit();
  }

  void walk(const Process& p) {
    switch (p.kind()) {
      case Process::Kind::Nil: break;
      case Process::Kind::Par:
        walk(p.left());
        walk(p.right());
        break;
      case Process::Kind::Res:
        restricted_.push_back(p.bound());
        type_of(p.bound());
        walk(p.body());
        break;
      case Process::Kind::Out: {
        std::vector<Type> payload;
        for (const Value& v : p.payload()) payload.push_back(value(v));
        if (payload.empty()) payload.push_back(Type::unit());
        u_.unify(type_of(p.subject()), Type::chan(Cap::Sharp, 0, std::move(payload)),
                 "output on '" + p.subject().display() + "'");
        break;
      }
      case Process::Kind::In:
      case Process::Kind::RepIn: {
        std::vector<Type> payload;
        for (const Name& x : p.params()) payload.push_back(type_of(x));
        if (payload.empty()) payload.push_back(Type::unit());
        u_.unify(type_of(p.subject()), Type::chan(Cap::Sharp, 0, std::move(payload)),
                 "input on '" + p.subject().display() + "'");
        walk(p.body());
        break;
      }
    }
  }
};

}  // namespace

SimpleEnv infer_simple(const Process& p) { return SimpleInference().run(p); }

bool locality_check(const Process& p) {
  std::set<Name> received = received_names(p);
  std::vector<Process> stack{p};
  while (!stack.empty()) {
    Process q = stack.back();
    stack.pop_back();
    switch (q.kind()) {
      case Process::Kind::Nil:
      case Process::Kind::Out: break;
      case Process::Kind::Par:
        stack.push_back(q.left());
        stack.push_back(q.right());
        break;
      case Process::Kind::Res: stack.push_back(q.body()); break;
      case Process::Kind::In:
      case Process::Kind::RepIn:
        if (received.count(q.subject())) return false;
        stack.push_back(q.body());
        break;
    }
  }
  return true;
}

}  // namespace piterm

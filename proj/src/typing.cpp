#include "piterm/typing.hpp"

#include <algorithm>

namespace piterm {

std::string code_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::Capability: return "CAP";
    case ErrorCode::PayloadMismatch: return "PAY";
    case ErrorCode::LevelViolation: return "LVL";
    case ErrorCode::UnboundName: return "UNB";
    case ErrorCode::MissingAnnotation: return "ANN";
    case ErrorCode::Sort: return "SRT";
    case ErrorCode::FunctionalNotIsolated: return "FUN";
  }
  return "ERR";
}

void TypeEnv::bind(const Name& n, Type t) {
  if (!bindings_.emplace(n, std::move(t)).second)
    throw std::invalid_argument("name '" + n.display() + "' is already bound");
}

const Type* TypeEnv::find(const Name& n) const {
  auto it = bindings_.find(n);
  return it == bindings_.end() ? nullptr : &it->second;
}

const Type& TypeEnv::at(const Name& n) const {
  if (const Type* t = find(n)) return *t;
  throw TypeError(ErrorCode::UnboundName, "unbound name '" + n.display() + "'");
}

std::string to_string(const TypeEnv& env) {
  std::string s;
  for (const auto& [n, t] : env.bindings()) s += n.display() + " : " + to_string(t) + "\n";
  return s;
}

Measure::Measure(std::vector<unsigned> elems) : elems_(std::move(elems)) {
  std::sort(elems_.begin(), elems_.end());
}

void Measure::insert(unsigned k) {
  elems_.insert(std::upper_bound(elems_.begin(), elems_.end(), k), k);
}

void Measure::merge(const Measure& other) {
  std::vector<unsigned> merged;
  merged.reserve(elems_.size() + other.elems_.size());
  std::merge(elems_.begin(), elems_.end(), other.elems_.begin(), other.elems_.end(),
             std::back_inserter(merged));
  elems_ = std::move(merged);
}

std::string to_string(const Measure& m) {
  std::string s = "{";
  for (std::size_t i = 0; i < m.elements().size(); ++i) {
    if (i) s += ",";
    s += std::to_string(m.elements()[i]);
  }
  return s + "}";
}

bool multiset_greater(const Measure& greater, const Measure& smaller) {
  // Remove the common part; both inputs are sorted.
  std::vector<unsigned> only_greater, only_smaller;
  std::set_difference(greater.elements().begin(), greater.elements().end(),
                      smaller.elements().begin(), smaller.elements().end(),
                      std::back_inserter(only_greater));
  std::set_difference(smaller.elements().begin(), smaller.elements().end(),
                      greater.elements().begin(), greater.elements().end(),
                      std::back_inserter(only_smaller));
  if (only_greater.empty()) return false;
  unsigned top = only_greater.back();
  return only_smaller.empty() || only_smaller.back() < top;
}

bool subtype(const Type& s, const Type& u) {
  if (u.kind != Type::Kind::Chan || s.kind != Type::Kind::Chan) {
    return s.kind == u.kind && (s.kind != Type::Kind::Var || s.var == u.var);
  }
  if (s.payload.size() != u.payload.size()) return false;
  switch (u.cap) {
    case Cap::Sharp:
      return s == u;
    case Cap::In:
      if (s.cap == Cap::Out || s.level < u.level) return false;
      for (std::size_t i = 0; i < s.payload.size(); ++i)
        if (!subtype(s.payload[i], u.payload[i])) return false;
      return true;
    case Cap::Out:
      if (s.cap == Cap::In || s.level > u.level) return false;
      for (std::size_t i = 0; i < s.payload.size(); ++i)
        if (!subtype(u.payload[i], s.payload[i])) return false;
      return true;
  }
  return false;
}

Type value_type(const TypeEnv& env, const Value& v) {
  switch (v.kind) {
    case Value::Kind::Star: return Type::unit();
    case Value::Kind::Ref: return env.at(v.name);
    case Value::Kind::Nat: return Type::nat();
    case Value::Kind::Add:
    case Value::Kind::Mul:
      for (const Value* side : {v.lhs.get(), v.rhs.get()}) {
        if (value_type(env, *side).kind != Type::Kind::Nat)
          throw TypeError(ErrorCode::Sort, "arithmetic over a non-Nat value");
      }
      return Type::nat();
  }
  return Type::unit();
}

namespace {

class Checker {
 public:
  Checker(const TypeEnv& env, bool ds) : env_(env), ds_(ds) {}

  unsigned weight(const Process& p) {
    switch (p.kind()) {
      case Process::Kind::Nil: return 0;
      case Process::Kind::Par: return std::max(weight(p.left()), weight(p.right()));
      case Process::Kind::Out: return output(p);
      case Process::Kind::In:
      case Process::Kind::RepIn: return input(p);
      case Process::Kind::Res: {
        if (!p.annotation())
          throw TypeError(ErrorCode::MissingAnnotation,
                          "restriction of '" + p.bound().display() + "' has no type annotation");
        Scoped bound(*this, p.bound(), *p.annotation());
        return weight(p.body());
      }
    }
    return 0;
  }

  Measure fold(const Process& p) {
    Measure m;
    switch (p.kind()) {
      case Process::Kind::Nil:
      case Process::Kind::RepIn: break;
      case Process::Kind::Par:
        m = fold(p.left());
        m.merge(fold(p.right()));
        break;
      case Process::Kind::Out: m.insert(env_.at(p.subject()).level); break;
      case Process::Kind::In: {
        const Type& t = env_.at(p.subject());
        ScopedParams params(*this, p.params(), t.payload);
        m = fold(p.body());
        break;
      }
      case Process::Kind::Res: {
        Scoped bound(*this, p.bound(), *p.annotation());
        m = fold(p.body());
        break;
      }
    }
    return m;
  }

 private:
  TypeEnv env_;
  bool ds_;

  struct Scoped {
    Checker& c;
    Name n;
    std::optional<Type> saved;
    Scoped(Checker& checker, const Name& name, Type t) : c(checker), n(name) {
      if (const Type* old = c.env_.find(n)) saved = *old;
      c.env_.set(n, std::move(t));
    }
    ~Scoped() {
      if (saved) c.env_.set(n, *saved); else c.env_.erase(n);
    }
  };

  struct ScopedParams {
    std::vector<std::unique_ptr<Scoped>> scopes;
    ScopedParams(Checker& c, const std::vector<Name>& params, const std::vector<Type>& types) {
      if (params.size() == types.size()) {
        for (std::size_t i = 0; i < params.size(); ++i)
          scopes.push_back(std::make_unique<Scoped>(c, params[i], types[i]));
      } else if (params.size() == 1 && types.empty()) {
        scopes.push_back(std::make_unique<Scoped>(c, params[0], Type::unit()));
      }
    }
  };

  const Type& channel(const Name& subject, bool want_output) const {
    const Type& t = env_.at(subject);
    const char* use = want_output ? "output" : "input";
    if (!t.is_chan())
      throw TypeError(ErrorCode::Capability,
                      std::string(use) + " on '" + subject.display() + "' of non-channel type " +
                          to_string(t));
    Cap forbidden = want_output ? Cap::In : Cap::Out;
    if (t.cap == forbidden || (ds_ && t.cap != Cap::Sharp))
      throw TypeError(ErrorCode::Capability, std::string(use) + " on '" + subject.display() +
                                                 "' of type " + to_string(t));
    return t;
  }

  static bool unit_abbreviation(const std::vector<Type>& types) {
    return types.size() == 1 && types[0].kind == Type::Kind::Unit;
  }

  unsigned output(const Process& p) {
    const Type& t = channel(p.subject(), true);
    const auto& vals = p.payload();
    auto mismatch = [&](const std::string& why) {
      return TypeError(ErrorCode::PayloadMismatch,
                       "output on '" + p.subject().display() + "' : " + to_string(t) + ": " + why);
    };
    if (vals.size() == t.payload.size()) {
      for (std::size_t i = 0; i < vals.size(); ++i) {
        Type vt = value_type(env_, vals[i]);
        bool ok = ds_ ? vt == t.payload[i] : subtype(vt, t.payload[i]);
        if (!ok)
          throw mismatch("argument " + std::to_string(i + 1) + " has type " + to_string(vt));
      }
    } else if (vals.empty() && unit_abbreviation(t.payload)) {
      // a<> sends the unit value
    } else if (vals.size() == 1 && t.payload.empty()) {
      if (value_type(env_, vals[0]).kind != Type::Kind::Unit) throw mismatch("expected unit");
    } else {
      throw mismatch("arity " + std::to_string(vals.size()));
    }
    return t.level;
  }

  unsigned input(const Process& p) {
    const Type& t = channel(p.subject(), false);
    unsigned level = t.level;
    const auto& params = p.params();
    if (!(params.size() == t.payload.size() || (params.empty() && unit_abbreviation(t.payload)) ||
          (params.size() == 1 && t.payload.empty())))
      throw TypeError(ErrorCode::PayloadMismatch,
                      "input on '" + p.subject().display() + "' : " + to_string(t) + " binds " +
                          std::to_string(params.size()) + " names");
    std::vector<Type> payload = t.payload;
    ScopedParams scope(*this, params, payload);
    unsigned w = weight(p.body());
    if (p.kind() == Process::Kind::In) return w;
    if (level <= w)
      throw TypeError(ErrorCode::LevelViolation,
                      "replicated input on '" + p.subject().display() + "' at level " +
                          std::to_string(level) + " guards a body of weight " + std::to_string(w));
    return 0;
  }
};

}  // namespace

unsigned check(const TypeEnv& env, const Process& p) { return Checker(env, false).weight(p); }

unsigned check_ds(const TypeEnv& env, const Process& p) { return Checker(env, true).weight(p); }

Measure measure(const TypeEnv& env, const Process& p) {
  check(env, p);
  return Checker(env, false).fold(p);
}

}  // namespace piterm

#include "piterm/syntax.hpp"

#include <atomic>
#include <functional>
#include <mutex>
#include <unordered_set>

namespace piterm {

namespace {

struct NameTable {
  std::mutex mutex;
  std::unordered_set<std::string> spellings;
  std::unordered_map<std::string, std::uint32_t> free_ids;
  std::atomic<std::uint32_t> next{1};

  const std::string* intern(std::string_view s) {
    return &*spellings.emplace(s).first;
  }
};

NameTable& table() {
  static NameTable t;
  return t;
}

const std::string kEmpty;

}  // namespace

Name::Name() : id_(0), display_(&kEmpty) {}

Name Name::free(std::string_view spelling) {
  auto& t = table();
  std::lock_guard lock(t.mutex);
  const std::string* shown = t.intern(spelling);
  auto [it, inserted] = t.free_ids.try_emplace(*shown, 0);
  if (inserted) it->second = t.next.fetch_add(1);
  return Name(it->second, shown);
}

Name Name::fresh(std::string_view spelling) {
  auto& t = table();
  const std::string* shown;
  {
    std::lock_guard lock(t.mutex);
    shown = t.intern(spelling);
  }
  return Name(t.next.fetch_add(1), shown);
}

std::string to_string(Cap cap) {
  switch (cap) {
    case Cap::Sharp: return "#";
    case Cap::In: return "i";
    case Cap::Out: return "o";
  }
  return "?";
}

std::string to_string(const Type& type) {
  switch (type.kind) {
    case Type::Kind::Unit: return "Unit";
    case Type::Kind::Nat: return "Nat";
    case Type::Kind::Var: return "'t" + std::to_string(type.var);
    case Type::Kind::Chan: break;
  }
  std::string s = to_string(type.cap) + std::to_string(type.level) + "[";
  for (std::size_t i = 0; i < type.payload.size(); ++i) {
    if (i) s += ", ";
    s += to_string(type.payload[i]);
  }
  return s + "]";
}

Value Value::add(Value a, Value b) {
  Value v;
  v.kind = Kind::Add;
  v.lhs = std::make_shared<const Value>(std::move(a));
  v.rhs = std::make_shared<const Value>(std::move(b));
  return v;
}

Value Value::mul(Value a, Value b) {
  Value v;
  v.kind = Kind::Mul;
  v.lhs = std::make_shared<const Value>(std::move(a));
  v.rhs = std::make_shared<const Value>(std::move(b));
  return v;
}

bool operator==(const Value& a, const Value& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Value::Kind::Star: return true;
    case Value::Kind::Ref: return a.name == b.name;
    case Value::Kind::Nat: return a.nat == b.nat;
    case Value::Kind::Add:
    case Value::Kind::Mul: return *a.lhs == *b.lhs && *a.rhs == *b.rhs;
  }
  return false;
}

Value evaluate(const Value& v) {
  if (!v.is_arith()) return v;
  Value l = evaluate(*v.lhs);
  Value r = evaluate(*v.rhs);
  if (l.kind == Value::Kind::Nat && r.kind == Value::Kind::Nat) {
    return Value::number(v.kind == Value::Kind::Add ? l.nat + r.nat : l.nat * r.nat);
  }
  return v.kind == Value::Kind::Add ? Value::add(l, r) : Value::mul(l, r);
}

// ---------------------------------------------------------------------------
// Process construction and access

namespace {

std::shared_ptr<const detail::ProcessNode> make_node(detail::ProcessNode n) {
  return std::make_shared<const detail::ProcessNode>(std::move(n));
}

// Nil is represented by a null pointer; its fields read from this node.
const detail::ProcessNode& nil_fields() {
  static const detail::ProcessNode node;
  return node;
}

}  // namespace


Process Process::nil() { return Process(); }

Process Process::par(Process left, Process right) {
  detail::ProcessNode n;
  n.kind = Kind::Par;
  n.first = std::move(left);
  n.second = std::move(right);
  return Process(make_node(std::move(n)));
}

Process Process::par(const std::vector<Process>& parts) {
  if (parts.empty()) return nil();
  Process acc = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) acc = par(parts[i], acc);
  return acc;
}

Process Process::out(Name subject, std::vector<Value> payload) {
  detail::ProcessNode n;
  n.kind = Kind::Out;
  n.subject = subject;
  n.payload = std::move(payload);
  return Process(make_node(std::move(n)));
}

Process Process::res(Name bound, std::optional<Type> annotation, ResKind kind, Process body) {
  detail::ProcessNode n;
  n.kind = Kind::Res;
  n.subject = bound;
  n.annotation = std::move(annotation);
  n.res_kind = kind;
  n.first = std::move(body);
  return Process(make_node(std::move(n)));
}

Process Process::in(Name subject, std::vector<Name> params, Process body) {
  detail::ProcessNode n;
  n.kind = Kind::In;
  n.subject = subject;
  n.params = std::move(params);
  n.first = std::move(body);
  return Process(make_node(std::move(n)));
}

Process Process::rep_in(Name subject, std::vector<Name> params, Process body) {
  detail::ProcessNode n;
  n.kind = Kind::RepIn;
  n.subject = subject;
  n.params = std::move(params);
  n.first = std::move(body);
  return Process(make_node(std::move(n)));
}

const detail::ProcessNode& Process::fields() const { return node_ ? *node_ : nil_fields(); }

Process::Kind Process::kind() const { return fields().kind; }
const Name& Process::subject() const { return fields().subject; }
const std::vector<Value>& Process::payload() const { return fields().payload; }
const std::vector<Name>& Process::params() const { return fields().params; }
const Name& Process::bound() const { return fields().subject; }
const std::optional<Type>& Process::annotation() const { return fields().annotation; }
ResKind Process::res_kind() const { return fields().res_kind; }
const Process& Process::body() const { return fields().first; }
const Process& Process::left() const { return fields().first; }
const Process& Process::right() const { return fields().second; }

bool arity_matches(std::size_t params, std::size_t values) {
  return params == values || (params == 0 && values == 1) || (params == 1 && values == 0);
}

// ---------------------------------------------------------------------------
// Name sets

namespace {

void collect_value_names(const Value& v, std::set<Name>& out) {
  switch (v.kind) {
    case Value::Kind::Ref: out.insert(v.name); break;
    case Value::Kind::Add:
    case Value::Kind::Mul:
      collect_value_names(*v.lhs, out);
      collect_value_names(*v.rhs, out);
      break;
    default: break;
  }
}

void collect_free(const Process& p, std::set<Name>& bound, std::set<Name>& out) {
  auto note = [&](const Name& n) {
    if (!bound.count(n)) out.insert(n);
  };
  switch (p.kind()) {
    case Process::Kind::Nil: return;
    case Process::Kind::Par:
      collect_free(p.left(), bound, out);
      collect_free(p.right(), bound, out);
      return;
    case Process::Kind::Out: {
      note(p.subject());
      std::set<Name> vs;
      for (const auto& v : p.payload()) collect_value_names(v, vs);
      for (const auto& n : vs) note(n);
      return;
    }
    case Process::Kind::Res: {
      bool fresh = bound.insert(p.bound()).second;
      collect_free(p.body(), bound, out);
      if (fresh) bound.erase(p.bound());
      return;
    }
    case Process::Kind::In:
    case Process::Kind::RepIn: {
      note(p.subject());
      std::vector<Name> added;
      for (const auto& x : p.params())
        if (bound.insert(x).second) added.push_back(x);
      collect_free(p.body(), bound, out);
      for (const auto& x : added) bound.erase(x);
      return;
    }
  }
}

template <class Visit>
void walk(const Process& p, Visit&& visit) {
  visit(p);
  switch (p.kind()) {
    case Process::Kind::Par:
      walk(p.left(), visit);
      walk(p.right(), visit);
      break;
    case Process::Kind::Res:
    case Process::Kind::In:
    case Process::Kind::RepIn: walk(p.body(), visit); break;
    default: break;
  }
}

}  // namespace

std::set<Name> free_names(const Value& v) {
  std::set<Name> out;
  collect_value_names(v, out);
  return out;
}

std::set<Name> free_names(const Process& p) {
  std::set<Name> bound, out;
  collect_free(p, bound, out);
  return out;
}

std::set<Name> received_names(const Process& p) {
  std::set<Name> out;
  walk(p, [&](const Process& q) {
    if (q.is_input()) out.insert(q.params().begin(), q.params().end());
  });
  return out;
}

std::set<Name> restricted_names(const Process& p) {
  std::set<Name> out;
  walk(p, [&](const Process& q) {
    if (q.kind() == Process::Kind::Res) out.insert(q.bound());
  });
  return out;
}

std::set<Name> bound_names(const Process& p) {
  auto out = received_names(p);
  auto r = restricted_names(p);
  out.insert(r.begin(), r.end());
  return out;
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

Value subst_value(const Value& v, const std::map<Name, Value>& s) {
  switch (v.kind) {
    case Value::Kind::Ref: {
      auto it = s.find(v.name);
      return it == s.end() ? v : it->second;
    }
    case Value::Kind::Add: return Value::add(subst_value(*v.lhs, s), subst_value(*v.rhs, s));
    case Value::Kind::Mul: return Value::mul(subst_value(*v.lhs, s), subst_value(*v.rhs, s));
    default: return v;
  }
}

Name subst_subject(const Name& n, const std::map<Name, Value>& s) {
  auto it = s.find(n);
  if (it == s.end()) return n;
  if (!it->second.is_name())
    throw SortError("cannot substitute a non-name value for subject '" + n.display() + "'");
  return it->second.name;
}

Process subst(const Process& p, std::map<Name, Value>& s) {
  switch (p.kind()) {
    case Process::Kind::Nil: return p;
    case Process::Kind::Par: return Process::par(subst(p.left(), s), subst(p.right(), s));
    case Process::Kind::Out: {
      std::vector<Value> vs;
      vs.reserve(p.payload().size());
      for (const auto& v : p.payload()) vs.push_back(evaluate(subst_value(v, s)));
      return Process::out(subst_subject(p.subject(), s), std::move(vs));
    }
    case Process::Kind::Res: {
      Name fresh = Name::fresh(p.bound().display());
      auto saved = s.find(p.bound()) != s.end() ? std::optional(s[p.bound()]) : std::nullopt;
      s[p.bound()] = Value::ref(fresh);
      Process body = subst(p.body(), s);
      if (saved) s[p.bound()] = *saved; else s.erase(p.bound());
      return Process::res(fresh, p.annotation(), p.res_kind(), body);
    }
    case Process::Kind::In:
    case Process::Kind::RepIn: {
      Name subject = subst_subject(p.subject(), s);
      std::vector<Name> params;
      std::vector<std::pair<Name, std::optional<Value>>> saved;
      for (const auto& x : p.params()) {
        Name fresh = Name::fresh(x.display());
        params.push_back(fresh);
        auto it = s.find(x);
        saved.emplace_back(x, it == s.end() ? std::nullopt : std::optional(it->second));
        s[x] = Value::ref(fresh);
      }
      Process body = subst(p.body(), s);
      for (auto& [x, old] : saved) {
        if (old) s[x] = *old; else s.erase(x);
      }
      return p.kind() == Process::Kind::In ? Process::in(subject, std::move(params), body)
                                           : Process::rep_in(subject, std::move(params), body);
    }
  }
  return p;
}

}  // namespace

Process substitute(const Process& p, const std::map<Name, Value>& subst_map) {
  std::map<Name, Value> s = subst_map;
  return subst(p, s);
}

Process substitute(const Process& p, Name x, const Value& v) {
  return substitute(p, std::map<Name, Value>{{x, v}});
}

// ---------------------------------------------------------------------------
// Printing

NameDisplay::NameDisplay(const Process& p) { add_all(p); }

void NameDisplay::add(const Name& n) {
  if (shown_.count(n.id())) return;
  std::string s = n.display();
  if (taken_.count(s)) {
    for (unsigned k = 1;; ++k) {
      std::string candidate = n.display() + "_" + std::to_string(k);
      if (!taken_.count(candidate)) {
        s = candidate;
        break;
      }
    }
  }
  taken_.insert(s);
  shown_.emplace(n.id(), std::move(s));
}

void NameDisplay::add_all(const Process& p) {
  // Free names first so they keep their spelling.
  for (const auto& n : free_names(p)) add(n);
  walk(p, [&](const Process& q) {
    switch (q.kind()) {
      case Process::Kind::Res: add(q.bound()); break;
      case Process::Kind::In:
      case Process::Kind::RepIn:
        for (const auto& x : q.params()) add(x);
        break;
      default: break;
    }
  });
}

std::string NameDisplay::operator()(const Name& n) const {
  auto it = shown_.find(n.id());
  return it == shown_.end() ? n.display() : it->second;
}

std::string to_string(const Value& v, const NameDisplay& names) {
  switch (v.kind) {
    case Value::Kind::Star: return "*";
    case Value::Kind::Ref: return names(v.name);
    case Value::Kind::Nat: return std::to_string(v.nat);
    case Value::Kind::Add: return to_string(*v.lhs, names) + "+" + to_string(*v.rhs, names);
    case Value::Kind::Mul: {
      auto side = [&](const Value& x) {
        std::string s = to_string(x, names);
        return x.kind == Value::Kind::Add ? "(" + s + ")" : s;
      };
      return side(*v.lhs) + "*" + side(*v.rhs);
    }
  }
  return "?";
}

namespace {

std::string print(const Process& p, const NameDisplay& names);

std::string print_operand(const Process& p, const NameDisplay& names) {
  std::string s = print(p, names);
  return p.kind() == Process::Kind::Res ? "(" + s + ")" : s;
}

std::string print_prefix_body(const Process& p, const NameDisplay& names) {
  std::string s = print(p, names);
  return (p.kind() == Process::Kind::Par || p.kind() == Process::Kind::Res) ? "(" + s + ")" : s;
}

std::string print(const Process& p, const NameDisplay& names) {
  switch (p.kind()) {
    case Process::Kind::Nil: return "0";
    case Process::Kind::Par:
      return print_operand(p.left(), names) + " | " + print_operand(p.right(), names);
    case Process::Kind::Out: {
      std::string s = names(p.subject()) + "<";
      for (std::size_t i = 0; i < p.payload().size(); ++i) {
        if (i) s += ",";
        s += to_string(p.payload()[i], names);
      }
      return s + ">";
    }
    case Process::Kind::Res: {
      std::string s = "new " + names(p.bound());
      if (p.res_kind() == ResKind::Functional) s += " fun";
      if (p.annotation()) s += ":" + to_string(*p.annotation());
      return s + ". " + print(p.body(), names);
    }
    case Process::Kind::In:
    case Process::Kind::RepIn: {
      std::string s = p.kind() == Process::Kind::RepIn ? "!" : "";
      s += names(p.subject()) + "(";
      for (std::size_t i = 0; i < p.params().size(); ++i) {
        if (i) s += ",";
        s += names(p.params()[i]);
      }
      return s + ")." + print_prefix_body(p.body(), names);
    }
  }
  return "?";
}

}  // namespace

std::string to_string(const Process& p, const NameDisplay& names) { return print(p, names); }

std::string to_string(const Process& p) { return print(p, NameDisplay(p)); }

// ---------------------------------------------------------------------------
// Alpha-equivalence

namespace {

struct AlphaCompare {
  std::map<Name, std::uint32_t> left, right;
  std::uint32_t next = 0;

  bool names(const Name& a, const Name& b) const {
    auto la = left.find(a);
    auto rb = right.find(b);
    if (la == left.end() && rb == right.end()) return a == b;
    return la != left.end() && rb != right.end() && la->second == rb->second;
  }

  bool values(const Value& a, const Value& b) const {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case Value::Kind::Star: return true;
      case Value::Kind::Ref: return names(a.name, b.name);
      case Value::Kind::Nat: return a.nat == b.nat;
      default: return values(*a.lhs, *b.lhs) && values(*a.rhs, *b.rhs);
    }
  }

  void bind(const Name& a, const Name& b) {
    left[a] = next;
    right[b] = next;
    ++next;
  }

  bool procs(const Process& a, const Process& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case Process::Kind::Nil: return true;
      case Process::Kind::Par: return procs(a.left(), b.left()) && procs(a.right(), b.right());
      case Process::Kind::Out:
        if (!names(a.subject(), b.subject()) || a.payload().size() != b.payload().size())
          return false;
        for (std::size_t i = 0; i < a.payload().size(); ++i)
          if (!values(a.payload()[i], b.payload()[i])) return false;
        return true;
      case Process::Kind::Res:
        if (a.annotation() != b.annotation() || a.res_kind() != b.res_kind()) return false;
        bind(a.bound(), b.bound());
        return procs(a.body(), b.body());
      case Process::Kind::In:
      case Process::Kind::RepIn:
        if (!names(a.subject(), b.subject()) || a.params().size() != b.params().size())
          return false;
        for (std::size_t i = 0; i < a.params().size(); ++i) bind(a.params()[i], b.params()[i]);
        return procs(a.body(), b.body());
    }
    return false;
  }
};

}  // namespace

bool alpha_equivalent(const Process& a, const Process& b) {
  AlphaCompare cmp;
  return cmp.procs(a, b);
}

}  // namespace piterm

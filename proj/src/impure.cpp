#include "piterm/impure.hpp"

#include <algorithm>
#include <sstream>

#include "piterm/parser.hpp"
#include "piterm/semantics.hpp"

namespace piterm {

ImpureEnv parse_impure_env(std::string_view text) {
  ImpureEnv env;
  std::istringstream in{std::string(text)};
  std::string line, plain;
  while (std::getline(in, line)) {
    std::size_t start = line.find_first_not_of(" \t");
    if (start != std::string::npos && line.compare(start, 4, "fun ") == 0) {
      auto bindings = parse_bindings(line.substr(start + 4));
      if (bindings.size() != 1)
        throw SyntaxError("a `fun` line declares exactly one name", 0, 0);
      if (env.isolated) throw SyntaxError("more than one isolated functional name", 0, 0);
      Type t = bindings[0].second;
      if (t.is_chan()) t.cap = Cap::Out;
      env.isolated = Isolated{bindings[0].first, t};
    } else {
      plain += line + "\n";
    }
  }
  for (auto& [n, t] : parse_bindings(plain)) env.gamma.bind(n, t);
  return env;
}

namespace {

struct State {
  TypeEnv gamma;
  std::optional<Isolated> iso;
  std::set<Name> functional;

  // The isolated name loses its special status and keeps output rights only.
  void demote() {
    if (iso) gamma.set(iso->name, iso->type);
    iso.reset();
  }
};

void bind_params(State& s, const Process& p, const Type& t) {
  const auto& params = p.params();
  const auto& payload = t.payload;
  if (params.size() == payload.size()) {
    for (std::size_t i = 0; i < params.size(); ++i) s.gamma.set(params[i], payload[i]);
  } else if (params.size() == 1 && payload.empty()) {
    s.gamma.set(params[0], Type::unit());
  } else if (!(params.empty() && payload.size() == 1 && payload[0].kind == Type::Kind::Unit)) {
    throw TypeError(ErrorCode::PayloadMismatch, "input on '" + p.subject().display() + "' : " +
                                                    to_string(t) + " binds " +
                                                    std::to_string(params.size()) + " names");
  }
}

unsigned weight(const Process& p, const State& s) {
  switch (p.kind()) {
    case Process::Kind::Nil: return 0;
    case Process::Kind::Par: return std::max(weight(p.left(), s), weight(p.right(), s));
    case Process::Kind::Out: {
      TypeEnv env = s.gamma;
      if (s.iso) env.set(s.iso->name, s.iso->type);
      return check(env, p);
    }
    case Process::Kind::Res: {
      if (!p.annotation())
        throw TypeError(ErrorCode::MissingAnnotation,
                        "restriction of '" + p.bound().display() + "' has no type annotation");
      State inner = s;
      Type t = *p.annotation();
      if (p.res_kind() == ResKind::Functional) {
        if (t.is_chan()) t.cap = Cap::Out;
        inner.demote();
        inner.iso = Isolated{p.bound(), t};
        inner.functional.insert(p.bound());
      } else {
        inner.gamma.set(p.bound(), t);
      }
      return weight(p.body(), inner);
    }
    case Process::Kind::In:
    case Process::Kind::RepIn: break;
  }

  const Name& a = p.subject();
  const bool replicated = p.kind() == Process::Kind::RepIn;
  const bool isolated = s.iso && s.iso->name == a;
  if (replicated && isolated) {
    State inner = s;
    inner.iso.reset();  // no recursion through f
    bind_params(inner, p, s.iso->type);
    unsigned w = weight(p.body(), inner);
    if (s.iso->type.level < w)
      throw TypeError(ErrorCode::LevelViolation,
                      "functional definition of '" + a.display() + "' at level " +
                          std::to_string(s.iso->type.level) + " has a body of weight " +
                          std::to_string(w));
    return 0;
  }
  if (s.functional.count(a)) {
    if (replicated)
      throw TypeError(ErrorCode::FunctionalNotIsolated,
                      "replicated input on functional name '" + a.display() +
                          "' which is not the isolated name");
    // Linear reception on a functional name: no level constraint.
    const Type& t = isolated ? s.iso->type : s.gamma.at(a);
    State inner = s;
    inner.demote();
    bind_params(inner, p, t);
    return weight(p.body(), inner);
  }

  const Type t = s.gamma.at(a);
  if (!t.is_chan() || t.cap == Cap::Out)
    throw TypeError(ErrorCode::Capability,
                    "input on '" + a.display() + "' of type " + to_string(t));
  State inner = s;
  inner.demote();
  bind_params(inner, p, t);
  unsigned w = weight(p.body(), inner);
  if (t.level <= w)
    throw TypeError(ErrorCode::LevelViolation,
                    "input on imperative '" + a.display() + "' at level " +
                        std::to_string(t.level) + " guards a body of weight " + std::to_string(w));
  return 0;
}

}  // namespace

unsigned check_impure(const ImpureEnv& env, const Process& p) {
  State s{env.gamma, env.isolated, {}};
  if (s.iso) {
    if (s.gamma.contains(s.iso->name))
      throw std::invalid_argument("isolated name '" + s.iso->name.display() +
                                  "' is also bound in the environment");
    s.functional.insert(s.iso->name);
  }
  return weight(p, s);
}

Process impure_arrangement(const ImpureEnv& env, const Process& p) {
  NormalProcess n = normalize(p);
  std::vector<Restriction> imperative, functional;
  for (const auto& r : n.restrictions)
    (r.kind == ResKind::Functional ? functional : imperative).push_back(r);

  auto defines = [](const Process& c, const Name& f) {
    return c.kind() == Process::Kind::RepIn && c.subject() == f;
  };
  std::vector<Process> top_defs, rest;
  std::map<Name, std::vector<Process>> defs;
  for (const Process& c : n.components) {
    if (env.isolated && defines(c, env.isolated->name)) {
      top_defs.push_back(c);
      continue;
    }
    auto f = std::find_if(functional.begin(), functional.end(),
                          [&](const Restriction& r) { return defines(c, r.name); });
    if (f != functional.end())
      defs[f->name].push_back(c);
    else
      rest.push_back(c);
  }

  // Undefined functional names first, then definitions with the names they
  // mention placed outside them.
  std::vector<Restriction> order;
  std::vector<Restriction> pending;
  for (const auto& r : functional) (defs.count(r.name) ? pending : order).push_back(r);
  while (!pending.empty()) {
    auto ready = std::find_if(pending.begin(), pending.end(), [&](const Restriction& r) {
      for (const Process& d : defs[r.name])
        for (const Name& m : free_names(d))
          if (m != r.name && std::any_of(pending.begin(), pending.end(),
                                         [&](const Restriction& q) { return q.name == m; }))
            return false;
      return true;
    });
    if (ready == pending.end()) ready = pending.begin();  // mutual references: no typable order
    order.push_back(*ready);
    pending.erase(ready);
  }

  Process body = Process::par(rest);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    auto d = defs.find(it->name);
    if (d != defs.end()) {
      std::vector<Process> parts = d->second;
      parts.push_back(body);
      body = Process::par(parts);
    }
    body = Process::res(it->name, it->annotation, it->kind, body);
  }
  top_defs.push_back(body);
  body = Process::par(top_defs);
  for (auto it = imperative.rbegin(); it != imperative.rend(); ++it)
    body = Process::res(it->name, it->annotation, it->kind, body);
  return body;
}

}  // namespace piterm

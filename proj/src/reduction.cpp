#include <algorithm>
#include <map>

#include "piterm/semantics.hpp"

namespace piterm {

namespace {

// Binds the received values to the parameters, honouring the unit
// abbreviations. Returns false when the arities do not match.
bool bind_params(const std::vector<Name>& params, const std::vector<Value>& values,
                 std::map<Name, Value>& out) {
  if (!arity_matches(params.size(), values.size())) return false;
  if (params.size() == values.size()) {
    for (std::size_t i = 0; i < params.size(); ++i) out.emplace(params[i], evaluate(values[i]));
  } else if (params.size() == 1) {
    out.emplace(params[0], Value::star());
  }
  return true;
}

}  // namespace

std::vector<Successor> successors(const Process& p) {
  NormalProcess n = normalize(p);
  std::map<std::string, Process> found;
  const auto& comps = n.components;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (comps[i].kind() != Process::Kind::Out) continue;
    for (std::size_t j = 0; j < comps.size(); ++j) {
      const Process& rx = comps[j];
      if (!rx.is_input() || !(rx.subject() == comps[i].subject())) continue;
      std::map<Name, Value> subst;
      if (!bind_params(rx.params(), comps[i].payload(), subst)) continue;
      Process reduct;
      try {
        reduct = substitute(rx.body(), subst);
      } catch (const SortError&) {
        continue;  // a value cannot be used as a channel: no communication
      }
      NormalProcess next;
      next.restrictions = n.restrictions;
      for (std::size_t k = 0; k < comps.size(); ++k) {
        if (k == i || (k == j && rx.kind() == Process::Kind::In)) continue;
        next.components.push_back(comps[k]);
      }
      next.components.push_back(reduct);
      NormalProcess normal = normalize(to_process(next));
      found.emplace(canonical_key(normal), to_process(normal));
    }
  }
  std::vector<Successor> out;
  out.reserve(found.size());
  for (auto& [key, proc] : found) out.push_back({proc, key});
  return out;
}

std::vector<Process> step(const Process& p) {
  std::vector<Process> out;
  for (auto& s : successors(p)) out.push_back(std::move(s.process));
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Terminated: return "Terminated";
    case Verdict::BoundExceeded: return "BoundExceeded";
    case Verdict::DivergenceWitness: return "DivergenceWitness";
  }
  return "?";
}

}  // namespace piterm

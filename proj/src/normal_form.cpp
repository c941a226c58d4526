#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "piterm/semantics.hpp"

namespace piterm {

namespace {

void collect(const Process& p, NormalProcess& out) {
  switch (p.kind()) {
    case Process::Kind::Nil: break;
    case Process::Kind::Par:
      collect(p.left(), out);
      collect(p.right(), out);
      break;
    case Process::Kind::Res:
      // Binders are pairwise distinct, so extrusion never captures.
      out.restrictions.push_back({p.bound(), p.annotation(), p.res_kind()});
      collect(p.body(), out);
      break;
    case Process::Kind::Out: out.components.push_back(p); break;
    case Process::Kind::In:
      out.components.push_back(Process::in(p.subject(), p.params(), to_process(normalize(p.body()))));
      break;
    case Process::Kind::RepIn:
      out.components.push_back(
          Process::rep_in(p.subject(), p.params(), to_process(normalize(p.body()))));
      break;
  }
}

// Shallow inverse of to_process, for bodies that are already normal.
NormalProcess split(const Process& p) {
  NormalProcess n;
  Process cur = p;
  while (cur.kind() == Process::Kind::Res) {
    n.restrictions.push_back({cur.bound(), cur.annotation(), cur.res_kind()});
    cur = cur.body();
  }
  std::vector<Process> stack{cur};
  while (!stack.empty()) {
    Process q = stack.back();
    stack.pop_back();
    if (q.kind() == Process::Kind::Par) {
      stack.push_back(q.right());
      stack.push_back(q.left());
    } else if (q.kind() != Process::Kind::Nil) {
      n.components.push_back(q);
    }
  }
  return n;
}

struct KeyContext {
  std::unordered_map<std::uint32_t, std::string> bound;

  const std::string& show(const Name& n, std::vector<std::uint32_t>& occ) const {
    occ.push_back(n.id());
    auto it = bound.find(n.id());
    return it == bound.end() ? n.display() : it->second;
  }
};

void value_key(const Value& v, const KeyContext& ctx, std::string& out,
               std::vector<std::uint32_t>& occ) {
  switch (v.kind) {
    case Value::Kind::Star: out += '*'; break;
    case Value::Kind::Ref: out += ctx.show(v.name, occ); break;
    case Value::Kind::Nat: out += std::to_string(v.nat); break;
    case Value::Kind::Add:
    case Value::Kind::Mul:
      out += '(';
      value_key(*v.lhs, ctx, out, occ);
      out += v.kind == Value::Kind::Add ? '+' : '*';
      value_key(*v.rhs, ctx, out, occ);
      out += ')';
      break;
  }
}

std::string normal_key(const NormalProcess& n, int depth, KeyContext& ctx,
                       std::vector<std::uint32_t>& occ);

std::string component_key(const Process& c, int depth, KeyContext& ctx,
                          std::vector<std::uint32_t>& occ) {
  std::string out;
  if (c.kind() == Process::Kind::Out) {
    out += ctx.show(c.subject(), occ);
    out += '<';
    for (std::size_t i = 0; i < c.payload().size(); ++i) {
      if (i) out += ',';
      value_key(c.payload()[i], ctx, out, occ);
    }
    out += '>';
    return out;
  }
  if (c.kind() == Process::Kind::RepIn) out += '!';
  out += ctx.show(c.subject(), occ);
  out += '(';
  const auto& params = c.params();
  for (std::size_t i = 0; i < params.size(); ++i) {
    std::string alias = "_x" + std::to_string(depth) + "_" + std::to_string(i);
    if (i) out += ',';
    out += alias;
    ctx.bound[params[i].id()] = std::move(alias);
  }
  out += ").";
  NormalProcess body = split(c.body());
  out += normal_key(body, depth + 1, ctx, occ);
  for (const Name& x : params) ctx.bound.erase(x.id());
  return out;
}

std::string normal_key(const NormalProcess& n, int depth, KeyContext& ctx,
                       std::vector<std::uint32_t>& occ) {
  const auto& rs = n.restrictions;
  const std::string prefix = "_r" + std::to_string(depth) + "_";
  std::unordered_map<std::uint32_t, std::size_t> index_of;  // restriction position by id
  for (std::size_t i = 0; i < rs.size(); ++i) index_of[rs[i].name.id()] = i;

  // assignment[i] = canonical index of restriction i, or npos while unknown.
  constexpr std::size_t unknown = static_cast<std::size_t>(-1);
  std::vector<std::size_t> assignment(rs.size(), unknown);
  if (rs.size() == 1) assignment[0] = 0;

  std::vector<std::string> keys;
  std::vector<std::vector<std::uint32_t>> occs;
  std::vector<std::size_t> order(n.components.size());
  for (int round = 0; round < 5; ++round) {
    for (std::size_t i = 0; i < rs.size(); ++i)
      ctx.bound[rs[i].name.id()] =
          prefix + (assignment[i] == unknown ? std::string("?") : std::to_string(assignment[i]));
    keys.assign(n.components.size(), {});
    occs.assign(n.components.size(), {});
    for (std::size_t i = 0; i < n.components.size(); ++i)
      keys[i] = component_key(n.components[i], depth, ctx, occs[i]);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    // Number restricted names by first occurrence in the sorted serialization.
    std::vector<std::size_t> next(rs.size(), unknown);
    std::size_t counter = 0;
    for (std::size_t i : order)
      for (std::uint32_t id : occs[i]) {
        auto it = index_of.find(id);
        if (it != index_of.end() && next[it->second] == unknown) next[it->second] = counter++;
      }
    for (std::size_t i = 0; i < rs.size(); ++i)
      if (next[i] == unknown) next[i] = counter++;
    if (next == assignment) break;
    assignment = std::move(next);
  }

  std::string out;
  std::vector<std::size_t> by_index(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) by_index[assignment[i]] = i;
  for (std::size_t idx : by_index) {
    out += "new " + prefix + std::to_string(assignment[idx]);
    if (rs[idx].annotation) out += ":" + to_string(*rs[idx].annotation);
    if (rs[idx].kind == ResKind::Functional) out += " fun";
    out += ". ";
  }
  if (order.empty()) out += "0";
  bool wrap = order.size() > 1 || !rs.empty();
  if (wrap && depth > 0) out = "(" + out;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k) out += " | ";
    out += keys[order[k]];
    occ.insert(occ.end(), occs[order[k]].begin(), occs[order[k]].end());
  }
  if (wrap && depth > 0) out += ")";
  for (const auto& r : rs) ctx.bound.erase(r.name.id());
  return out;
}

}  // namespace

NormalProcess normalize(const Process& p) {
  NormalProcess n;
  collect(p, n);
  std::unordered_set<std::uint32_t> used;
  for (const Process& c : n.components)
    for (const Name& x : free_names(c)) used.insert(x.id());
  std::erase_if(n.restrictions, [&](const Restriction& r) { return !used.count(r.name.id()); });
  return n;
}

Process to_process(const NormalProcess& n) {
  Process body = Process::par(n.components);
  for (auto it = n.restrictions.rbegin(); it != n.restrictions.rend(); ++it)
    body = Process::res(it->name, it->annotation, it->kind, body);
  return body;
}

std::string canonical_key(const NormalProcess& n) {
  KeyContext ctx;
  std::vector<std::uint32_t> occ;
  return normal_key(n, 0, ctx, occ);
}

std::string canonical_key(const Process& p) { return canonical_key(normalize(p)); }

bool congruent(const Process& a, const Process& b) { return canonical_key(a) == canonical_key(b); }

}  // namespace piterm

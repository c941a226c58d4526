#include <algorithm>
#include <functional>
#include <queue>

#include "piterm/inference.hpp"

namespace piterm {

std::optional<std::size_t> LevelGraph::find(const Name& root,
                                             const std::vector<std::size_t>& path) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].root == root && nodes[i].path == path) return i;
  return std::nullopt;
}

std::optional<std::size_t> LevelGraph::find_label(const std::string& label) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (std::find(nodes[i].labels.begin(), nodes[i].labels.end(), label) != nodes[i].labels.end())
      return i;
  return std::nullopt;
}

namespace {

using Path = std::vector<std::size_t>;

// Names in order of first occurrence, so node numbering does not depend on ids.
void occurrence_order(const Process& p, std::vector<Name>& out, std::set<Name>& seen) {
  auto note = [&](const Name& n) {
    if (seen.insert(n).second) out.push_back(n);
  };
  switch (p.kind()) {
    case Process::Kind::Nil: break;
    case Process::Kind::Par:
      occurrence_order(p.left(), out, seen);
      occurrence_order(p.right(), out, seen);
      break;
    case Process::Kind::Res:
      note(p.bound());
      occurrence_order(p.body(), out, seen);
      break;
    case Process::Kind::Out:
      note(p.subject());
      for (const Value& v : p.payload())
        for (const Name& n : free_names(v)) note(n);
      break;
    case Process::Kind::In:
    case Process::Kind::RepIn:
      note(p.subject());
      for (const Name& x : p.params()) note(x);
      occurrence_order(p.body(), out, seen);
      break;
  }
}

void fathers(const Process& p, std::map<Name, std::pair<Name, std::size_t>>& out) {
  switch (p.kind()) {
    case Process::Kind::Nil:
    case Process::Kind::Out: break;
    case Process::Kind::Par:
      fathers(p.left(), out);
      fathers(p.right(), out);
      break;
    case Process::Kind::Res: fathers(p.body(), out); break;
    case Process::Kind::In:
    case Process::Kind::RepIn:
      for (std::size_t i = 0; i < p.params().size(); ++i)
        out.emplace(p.params()[i], std::make_pair(p.subject(), i));
      fathers(p.body(), out);
      break;
  }
}

class GraphBuilder {
 public:
  GraphBuilder(const Process& p, const SimpleEnv& env) : p_(p), env_(env) {}

  LevelGraph nodes_only() {
    create_nodes();
    return finish(false);
  }

  LevelGraph full() {
    create_nodes();
    add_output_edges(p_);
    add_replication_edges(p_);
    return finish(true);
  }

 private:
  struct Draft {
    Name root;
    Path path;
    std::vector<std::string> labels;
  };

  const Process& p_;
  const SimpleEnv& env_;
  std::vector<Draft> drafts_;
  std::map<std::pair<std::uint32_t, Path>, std::size_t> index_;
  std::map<Name, std::pair<Name, Path>> place_;  // where each name lives in the graph
  std::vector<LevelGraph::Edge> edges_;
  std::vector<std::size_t> replicated_;

  Type type_at(const Name& root, const Path& path) const {
    Type t = env_.at(root);
    for (std::size_t j : path) {
      Type next = t.payload.at(j);
      t = std::move(next);
    }
    return t;
  }

  std::string label(const Name& root, const Path& path) const {
    std::string s = root.display();
    Type t = env_.at(root);
    for (std::size_t j : path) {
      std::string step = t.payload.size() == 1 ? "son" : "son_" + std::to_string(j + 1);
      s = step + " " + s;
      Type next = t.payload.at(j);
      t = std::move(next);
    }
    return s;
  }

  std::size_t node(const Name& root, const Path& path) {
    auto key = std::make_pair(root.id(), path);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    drafts_.push_back({root, path, {label(root, path)}});
    index_.emplace(key, drafts_.size() - 1);
    return drafts_.size() - 1;
  }

  void create_nodes() {
    std::vector<Name> order;
    std::set<Name> seen;
    occurrence_order(p_, order, seen);
    std::map<Name, std::pair<Name, std::size_t>> father;
    fathers(p_, father);
    for (const Name& n : order) {
      if (father.count(n)) continue;
      const Type& t = env_.at(n);
      if (t.kind == Type::Kind::Nat || t.kind == Type::Kind::Unit) continue;
      node(n, {});
      place_.emplace(n, std::make_pair(n, Path{}));
      if (!t.is_chan()) continue;
      for (std::size_t j = 0; j < t.payload.size(); ++j)
        if (t.payload[j].kind != Type::Kind::Nat) node(n, {j});
    }
    for (const Name& x : order) {
      auto f = father.find(x);
      if (f == father.end()) continue;
      auto it = index_.find({f->second.first.id(), Path{f->second.second}});
      if (it == index_.end()) continue;  // data of sort Nat
      drafts_[it->second].labels.push_back(x.display());
      place_.emplace(x, std::make_pair(f->second.first, Path{f->second.second}));
    }
  }

  // The type at `lo` must be a subtype of the output type carried at `hi`.
  void constrain(const Name& lo_root, const Path& lo, const Name& hi_root, const Path& hi,
                 const Type& t) {
    if (t.kind == Type::Kind::Unit || t.kind == Type::Kind::Nat) return;
    std::size_t src = node(hi_root, hi);
    std::size_t dst = node(lo_root, lo);
    edges_.push_back({src, dst, LevelGraph::EdgeKind::GE});
    for (std::size_t j = 0; j < t.payload.size(); ++j) {
      Path hi_j = hi, lo_j = lo;
      hi_j.push_back(j);
      lo_j.push_back(j);
      constrain(hi_root, hi_j, lo_root, lo_j, t.payload[j]);
    }
  }

  void add_output_edges(const Process& p) {
    switch (p.kind()) {
      case Process::Kind::Nil: break;
      case Process::Kind::Par:
        add_output_edges(p.left());
        add_output_edges(p.right());
        break;
      case Process::Kind::Res:
      case Process::Kind::In:
      case Process::Kind::RepIn: add_output_edges(p.body()); break;
      case Process::Kind::Out: {
        auto subj = place_.find(p.subject());
        if (subj == place_.end()) break;
        const auto& [root, path] = subj->second;
        Type t = type_at(root, path);
        for (std::size_t i = 0; i < p.payload().size() && i < t.payload.size(); ++i) {
          const Value& v = p.payload()[i];
          if (!v.is_name()) continue;
          auto m = place_.find(v.name);
          if (m == place_.end()) continue;
          Path carried = path;
          carried.push_back(i);
          constrain(m->second.first, m->second.second, root, carried, t.payload[i]);
        }
        break;
      }
    }
  }

  void outputs_unreplicated(const Process& q, std::vector<Name>& out) const {
    switch (q.kind()) {
      case Process::Kind::Nil:
      case Process::Kind::RepIn: break;
      case Process::Kind::Par:
        outputs_unreplicated(q.left(), out);
        outputs_unreplicated(q.right(), out);
        break;
      case Process::Kind::Res:
      case Process::Kind::In: outputs_unreplicated(q.body(), out); break;
      case Process::Kind::Out: out.push_back(q.subject()); break;
    }
  }

  void add_replication_edges(const Process& p) {
    switch (p.kind()) {
      case Process::Kind::Nil:
      case Process::Kind::Out: break;
      case Process::Kind::Par:
        add_replication_edges(p.left());
        add_replication_edges(p.right());
        break;
      case Process::Kind::Res:
      case Process::Kind::In: add_replication_edges(p.body()); break;
      case Process::Kind::RepIn: {
        auto a = place_.find(p.subject());
        if (a != place_.end()) {
          std::size_t src = node(a->second.first, a->second.second);
          replicated_.push_back(src);
          std::vector<Name> subjects;
          outputs_unreplicated(p.body(), subjects);
          for (const Name& n : subjects) {
            auto it = place_.find(n);
            if (it == place_.end()) continue;
            edges_.push_back(
                {src, node(it->second.first, it->second.second), LevelGraph::EdgeKind::GT});
          }
        }
        add_replication_edges(p.body());
        break;
      }
    }
  }

  LevelGraph finish(bool prune) {
    std::vector<bool> keep(drafts_.size(), true);
    if (prune) {
      // Deep nodes that constrain nothing only ever sit at level 0.
      bool changed = true;
      while (changed) {
        changed = false;
        std::vector<bool> has_out(drafts_.size(), false);
        for (const auto& e : edges_)
          if (keep[e.dst]) has_out[e.src] = true;
        for (std::size_t i = 0; i < drafts_.size(); ++i)
          if (keep[i] && drafts_[i].path.size() >= 2 && !has_out[i]) {
            keep[i] = false;
            changed = true;
          }
      }
    }
    LevelGraph g;
    std::vector<std::size_t> remap(drafts_.size(), 0);
    for (std::size_t i = 0; i < drafts_.size(); ++i) {
      if (!keep[i]) continue;
      remap[i] = g.nodes.size();
      g.nodes.push_back({drafts_[i].root, drafts_[i].path, drafts_[i].labels});
    }
    for (const auto& e : edges_)
      if (keep[e.src] && keep[e.dst]) g.edges.push_back({remap[e.src], remap[e.dst], e.kind});
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    for (std::size_t r : replicated_)
      if (keep[r]) g.replicated.push_back(remap[r]);
    std::sort(g.replicated.begin(), g.replicated.end());
    g.replicated.erase(std::unique(g.replicated.begin(), g.replicated.end()), g.replicated.end());
    return g;
  }
};

std::string node_text(const LevelGraph& g, std::size_t i) {
  std::string s = "{";
  for (std::size_t k = 0; k < g.nodes[i].labels.size(); ++k) {
    if (k) s += ", ";
    s += g.nodes[i].labels[k];
  }
  return s + "}";
}

// Tarjan's algorithm; components come out sinks first.
std::vector<std::size_t> strongly_connected(std::size_t n,
                                            const std::vector<std::vector<std::size_t>>& adj,
                                            std::size_t& count) {
  std::vector<std::size_t> comp(n, SIZE_MAX), low(n, 0), num(n, SIZE_MAX);
  std::vector<std::size_t> stack;
  std::vector<bool> on_stack(n, false);
  std::size_t counter = 0;
  count = 0;
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    num[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : adj[v]) {
      if (num[w] == SIZE_MAX) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], num[w]);
      }
    }
    if (low[v] == num[v]) {
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = count;
      } while (w != v);
      ++count;
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (num[v] == SIZE_MAX) visit(v);
  return comp;
}

}  // namespace

LevelGraph build_nodes(const Process& p, const SimpleEnv& env) {
  return GraphBuilder(p, env).nodes_only();
}

LevelGraph build_graph(const Process& p, const SimpleEnv& env) {
  return GraphBuilder(p, env).full();
}

std::vector<unsigned> assign_levels(const LevelGraph& g, InferMode mode) {
  const std::size_t n = g.nodes.size();
  // In equality mode a GE edge also runs backwards, which merges its ends.
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : g.edges) {
    adj[e.src].push_back(e.dst);
    if (mode == InferMode::DSEquality && e.kind == LevelGraph::EdgeKind::GE)
      adj[e.dst].push_back(e.src);
  }
  std::size_t count = 0;
  std::vector<std::size_t> comp = strongly_connected(n, adj, count);

  for (const auto& e : g.edges) {
    if (e.kind != LevelGraph::EdgeKind::GT || comp[e.src] != comp[e.dst]) continue;
    // Witness: the strict edge followed by a path back inside the component.
    std::vector<std::size_t> prev(n, SIZE_MAX);
    std::queue<std::size_t> queue;
    queue.push(e.dst);
    prev[e.dst] = e.dst;
    while (!queue.empty() && prev[e.src] == SIZE_MAX) {
      std::size_t v = queue.front();
      queue.pop();
      for (std::size_t w : adj[v])
        if (comp[w] == comp[e.src] && prev[w] == SIZE_MAX) {
          prev[w] = v;
          queue.push(w);
        }
    }
    std::vector<std::string> witness;
    for (std::size_t v = e.src; v != e.dst; v = prev[v]) witness.push_back(node_text(g, v));
    witness.push_back(node_text(g, e.dst));
    std::reverse(witness.begin(), witness.end());
    witness.insert(witness.begin(), node_text(g, e.src));
    std::string msg;
    for (std::size_t i = 0; i < witness.size(); ++i) {
      if (i) msg += " -> ";
      msg += witness[i];
    }
    throw InferenceError(InferenceError::Kind::CyclicLevelConstraint,
                         "no level assignment satisfies the cycle " + msg, witness);
  }

  // Components are numbered sinks first, so one pass in that order suffices.
  std::vector<std::vector<std::size_t>> members(count);
  for (std::size_t v = 0; v < n; ++v) members[comp[v]].push_back(v);
  std::vector<std::vector<const LevelGraph::Edge*>> out(count);
  for (const auto& e : g.edges) out[comp[e.src]].push_back(&e);
  std::vector<unsigned> comp_level(count, 0);
  for (std::size_t r : g.replicated) comp_level[comp[r]] = 1;
  for (std::size_t c = 0; c < count; ++c) {
    unsigned level = comp_level[c];
    for (const auto* e : out[c]) {
      if (comp[e->dst] == c) continue;
      unsigned d = comp_level[comp[e->dst]];
      level = std::max(level, e->kind == LevelGraph::EdgeKind::GT ? d + 1 : d);
    }
    comp_level[c] = level;
  }
  std::vector<unsigned> levels(n);
  for (std::size_t v = 0; v < n; ++v) levels[v] = comp_level[comp[v]];
  return levels;
}

std::string dump_graph(const LevelGraph& g, const std::vector<unsigned>* levels) {
  std::string s;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    s += "NODE " + std::to_string(i) + ": " + node_text(g, i);
    if (levels) s += " level " + std::to_string((*levels)[i]);
    s += "\n";
  }
  for (const auto& e : g.edges)
    s += "EDGE " + std::to_string(e.src) +
         (e.kind == LevelGraph::EdgeKind::GE ? " >= " : " > ") + std::to_string(e.dst) + "\n";
  return s;
}

}  // namespace piterm

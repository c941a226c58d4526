#include <unordered_map>

#include "piterm/semantics.hpp"

namespace piterm {

namespace {

struct State {
  std::string key;
  Process proc;
  std::size_t depth = 0;
  Measure measure;
  std::vector<std::size_t> next;
};

struct Expansion {
  std::vector<Successor> succ;
  std::vector<Measure> measures;
  std::string error;
};

// Iterative three-colour DFS; returns the states of one cycle, if any.
std::vector<std::size_t> find_cycle(const std::vector<State>& states) {
  enum : char { White, Grey, Black };
  std::vector<char> colour(states.size(), White);
  std::vector<std::size_t> parent(states.size(), 0);
  for (std::size_t root = 0; root < states.size(); ++root) {
    if (colour[root] != White) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    colour[root] = Grey;
    while (!stack.empty()) {
      auto& [v, edge] = stack.back();
      if (edge == states[v].next.size()) {
        colour[v] = Black;
        stack.pop_back();
        continue;
      }
      std::size_t w = states[v].next[edge++];
      if (colour[w] == Grey) {
        std::vector<std::size_t> cycle{w};
        for (std::size_t u = v; u != w; u = parent[u]) cycle.push_back(u);
        std::reverse(cycle.begin() + 1, cycle.end());
        return cycle;
      }
      if (colour[w] == White) {
        colour[w] = Grey;
        parent[w] = v;
        stack.emplace_back(w, 0);
      }
    }
  }
  return {};
}

class Engine {
 public:
  Engine(bool parallel, bool record_trace, const TypeEnv* env)
      : parallel_(parallel), record_trace_(record_trace), env_(env) {}

  ExecutionReport run(const Process& p, Bounds bounds) {
    ExecutionReport report;
    NormalProcess root = normalize(p);
    add_state(canonical_key(root), to_process(root), 0,
              env_ ? measure(*env_, to_process(root)) : Measure{});
    std::vector<std::size_t> frontier{0};
    bool truncated = false;
    std::vector<std::size_t> cycle;
    while (!frontier.empty()) {
      std::vector<Expansion> exp = expand(frontier);
      std::vector<std::size_t> next;
      bool revisit = false;
      for (std::size_t i = 0; i < frontier.size(); ++i) {
        const std::size_t parent = frontier[i];
        if (!exp[i].error.empty()) fail("successor is ill typed: " + exp[i].error, parent, "");
        const std::size_t depth = states_[parent].depth;
        for (std::size_t k = 0; k < exp[i].succ.size(); ++k) {
          Successor& s = exp[i].succ[k];
          std::size_t child;
          auto it = index_.find(s.key);
          if (it != index_.end()) {
            child = it->second;
            revisit = true;
          } else if (depth >= bounds.max_depth || states_.size() >= bounds.max_states) {
            truncated = true;
            continue;
          } else {
            child = add_state(std::move(s.key), std::move(s.process), depth + 1,
                              env_ ? std::move(exp[i].measures[k]) : Measure{});
            next.push_back(child);
          }
          ++report.steps_explored;
          states_[parent].next.push_back(child);
          record_edge(report, parent, child);
        }
      }
      if (revisit) {
        cycle = find_cycle(states_);
        if (!cycle.empty()) break;
      }
      frontier = std::move(next);
    }

    report.states = states_.size();
    for (const State& s : states_) {
      report.max_depth = std::max(report.max_depth, s.depth);
      if (env_) report.measure_trace.push_back(s.measure);
    }
    if (!cycle.empty()) {
      report.verdict = Verdict::DivergenceWitness;
      for (std::size_t v : cycle) report.witness.push_back(states_[v].key);
      report.witness.push_back(states_[cycle.front()].key);
      if (env_)
        throw CertificationFailure("typed process has a divergence witness", report.witness.front(),
                                   report.witness.size() > 1 ? report.witness[1] : "");
    } else {
      report.verdict = truncated ? Verdict::BoundExceeded : Verdict::Terminated;
    }
    return report;
  }

 private:
  bool parallel_;
  bool record_trace_;
  const TypeEnv* env_;
  std::vector<State> states_;
  std::unordered_map<std::string, std::size_t> index_;

  std::size_t add_state(std::string key, Process proc, std::size_t depth, Measure m) {
    std::size_t id = states_.size();
    index_.emplace(key, id);
    states_.push_back({std::move(key), std::move(proc), depth, std::move(m), {}});
    return id;
  }

  void expand_one(std::size_t state, Expansion& out) const {
    try {
      out.succ = successors(states_[state].proc);
      if (env_)
        for (const Successor& s : out.succ) out.measures.push_back(measure(*env_, s.process));
    } catch (const std::exception& e) {
      out.error = e.what();
    }
  }

  std::vector<Expansion> expand(const std::vector<std::size_t>& frontier) const {
    std::vector<Expansion> exp(frontier.size());
    const long n = static_cast<long>(frontier.size());
    if (parallel_) {
#pragma omp parallel for schedule(dynamic)
      for (long i = 0; i < n; ++i) expand_one(frontier[i], exp[i]);
    } else {
      for (long i = 0; i < n; ++i) expand_one(frontier[i], exp[i]);
    }
    return exp;
  }

  [[noreturn]] void fail(const std::string& why, std::size_t parent, const std::string& child) {
    throw CertificationFailure(why, states_[parent].key, child);
  }

  void record_edge(ExecutionReport& report, std::size_t parent, std::size_t child) {
    const State& from = states_[parent];
    const State& to = states_[child];
    if (env_ && !multiset_greater(from.measure, to.measure))
      fail("measure does not decrease: " + to_string(from.measure) + " -> " + to_string(to.measure),
           parent, to.key);
    if (!record_trace_) return;
    std::string line = "STEP " + std::to_string(report.steps_explored) + ": " + from.key + " --> " +
                       to.key;
    if (env_) line += " ; measure " + to_string(from.measure) + " > " + to_string(to.measure);
    report.trace.push_back(std::move(line));
  }
};

}  // namespace

ExecutionReport explore(const Process& p, Bounds bounds, bool record_trace) {
  return Engine(true, record_trace, nullptr).run(p, bounds);
}

ExecutionReport explore_serial(const Process& p, Bounds bounds, bool record_trace) {
  return Engine(false, record_trace, nullptr).run(p, bounds);
}

ExecutionReport certified_run(const TypeEnv& env, const Process& p, Bounds bounds, bool parallel) {
  check(env, p);
  return Engine(parallel, true, &env).run(p, bounds);
}

}  // namespace piterm

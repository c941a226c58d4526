// Acceptance runner: one PASS/FAIL line per criterion, details indented below.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "oracles.hpp"
#include "piterm/impure.hpp"
#include "piterm/inference.hpp"
#include "piterm/lambda.hpp"
#include "piterm/parser.hpp"

using namespace piterm;

namespace {

std::string sample(const std::string& file) {
  std::ifstream in(std::string(SAMPLES_DIR) + "/" + file);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TypeEnv sample_env(const std::string& file) {
  TypeEnv env;
  for (auto& [n, t] : parse_bindings(sample(file))) env.bind(n, t);
  return env;
}

class Criterion {
 public:
  explicit Criterion(std::string title) : title_(std::move(title)) {}

  void expect(bool ok, const std::string& what) {
    ok_ = ok_ && ok;
    details_.push_back((ok ? "  ok   " : "  FAIL ") + what);
  }

  void run(const std::string& what, const std::function<bool(std::string&)>& body) {
    std::string note;
    bool ok = false;
    try {
      ok = body(note);
    } catch (const std::exception& e) {
      note = std::string("unexpected exception: ") + e.what();
    }
    expect(ok, what + (note.empty() ? "" : ": " + note));
  }

  bool report() const {
    std::cout << (ok_ ? "PASS " : "FAIL ") << title_ << "\n";
    for (const auto& d : details_) std::cout << d << "\n";
    return ok_;
  }

 private:
  std::string title_;
  bool ok_ = true;
  std::vector<std::string> details_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::optional<InferenceError::Kind> infer_failure(const Process& p, InferMode mode = InferMode::Flexible) {
  try {
    infer(p, mode);
  } catch (const InferenceError& e) {
    return e.kind();
  }
  return std::nullopt;
}

// --- 1 ----------------------------------------------------------------------

bool criterion1() {
  Criterion c("1 typing of the server example; cyclic processes rejected by inference");
  c.run("server example accepted with weight 3 and measure {3,3}", [](std::string& note) {
    TypeEnv env = sample_env("server.env");
    Process p = parse_process(sample("server.pi"));
    unsigned w = check(env, p);
    Measure m = measure(env, p);
    note = "weight " + std::to_string(w) + ", measure " + to_string(m);
    return w == 3 && m == Measure({3, 3});
  });
  for (const std::string& text :
       {std::string("!a(x).b<x> | !b(y).a<y>"), std::string("!a(x).a<x>"), sample("no_levels.pi")}) {
    c.run("rejected: " + to_string(parse_process(text)), [&](std::string& note) {
      auto t0 = std::chrono::steady_clock::now();
      auto kind = infer_failure(parse_process(text));
      double s = seconds_since(t0);
      note = (kind ? to_string(*kind) : std::string("accepted")) + " in " + std::to_string(s) + "s";
      return kind == InferenceError::Kind::CyclicLevelConstraint && s < 1.0;
    });
  }
  return c.report();
}

// --- 2 ----------------------------------------------------------------------

std::set<std::set<std::string>> label_sets(const LevelGraph& g) {
  std::set<std::set<std::string>> out;
  for (const auto& n : g.nodes) out.insert({n.labels.begin(), n.labels.end()});
  return out;
}

bool criterion2() {
  Criterion c("2 constraint graphs and least typings of the inference examples");
  Process p42 = parse_process(sample("three_names.pi"));
  c.run("three-name example: nodes, edges, levels and types", [&](std::string& note) {
    Inference inf = infer(p42);
    bool nodes = label_sets(inf.graph) == std::set<std::set<std::string>>{
                                             {"a"}, {"son a"}, {"b"}, {"son b"}, {"c"}, {"son c", "z"}};
    std::set<std::string> edges;
    for (const auto& e : inf.graph.edges)
      edges.insert(inf.graph.nodes[e.src].labels.front() +
                   (e.kind == LevelGraph::EdgeKind::GT ? ">" : ">=") +
                   inf.graph.nodes[e.dst].labels.front());
    bool edge_ok = edges == std::set<std::string>{"c>b", "son b>=son c", "son a>=c", "son a>=b"};
    bool types = inf.env.at(Name::free("c")) == parse_type("#1[o0[Unit]]") &&
                 inf.env.at(Name::free("b")) == parse_type("o0[o0[Unit]]") &&
                 inf.env.at(Name::free("a")) == parse_type("o0[o1[o0[Unit]]]");
    note = "c:" + to_string(inf.env.at(Name::free("c"))) + " b:" + to_string(inf.env.at(Name::free("b"))) +
           " a:" + to_string(inf.env.at(Name::free("a")));
    return nodes && edge_ok && types && check(inf.env, inf.process) == inf.weight;
  });
  c.run("local-restriction example: eight nodes with the expected labels", [&](std::string& note) {
    Process p = parse_process(sample("local_restriction.pi"));
    LevelGraph g = build_nodes(p, infer_simple(p));
    note = std::to_string(g.nodes.size()) + " nodes";
    return g.nodes.size() == 8 &&
           label_sets(g) == std::set<std::set<std::string>>{{"a"}, {"son a", "x", "y"}, {"b"}, {"son b"},
                                                            {"c"}, {"son c"}, {"d"}, {"son d", "z"}};
  });
  return c.report();
}

// --- 3 ----------------------------------------------------------------------

bool criterion3() {
  Criterion c("3 lambda encodings: inference separates two terminating terms");
  Name p = Name::free("p");
  LambdaProgram typable = parse_lambda(sample("lambda_typable.lam"));
  LambdaProgram cyclic = parse_lambda(sample("lambda_cyclic.lam"));
  Process e1 = encode(typable.term, p), e2 = encode(cyclic.term, p);
  c.run("first encoding inferred", [&](std::string& note) {
    Inference inf = infer(e1);
    note = "weight " + std::to_string(inf.weight);
    return check(inf.env, inf.process) == inf.weight;
  });
  c.run("second encoding rejected with a cyclic constraint", [&](std::string& note) {
    auto kind = infer_failure(e2);
    note = kind ? to_string(*kind) : "accepted";
    return kind == InferenceError::Kind::CyclicLevelConstraint;
  });
  c.run("first encoding rejected when levels must be equal", [&](std::string& note) {
    auto kind = infer_failure(e1, InferMode::DSEquality);
    note = kind ? to_string(*kind) : "accepted";
    return kind.has_value();
  });
  for (auto [name, proc] : {std::pair{"first", e1}, std::pair{"second", e2}}) {
    c.run(std::string(name) + " encoding terminates", [&](std::string& note) {
      ExecutionReport r = explore(proc, Bounds{100000, 100000});
      ExecutionReport s = explore_serial(proc, Bounds{100000, 100000});
      note = to_string(r.verdict) + ", " + std::to_string(r.states) + " states";
      return r.verdict == Verdict::Terminated && s.states == r.states &&
             s.steps_explored == r.steps_explored;
    });
  }
  return c.report();
}

// --- 4 ----------------------------------------------------------------------

bool criterion4() {
  Criterion c("4 properties of typed processes on generated cases");
  oracle::PropertyStats st = oracle::run_properties(20261016, 600, 5000);
  std::string summary = std::to_string(st.cases) + " cases, " + std::to_string(st.edges) + " edges";
  c.expect(st.generator_failures == 0, "generated processes are well typed (" + summary + ")");
  c.expect(st.subject_reduction_failures == 0,
           "subject reduction, weight never grows (" + std::to_string(st.subject_reduction_failures) +
               " failures)");
  c.expect(st.measure_failures == 0,
           "measure strictly decreases on every edge (" + std::to_string(st.measure_failures) + " failures)");
  c.expect(st.congruence_failures == 0,
           "typing, weight and measure invariant under congruence (" +
               std::to_string(st.congruence_failures) + " failures)");
  c.expect(st.diverged == 0 && st.bound_exceeded == 0,
           "every case terminates within 5000 states (" + std::to_string(st.bound_exceeded) +
               " bounded, " + std::to_string(st.diverged) + " divergent)");
  if (!st.first_failure.empty()) c.expect(false, "first failure: " + st.first_failure);
  return c.report();
}

// --- 5 ----------------------------------------------------------------------

bool criterion5() {
  Criterion c("5 oracles: subtyping, multiset order, inference completeness, least levels");
  c.run("subtyping equals the closure of its axioms", [](std::string& note) {
    auto r = oracle::check_subtype_against_closure(3, 4, 2);
    note = std::to_string(r.classes) + " shapes, " + std::to_string(r.types) + " types, " +
           std::to_string(r.pairs) + " pairs, " + std::to_string(r.mismatches) + " mismatches" +
           (r.first_mismatch.empty() ? "" : ", e.g. " + r.first_mismatch);
    return r.mismatches == 0;
  });
  c.run("multiset order equals brute force", [](std::string& note) {
    auto all = oracle::all_multisets(5, 5);
    std::size_t bad = 0;
    for (const auto& a : all)
      for (const auto& b : all)
        bad += multiset_greater(Measure(a), Measure(b)) != oracle::multiset_greater_bruteforce(a, b);
    note = std::to_string(all.size() * all.size()) + " pairs, " + std::to_string(bad) + " mismatches";
    return bad == 0;
  });
  c.run("inference succeeds exactly on the corpus processes typable by enumeration", [](std::string& note) {
    std::size_t typable = 0, bad = 0;
    auto corpus = oracle::lpi_corpus();
    for (const auto& text : corpus) {
      Process p = parse_process(text);
      bool exists = oracle::typable_by_enumeration(p, 3);
      bool inferred = !infer_failure(p);
      typable += exists;
      if (exists != inferred) {
        if (!bad) note = text + (exists ? " typable but not inferred; " : " inferred but not typable; ");
        ++bad;
      }
    }
    note += std::to_string(corpus.size()) + " processes, " + std::to_string(typable) + " typable, " +
            std::to_string(bad) + " disagreements";
    return bad == 0 && corpus.size() >= 30;
  });
  c.run("assigned levels are the least solution", [](std::string& note) {
    std::mt19937 rng(5);
    std::size_t solvable = 0, bad = 0;
    for (int i = 0; i < 300; ++i) {
      LevelGraph g = oracle::random_graph(rng, 5, 6);
      auto sols = oracle::satisfying_assignments(g, 5);
      std::optional<std::vector<unsigned>> least;
      try {
        least = assign_levels(g);
      } catch (const InferenceError&) {
      }
      if (sols.empty()) {
        bad += least.has_value();
        continue;
      }
      ++solvable;
      if (!least) {
        ++bad;
        continue;
      }
      bool is_solution = std::find(sols.begin(), sols.end(), *least) != sols.end();
      bool below = std::all_of(sols.begin(), sols.end(), [&](const std::vector<unsigned>& s) {
        for (std::size_t k = 0; k < s.size(); ++k)
          if ((*least)[k] > s[k]) return false;
        return true;
      });
      bad += !(is_solution && below);
    }
    note = "300 graphs, " + std::to_string(solvable) + " solvable, " + std::to_string(bad) + " wrong";
    return bad == 0;
  });
  c.run("parallel exploration reports equal the serial reference", [](std::string& note) {
    std::mt19937 rng(9);
    std::size_t bad = 0;
    for (int i = 0; i < 100; ++i) {
      auto tc = oracle::generate_typed(rng);
      ExecutionReport a = explore(tc.process, Bounds{5000, 100000}, true);
      ExecutionReport b = explore_serial(tc.process, Bounds{5000, 100000}, true);
      bad += !(a.verdict == b.verdict && a.states == b.states && a.steps_explored == b.steps_explored &&
               a.max_depth == b.max_depth && a.trace == b.trace);
    }
    note = "100 processes, " + std::to_string(bad) + " differences";
    return bad == 0;
  });
  return c.report();
}

// --- 6 ----------------------------------------------------------------------

// Every assignment of isolated name, capabilities and levels <= 3 to the
// names of the mixed example; true if some assignment type-checks.
bool mixed_example_typable(std::size_t& tried) {
  Process p = parse_process(sample("impure_mixed.pi"));
  Name u = Name::free("u"), v = Name::free("v"), c = Name::free("c"), t = Name::free("t");
  const std::vector<Name> names{u, v, c, t};
  static constexpr Cap caps[] = {Cap::Sharp, Cap::In, Cap::Out};
  std::vector<Type> carried;
  for (Cap k : caps)
    for (unsigned l = 0; l <= 3; ++l) carried.push_back(Type::chan(k, l, {Type::unit()}));
  for (int iso = -1; iso < 4; ++iso)
    for (const Type& arg : carried) {
      // Per name: 12 (cap, level) choices, or 4 output levels when isolated.
      std::vector<unsigned> idx(4, 0);
      while (true) {
        ImpureEnv env;
        for (int i = 0; i < 4; ++i) {
          std::vector<Type> payload{names[static_cast<std::size_t>(i)] == u ? arg : Type::unit()};
          if (i == iso) {
            env.isolated = Isolated{names[static_cast<std::size_t>(i)], Type::chan(Cap::Out, idx[static_cast<std::size_t>(i)], payload)};
          } else {
            unsigned k = idx[static_cast<std::size_t>(i)];
            env.gamma.bind(names[static_cast<std::size_t>(i)], Type::chan(caps[k / 4], k % 4, payload));
          }
        }
        ++tried;
        try {
          check_impure(env, impure_arrangement(env, p));
          return true;
        } catch (const TypeError&) {
        }
        std::size_t i = 0;
        for (; i < 4; ++i) {
          unsigned limit = static_cast<int>(i) == iso ? 3 : 11;
          if (idx[i] < limit) {
            ++idx[i];
            break;
          }
          idx[i] = 0;
        }
        if (i == 4) break;
      }
    }
  return false;
}

bool criterion6() {
  Criterion c("6 functional and imperative names");
  c.run("definition hidden under an imperative input rejected", [](std::string& note) {
    try {
      check_impure(parse_impure_env(sample("impure_diverge.env")), parse_process(sample("impure_diverge.pi")));
    } catch (const TypeError& e) {
      note = code_of(e.code());
      return e.code() == ErrorCode::FunctionalNotIsolated;
    }
    note = "accepted";
    return false;
  });
  c.run("mixed example accepted", [](std::string& note) {
    std::size_t tried = 0;
    bool typable = mixed_example_typable(tried);
    note = typable ? "typable" : "no typing among " + std::to_string(tried) + " annotations";
    return typable;
  });
  c.run("higher-order servers accepted with subtyping, rejected at equal levels without", [](std::string& note) {
    Process p = parse_process(sample("higher_order.pi"));
    unsigned w = check(sample_env("higher_order.env"), p);
    // Without subtyping f1 and f2 share the carried type of g's first argument.
    std::size_t accepted = 0, tried = 0;
    for (unsigned lf = 0; lf <= 4; ++lf)
      for (unsigned lg = 0; lg <= 4; ++lg)
        for (unsigned lt = 0; lt <= 4; ++lt) {
          Type cont = Type::chan(Cap::Sharp, lt, {Type::nat()});
          Type fun = Type::chan(Cap::Sharp, lf, {Type::nat(), cont});
          TypeEnv env;
          env.bind(Name::free("f1"), fun);
          env.bind(Name::free("f2"), fun);
          env.bind(Name::free("g"), Type::chan(Cap::Sharp, lg, {fun, Type::nat(), cont}));
          env.bind(Name::free("t1"), cont);
          env.bind(Name::free("t2"), cont);
          ++tried;
          try {
            check_ds(env, p);
            ++accepted;
          } catch (const TypeError&) {
          }
        }
    note = "weight " + std::to_string(w) + "; " + std::to_string(accepted) + " of " + std::to_string(tried) +
           " equal-level annotations accepted";
    return w == 3 && accepted == 0;
  });
  c.run("encodings of simply-typed terms accepted with all names functional", [](std::string& note) {
    std::size_t ok = 0;
    auto corpus = oracle::stlc_corpus();
    for (const auto& text : corpus) {
      LambdaProgram prog = parse_lambda(text);
      check_stlc(prog.context, prog.term);
      TypedEncoding t = encode_typed(prog.context, prog.term, Name::free("p"));
      bool all_functional = true;
      std::function<void(const Process&)> walk = [&](const Process& q) {
        switch (q.kind()) {
          case Process::Kind::Res:
            all_functional = all_functional && q.res_kind() == ResKind::Functional && q.annotation() &&
                             q.annotation()->level == 0;
            walk(q.body());
            break;
          case Process::Kind::Par:
            walk(q.left());
            walk(q.right());
            break;
          case Process::Kind::In:
          case Process::Kind::RepIn: walk(q.body()); break;
          default: break;
        }
      };
      walk(t.process);
      try {
        check_impure(t.env, t.process);
        ok += all_functional;
      } catch (const TypeError& e) {
        if (note.empty()) note = text + ": " + e.what() + "; ";
      }
    }
    note += std::to_string(ok) + " of " + std::to_string(corpus.size()) + " accepted";
    return ok == corpus.size() && corpus.size() >= 10;
  });
  return c.report();
}

}  // namespace

int main() {
  bool ok = true;
  for (auto* criterion : {criterion1, criterion2, criterion3, criterion4, criterion5, criterion6}) {
    ok = criterion() && ok;
    std::cout.flush();
  }
  return ok ? 0 : 1;
}

// piterm: type checking, inference and bounded execution for pi-calculus
// processes with level-based termination types.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "piterm/impure.hpp"
#include "piterm/inference.hpp"
#include "piterm/lambda.hpp"
#include "piterm/parser.hpp"
#include "piterm/semantics.hpp"
#include "piterm/typing.hpp"

namespace fs = std::filesystem;
using namespace piterm;

namespace {

enum Exit { Ok = 0, Rejected = 1, InputError = 2, Bound = 3, Uncertified = 4 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Report {
  std::string verdict;
  std::optional<unsigned> weight;
  std::optional<std::size_t> steps;
  std::string code;
  std::vector<std::string> lines;
  int exit = Ok;

  void add(std::string line) { lines.push_back(std::move(line)); }
  void add_block(const std::string& text) {
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) lines.push_back(l);
  }
  void reject(const std::string& c, const std::string& message, int status = Rejected) {
    verdict = "Rejected";
    code = c;
    exit = status;
    add("error: " + message);
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TypeEnv load_env(const std::string& path) {
  TypeEnv env;
  for (auto& [n, t] : parse_bindings(read_file(path))) env.bind(n, t);
  return env;
}

std::optional<std::string> sibling_env(const std::string& file) {
  fs::path p(file);
  p.replace_extension(".env");
  if (fs::exists(p)) return p.string();
  return std::nullopt;
}

std::size_t default_max_states() {
  if (const char* v = std::getenv("PITERM_MAX_STATES")) {
    try {
      return static_cast<std::size_t>(std::stoull(v));
    } catch (const std::exception&) {
    }
  }
  return 100000;
}

std::string env_text(const TypeEnv& env, const NameDisplay& names) {
  std::string s;
  for (const auto& [n, t] : env.bindings()) s += names(n) + " : " + to_string(t) + "\n";
  return s;
}

// ---------------------------------------------------------------------------

struct CheckOptions {
  std::string file;
  std::string env;
  bool ds = false;
  bool impure = false;
};

Report cmd_check(const CheckOptions& o) {
  Report r;
  Process p = parse_process(read_file(o.file));
  std::optional<std::string> env_path = o.env.empty() ? sibling_env(o.file) : o.env;
  try {
    if (o.impure) {
      ImpureEnv env = env_path ? parse_impure_env(read_file(*env_path)) : ImpureEnv{};
      r.weight = check_impure(env, p);
    } else {
      TypeEnv env = env_path ? load_env(*env_path) : TypeEnv{};
      r.weight = o.ds ? check_ds(env, p) : check(env, p);
      if (!o.ds) r.add("measure " + to_string(measure(env, p)));
    }
    r.verdict = "Accepted";
    r.add("weight " + std::to_string(*r.weight));
  } catch (const TypeError& e) {
    r.reject(code_of(e.code()), e.what());
  }
  return r;
}

struct InferOptions {
  std::string file;
  bool ds_equality = false;
  bool dump_graph = false;
};

Report cmd_infer(const InferOptions& o) {
  Report r;
  Process p = parse_process(read_file(o.file));
  InferMode mode = o.ds_equality ? InferMode::DSEquality : InferMode::Flexible;
  std::optional<LevelGraph> graph;
  try {
    SimpleEnv simple = infer_simple(p);
    if (!locality_check(p))
      throw InferenceError(InferenceError::Kind::NotLocalised,
                           "a received name is used as an input subject");
    graph = build_graph(p, simple);
    std::vector<unsigned> levels = assign_levels(*graph, mode);
    Inference inf = reconstruct(p, simple, *graph, levels);
    if (o.dump_graph) r.add_block(dump_graph(*graph, &levels));
    NameDisplay names(inf.process);
    r.add_block(env_text(inf.env, names));
    if (inf.restricted.size()) r.add("process " + to_string(inf.process, names));
    r.verdict = "Accepted";
    r.weight = inf.weight;
  } catch (const InferenceError& e) {
    if (o.dump_graph && graph) r.add_block(dump_graph(*graph));
    r.reject(to_string(e.kind()), e.what());
    if (!e.witness().empty()) {
      std::string w = "witness";
      for (const auto& s : e.witness()) w += " " + s;
      r.add(w);
    }
  }
  return r;
}

struct RunOptions {
  std::string file;
  std::size_t max_states = 100000;
  std::size_t max_depth = 100000;
  std::string certify;
  bool trace = false;
  bool serial = false;
};

void report_execution(Report& r, const ExecutionReport& e) {
  for (const auto& line : e.trace) r.add(line);
  r.steps = e.steps_explored;
  r.add("states " + std::to_string(e.states) + ", depth " + std::to_string(e.max_depth));
  switch (e.verdict) {
    case Verdict::Terminated: r.verdict = "Terminated"; break;
    case Verdict::BoundExceeded:
      r.verdict = "BoundExceeded";
      r.exit = Bound;
      break;
    case Verdict::DivergenceWitness:
      r.verdict = "Diverges";
      r.exit = Rejected;
      for (std::size_t i = 0; i < e.witness.size(); ++i)
        r.add((i ? "  --> " : "cycle ") + e.witness[i]);
      break;
  }
}

Report cmd_run(const RunOptions& o) {
  Report r;
  Process p = parse_process(read_file(o.file));
  Bounds bounds{o.max_states, o.max_depth};
  if (o.certify.empty()) {
    report_execution(r, o.serial ? explore_serial(p, bounds, o.trace)
                                 : explore(p, bounds, o.trace));
    return r;
  }
  TypeEnv env = load_env(o.certify);
  try {
    report_execution(r, certified_run(env, p, bounds, !o.serial));
  } catch (const TypeError& e) {
    r.reject(code_of(e.code()), e.what());
  } catch (const CertificationFailure& e) {
    r.reject("CERT", std::string(e.what()) + " on " + e.parent() + " --> " + e.child(),
             Uncertified);
  }
  return r;
}

struct EncodeOptions {
  std::string file;
  bool infer = false;
  bool run = false;
  bool impure = false;
  std::size_t max_states = 100000;
};

Report cmd_encode(const EncodeOptions& o) {
  Report r;
  LambdaProgram prog = parse_lambda(read_file(o.file));
  Name p = Name::free("p");
  try {
    r.add("type " + to_string(check_stlc(prog.context, prog.term)));
  } catch (const IllTypedLambda& e) {
    r.reject("STLC", e.what());
    return r;
  }
  Process enc = encode(prog.term, p);
  r.add("process " + to_string(enc));
  r.verdict = "Accepted";
  if (o.impure) {
    TypedEncoding typed = encode_typed(prog.context, prog.term, p);
    try {
      r.weight = check_impure(typed.env, typed.process);
    } catch (const TypeError& e) {
      r.reject(code_of(e.code()), std::string("impure typing: ") + e.what());
      return r;
    }
  }
  if (o.infer) {
    try {
      Inference inf = infer(enc);
      r.weight = inf.weight;
      r.add_block(env_text(inf.env, NameDisplay(inf.process)));
    } catch (const InferenceError& e) {
      r.reject(to_string(e.kind()), e.what());
      return r;
    }
  }
  if (o.run) report_execution(r, explore(enc, Bounds{o.max_states, 100000}));
  return r;
}

void print(const Report& r, bool lines) {
  if (lines) {
    std::cout << "VERDICT=" << r.verdict << "\n";
    if (r.weight) std::cout << "WEIGHT=" << *r.weight << "\n";
    if (r.steps) std::cout << "STEPS=" << *r.steps << "\n";
    if (!r.code.empty()) std::cout << "CODE=" << r.code << "\n";
    return;
  }
  for (const auto& l : r.lines) std::cout << l << "\n";
  std::cout << r.verdict;
  if (!r.code.empty()) std::cout << " (" << r.code << ")";
  std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Termination types for the pi-calculus"};
  app.require_subcommand(1);
  std::string format = "human";
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"human", "lines"}));

  CheckOptions check_opts;
  auto* check_cmd = app.add_subcommand("check", "Type-check an annotated process");
  check_cmd->add_option("file", check_opts.file, "Process file")->required();
  check_cmd->add_flag("--ds", check_opts.ds, "Use the system without subtyping");
  check_cmd->add_flag("--impure", check_opts.impure, "Use the functional/imperative system");
  check_cmd->add_option("--env", check_opts.env, "Environment file (default: FILE.env)");

  InferOptions infer_opts;
  auto* infer_cmd = app.add_subcommand("infer", "Infer levels for a localised process");
  infer_cmd->add_option("file", infer_opts.file, "Process file")->required();
  infer_cmd->add_flag("--ds-equality", infer_opts.ds_equality, "Force equal levels on flows");
  infer_cmd->add_flag("--dump-graph", infer_opts.dump_graph, "Print the constraint graph");

  RunOptions run_opts;
  run_opts.max_states = default_max_states();
  auto* run_cmd = app.add_subcommand("run", "Explore all reductions of a process");
  run_cmd->add_option("file", run_opts.file, "Process file")->required();
  run_cmd->add_option("--max-states", run_opts.max_states, "State bound");
  run_cmd->add_option("--max-depth", run_opts.max_depth, "Depth bound");
  run_cmd->add_option("--certify", run_opts.certify, "Check measure decrease under ENV");
  run_cmd->add_flag("--trace", run_opts.trace, "Print every reduction edge");
  run_cmd->add_flag("--serial", run_opts.serial, "Use the single-threaded explorer");

  EncodeOptions encode_opts;
  encode_opts.max_states = default_max_states();
  auto* encode_cmd = app.add_subcommand("encode", "Encode a simply-typed lambda-term");
  encode_cmd->add_option("file", encode_opts.file, "Lambda file")->required();
  encode_cmd->add_flag("--infer", encode_opts.infer, "Infer levels for the encoding");
  encode_cmd->add_flag("--run", encode_opts.run, "Explore the encoding");
  encode_cmd->add_flag("--impure", encode_opts.impure, "Check with all names functional");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int status = app.exit(e);
    return status == 0 ? Ok : InputError;
  }

  Report report;
  try {
    if (*check_cmd) report = cmd_check(check_opts);
    else if (*infer_cmd) report = cmd_infer(infer_opts);
    else if (*run_cmd) report = cmd_run(run_opts);
    else report = cmd_encode(encode_opts);
  } catch (const IoError& e) {
    report = Report{};
    report.verdict = "Error";
    report.code = "IO";
    report.exit = InputError;
    std::cerr << "piterm: " << e.what() << "\n";
  } catch (const SyntaxError& e) {
    report = Report{};
    report.verdict = "Error";
    report.code = "SYNTAX";
    report.exit = InputError;
    std::cerr << "piterm: syntax error at " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    report = Report{};
    report.verdict = "Error";
    report.code = "ENV";
    report.exit = InputError;
    std::cerr << "piterm: " << e.what() << "\n";
  }
  print(report, format == "lines");
  return report.exit;
}

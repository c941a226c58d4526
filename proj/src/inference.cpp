#include "piterm/inference.hpp"

namespace piterm {

namespace {

void input_subjects(const Process& p, std::set<Name>& out) {
  switch (p.kind()) {
    case Process::Kind::Nil:
    case Process::Kind::Out: break;
    case Process::Kind::Par:
      input_subjects(p.left(), out);
      input_subjects(p.right(), out);
      break;
    case Process::Kind::Res: input_subjects(p.body(), out); break;
    case Process::Kind::In:
    case Process::Kind::RepIn:
      out.insert(p.subject());
      input_subjects(p.body(), out);
      break;
  }
}

class Reconstruction {
 public:
  Reconstruction(const SimpleEnv& env, const LevelGraph& g, const std::vector<unsigned>& levels)
      : env_(env), g_(g), levels_(levels) {}

  unsigned level(const Name& root, const std::vector<std::size_t>& path) const {
    auto id = g_.find(root, path);
    return id ? levels_[*id] : 0;
  }

  // Carried types only ever need the output capability.
  Type carried(const Name& root, std::vector<std::size_t> path, const Type& t) const {
    switch (t.kind) {
      case Type::Kind::Unit:
      case Type::Kind::Nat: return t;
      case Type::Kind::Var: return Type::chan(Cap::Out, level(root, path), {Type::unit()});
      case Type::Kind::Chan: break;
    }
    std::vector<Type> payload;
    for (std::size_t j = 0; j < t.payload.size(); ++j) {
      path.push_back(j);
      payload.push_back(carried(root, path, t.payload[j]));
      path.pop_back();
    }
    return Type::chan(Cap::Out, level(root, path), std::move(payload));
  }

  Type top(const Name& n, bool sharp) const {
    Type t = carried(n, {}, env_.at(n));
    if (t.is_chan() && sharp) t.cap = Cap::Sharp;
    return t;
  }

 private:
  const SimpleEnv& env_;
  const LevelGraph& g_;
  const std::vector<unsigned>& levels_;
};

Process annotate(const Process& p, const TypeEnv& restricted) {
  switch (p.kind()) {
    case Process::Kind::Nil:
    case Process::Kind::Out: return p;
    case Process::Kind::Par:
      return Process::par(annotate(p.left(), restricted), annotate(p.right(), restricted));
    case Process::Kind::Res:
      return Process::res(p.bound(), restricted.at(p.bound()), p.res_kind(),
                          annotate(p.body(), restricted));
    case Process::Kind::In:
      return Process::in(p.subject(), p.params(), annotate(p.body(), restricted));
    case Process::Kind::RepIn:
      return Process::rep_in(p.subject(), p.params(), annotate(p.body(), restricted));
  }
  return p;
}

}  // namespace

Inference reconstruct(const Process& p, const SimpleEnv& env, const LevelGraph& g,
                      const std::vector<unsigned>& levels) {
  Reconstruction r(env, g, levels);
  std::set<Name> inputs;
  input_subjects(p, inputs);
  Inference out;
  for (const Name& n : free_names(p)) out.env.set(n, r.top(n, inputs.count(n) != 0));
  for (const Name& n : restricted_names(p)) out.restricted.set(n, r.top(n, true));
  out.process = annotate(p, out.restricted);
  try {
    out.weight = check(out.env, out.process);
  } catch (const TypeError& e) {
    throw std::logic_error(std::string("reconstructed typing rejected by the checker: ") + e.what());
  }
  out.simple = env;
  out.graph = g;
  out.levels = levels;
  return out;
}

Inference infer(const Process& p, InferMode mode) {
  SimpleEnv simple = infer_simple(p);
  if (!locality_check(p))
    throw InferenceError(InferenceError::Kind::NotLocalised,
                         "a received name is used as an input subject");
  LevelGraph g = build_graph(p, simple);
  std::vector<unsigned> levels = assign_levels(g, mode);
  return reconstruct(p, simple, g, levels);
}

}  // namespace piterm

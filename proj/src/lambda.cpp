#include "piterm/lambda.hpp"

#include <cctype>
#include <optional>
#include <sstream>

#include "piterm/parser.hpp"

namespace piterm {

LambdaTerm Lambda::var(std::string name) {
  auto t = std::make_shared<Lambda>();
  t->kind = Kind::Var;
  t->name = std::move(name);
  return t;
}

LambdaTerm Lambda::abs(std::string param, LambdaTerm body) {
  auto t = std::make_shared<Lambda>();
  t->kind = Kind::Abs;
  t->name = std::move(param);
  t->fn = std::move(body);
  return t;
}

LambdaTerm Lambda::app(LambdaTerm fn, LambdaTerm arg) {
  auto t = std::make_shared<Lambda>();
  t->kind = Kind::App;
  t->fn = std::move(fn);
  t->arg = std::move(arg);
  return t;
}

std::string to_string(const LambdaType& t) {
  switch (t.kind) {
    case LambdaType::Kind::Base: return t.name;
    case LambdaType::Kind::Var: return "'a" + std::to_string(t.var);
    case LambdaType::Kind::Arrow: {
      std::string from = to_string(t.args[0]);
      if (t.args[0].kind == LambdaType::Kind::Arrow) from = "(" + from + ")";
      return from + " -> " + to_string(t.args[1]);
    }
  }
  return "?";
}

std::string to_string(const LambdaTerm& m) {
  switch (m->kind) {
    case Lambda::Kind::Var: return m->name;
    case Lambda::Kind::Abs: return "\\" + m->name + ". " + to_string(m->fn);
    case Lambda::Kind::App: {
      std::string f = to_string(m->fn);
      if (m->fn->kind == Lambda::Kind::Abs) f = "(" + f + ")";
      std::string a = to_string(m->arg);
      if (m->arg->kind != Lambda::Kind::Var) a = "(" + a + ")";
      return f + " " + a;
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct LamToken {
  enum Kind { Ident, Sym, End } kind = End;
  std::string text;
  int line = 1;
  int column = 1;
};

std::vector<LamToken> lam_lex(std::string_view src) {
  std::vector<LamToken> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      ++col;
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    LamToken t;
    t.line = line;
    t.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                                src[j] == '_' || src[j] == '\''))
        ++j;
      t.kind = LamToken::Ident;
      t.text = std::string(src.substr(i, j - i));
    } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      t.kind = LamToken::Sym;
      t.text = "->";
    } else if (std::string_view("\\.():").find(c) != std::string_view::npos) {
      t.kind = LamToken::Sym;
      t.text = std::string(1, c);
    } else {
      throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
    }
    i += t.text.size();
    col += static_cast<int>(t.text.size());
    out.push_back(std::move(t));
  }
  LamToken end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

class LamParser {
 public:
  explicit LamParser(std::string_view src) : toks_(lam_lex(src)) {}

  LambdaProgram program() {
    LambdaProgram prog;
    while (peek().kind == LamToken::Ident && is_sym(":", 1)) {
      std::string name = next().text;
      next();
      prog.context[name] = type();
    }
    prog.term = term();
    expect_end();
    return prog;
  }

  LambdaType type_eof() {
    LambdaType t = type();
    expect_end();
    return t;
  }

  LambdaTerm term_eof() {
    LambdaTerm t = term();
    expect_end();
    return t;
  }

 private:
  std::vector<LamToken> toks_;
  std::size_t pos_ = 0;

  const LamToken& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const LamToken& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  bool is_sym(std::string_view s, std::size_t ahead = 0) const {
    return peek(ahead).kind == LamToken::Sym && peek(ahead).text == s;
  }

  [[noreturn]] void fail(const std::string& what) const {
    const LamToken& t = peek();
    std::string found = t.kind == LamToken::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError("expected " + what + ", found " + found, t.line, t.column);
  }
  void expect(std::string_view s) {
    if (!is_sym(s)) fail("'" + std::string(s) + "'");
    next();
  }
  void expect_end() {
    if (peek().kind != LamToken::End) fail("end of input");
  }
  std::string ident(const char* what) {
    if (peek().kind != LamToken::Ident) fail(what);
    return next().text;
  }

  // type := atom ('->' type)?
  LambdaType type() {
    LambdaType from;
    if (is_sym("(")) {
      next();
      from = type();
      expect(")");
    } else {
      from = LambdaType::base(ident("type"));
    }
    if (!is_sym("->")) return from;
    next();
    return LambdaType::arrow(std::move(from), type());
  }

  // term := '\' x+ '.' term | atom+
  LambdaTerm term() {
    if (is_sym("\\")) {
      next();
      std::vector<std::string> params{ident("parameter")};
      while (peek().kind == LamToken::Ident) params.push_back(next().text);
      expect(".");
      LambdaTerm body = term();
      for (auto it = params.rbegin(); it != params.rend(); ++it) body = Lambda::abs(*it, body);
      return body;
    }
    LambdaTerm acc = atom();
    while (peek().kind == LamToken::Ident || is_sym("(") || is_sym("\\")) {
      if (is_sym("\\")) return Lambda::app(acc, term());
      acc = Lambda::app(acc, atom());
    }
    return acc;
  }

  LambdaTerm atom() {
    if (is_sym("(")) {
      next();
      LambdaTerm t = term();
      expect(")");
      return t;
    }
    return Lambda::var(ident("term"));
  }
};

}  // namespace

LambdaProgram parse_lambda(std::string_view text) { return LamParser(text).program(); }
LambdaType parse_lambda_type(std::string_view text) { return LamParser(text).type_eof(); }
LambdaTerm parse_lambda_term(std::string_view text) { return LamParser(text).term_eof(); }

// ---------------------------------------------------------------------------
// Simple types

namespace {

class LambdaInference {
 public:
  explicit LambdaInference(const LambdaContext& ctx) : ctx_(ctx) {}

  LambdaType infer(const LambdaTerm& m) {
    std::map<std::string, LambdaType> scope;
    return infer(m, scope);
  }

  LambdaType resolve(const LambdaType& t) const {
    LambdaType r = shallow(t);
    for (auto& a : r.args) a = resolve(a);
    return r;
  }

  const std::map<const Lambda*, LambdaType>& recorded() const { return types_; }

 private:
  const LambdaContext& ctx_;
  std::vector<std::optional<LambdaType>> bindings_;
  std::map<const Lambda*, LambdaType> types_;

  LambdaType fresh() {
    bindings_.emplace_back();
    return LambdaType::variable(static_cast<unsigned>(bindings_.size() - 1));
  }

  LambdaType shallow(LambdaType t) const {
    while (t.kind == LambdaType::Kind::Var && bindings_[t.var]) t = *bindings_[t.var];
    return t;
  }

  bool occurs(unsigned v, const LambdaType& t) const {
    LambdaType r = shallow(t);
    if (r.kind == LambdaType::Kind::Var) return r.var == v;
    for (const auto& a : r.args)
      if (occurs(v, a)) return true;
    return false;
  }

  void unify(const LambdaType& a0, const LambdaType& b0) {
    LambdaType a = shallow(a0), b = shallow(b0);
    if (a.kind == LambdaType::Kind::Var && b.kind == LambdaType::Kind::Var && a.var == b.var)
      return;
    if (a.kind != LambdaType::Kind::Var && b.kind == LambdaType::Kind::Var) std::swap(a, b);
    if (a.kind == LambdaType::Kind::Var) {
      if (occurs(a.var, b))
        throw IllTypedLambda("recursive type " + to_string(resolve(a)) + " = " +
                             to_string(resolve(b)));
      bindings_[a.var] = b;
      return;
    }
    if (a.kind != b.kind || a.name != b.name)
      throw IllTypedLambda("cannot match " + to_string(resolve(a)) + " with " +
                           to_string(resolve(b)));
    for (std::size_t i = 0; i < a.args.size(); ++i) unify(a.args[i], b.args[i]);
  }

  LambdaType infer(const LambdaTerm& m, std::map<std::string, LambdaType>& scope) {
    LambdaType t;
    switch (m->kind) {
      case Lambda::Kind::Var: {
        auto it = scope.find(m->name);
        if (it != scope.end()) {
          t = it->second;
        } else {
          auto c = ctx_.find(m->name);
          if (c == ctx_.end()) throw IllTypedLambda("unbound variable '" + m->name + "'");
          t = c->second;
        }
        break;
      }
      case Lambda::Kind::Abs: {
        LambdaType param = fresh();
        auto saved = scope.find(m->name) == scope.end()
                         ? std::optional<LambdaType>{}
                         : std::optional<LambdaType>{scope[m->name]};
        scope[m->name] = param;
        LambdaType body = infer(m->fn, scope);
        if (saved) scope[m->name] = *saved; else scope.erase(m->name);
        t = LambdaType::arrow(param, body);
        break;
      }
      case Lambda::Kind::App: {
        LambdaType f = infer(m->fn, scope);
        LambdaType a = infer(m->arg, scope);
        t = fresh();
        unify(f, LambdaType::arrow(a, t));
        break;
      }
    }
    types_[m.get()] = t;
    return t;
  }
};

}  // namespace

LambdaType check_stlc(const LambdaContext& ctx, const LambdaTerm& m) {
  LambdaInference inf(ctx);
  return inf.resolve(inf.infer(m));
}

Type channel_type(const LambdaType& t) {
  if (t.kind != LambdaType::Kind::Arrow) return Type::chan(Cap::Out, 0, {Type::unit()});
  return Type::chan(Cap::Out, 0,
                    {channel_type(t.args[0]),
                     Type::chan(Cap::Out, 0, {channel_type(t.args[1])})});
}

// ---------------------------------------------------------------------------
// Encoding

namespace {

class Encoder {
 public:
  using Types = std::map<const Lambda*, LambdaType>;

  explicit Encoder(const Types* types) : types_(types) {}

  Process run(const LambdaTerm& m, const Name& p) {
    std::map<std::string, Name> scope;
    return enc(m, p, scope);
  }

 private:
  const Types* types_;
  unsigned counter_ = 0;

  Name fresh(const char* base) { return Name::fresh(base + std::to_string(++counter_)); }

  std::optional<Type> carrier(const LambdaTerm& m) const {
    if (!types_) return std::nullopt;
    return Type::chan(Cap::Out, 0, {channel_type(types_->at(m.get()))});
  }

  Process restrict(const Name& n, std::optional<Type> t, Process body) const {
    return Process::res(n, std::move(t), types_ ? ResKind::Functional : ResKind::Imperative,
                        std::move(body));
  }

  Process enc(const LambdaTerm& m, const Name& p, std::map<std::string, Name>& scope) {
    switch (m->kind) {
      case Lambda::Kind::Var: {
        auto it = scope.find(m->name);
        Name x = it != scope.end() ? it->second : Name::free(m->name);
        return Process::out(p, {Value::ref(x)});
      }
      case Lambda::Kind::Abs: {
        Name y = fresh("y");
        Name x = Name::fresh(m->name);
        Name q = fresh("q");
        auto saved = scope.find(m->name) == scope.end() ? std::optional<Name>{}
                                                        : std::optional<Name>{scope[m->name]};
        scope[m->name] = x;
        Process body = enc(m->fn, q, scope);
        if (saved) scope[m->name] = *saved; else scope.erase(m->name);
        std::optional<Type> ty;
        if (types_) ty = channel_type(types_->at(m.get()));
        return restrict(y, ty,
                        Process::par(Process::rep_in(y, {x, q}, body),
                                     Process::out(p, {Value::ref(y)})));
      }
      case Lambda::Kind::App: {
        Name q = fresh("q");
        Name r = fresh("r");
        Name f = fresh("f");
        Name z = fresh("z");
        Process fun = enc(m->fn, q, scope);
        Process arg = enc(m->arg, r, scope);
        Process call =
            Process::in(q, {f}, Process::in(r, {z}, Process::out(f, {Value::ref(z), Value::ref(p)})));
        return restrict(q, carrier(m->fn),
                        restrict(r, carrier(m->arg), Process::par({fun, arg, call})));
      }
    }
    return Process::nil();
  }
};

}  // namespace

Process encode(const LambdaTerm& m, const Name& p) { return Encoder(nullptr).run(m, p); }

TypedEncoding encode_typed(const LambdaContext& ctx, const LambdaTerm& m, const Name& p) {
  LambdaInference inf(ctx);
  LambdaType top = inf.resolve(inf.infer(m));
  Encoder::Types types;
  for (const auto& [node, t] : inf.recorded()) types.emplace(node, inf.resolve(t));
  TypedEncoding out;
  out.process = Encoder(&types).run(m, p);
  for (const Name& n : free_names(out.process)) {
    if (n == p) continue;
    auto it = ctx.find(n.display());
    if (it != ctx.end()) out.env.gamma.set(n, channel_type(it->second));
  }
  out.env.gamma.set(p, Type::chan(Cap::Out, 0, {channel_type(top)}));
  return out;
}

}  // namespace piterm

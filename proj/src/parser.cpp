#include "piterm/parser.hpp"

#include <cctype>
#include <charconv>

namespace piterm {

SyntaxError::SyntaxError(const std::string& message, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Ident, Number, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                                src[j] == '_' || src[j] == '\''))
        ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Number;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::string_view("<>()[],.|!*+:#;").find(c) != std::string_view::npos) {
      t.kind = Tok::Sym;
      t.text = std::string(1, c);
      advance(1);
    } else {
      throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  Process process_eof() {
    Process p = par();
    expect_end();
    return p;
  }

  Type type_eof() {
    Type t = type();
    expect_end();
    return t;
  }

  std::vector<std::pair<Name, Type>> bindings_eof() {
    std::vector<std::pair<Name, Type>> out;
    while (peek().kind != Tok::End) {
      if (is_sym(",") || is_sym(";")) {
        next();
        continue;
      }
      Name n = Name::free(ident("name"));
      expect(":");
      out.emplace_back(n, type());
    }
    return out;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::pair<std::string, Name>> scope_;

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  bool is_sym(std::string_view s, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::Sym && t.text == s;
  }
  bool is_word(std::string_view s, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::Ident && t.text == s;
  }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError("expected " + what + ", found " + found, t.line, t.column);
  }

  void expect(std::string_view s) {
    if (!is_sym(s)) fail("'" + std::string(s) + "'");
    next();
  }

  void expect_end() {
    if (peek().kind != Tok::End) fail("end of input");
  }

  std::string ident(const char* what) {
    if (peek().kind != Tok::Ident || is_word("new") || is_word("fun")) fail(what);
    return next().text;
  }

  Name use(const std::string& spelling) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == spelling) return it->second;
    return Name::free(spelling);
  }

  Name bind(const std::string& spelling) {
    Name n = Name::fresh(spelling);
    scope_.emplace_back(spelling, n);
    return n;
  }

  // par := prefixed ('|' prefixed)*
  Process par() {
    std::vector<Process> parts{prefixed()};
    while (is_sym("|")) {
      next();
      parts.push_back(prefixed());
    }
    return Process::par(parts);
  }

  struct Binder {
    Name name;
    std::optional<Type> annotation;
    ResKind kind = ResKind::Imperative;
  };

  std::vector<Binder> binders() {
    std::vector<Binder> out;
    do {
      if (is_sym(",")) next();
      std::string spelling = ident("restricted name");
      Binder b;
      for (int round = 0; round < 2; ++round) {
        if (is_word("fun")) {
          next();
          b.kind = ResKind::Functional;
        } else if (is_sym(":")) {
          next();
          b.annotation = type();
        }
      }
      b.name = bind(spelling);
      out.push_back(std::move(b));
    } while (is_sym(","));
    return out;
  }

  Process wrap(const std::vector<Binder>& bs, Process body, std::size_t scope_mark) {
    for (auto it = bs.rbegin(); it != bs.rend(); ++it)
      body = Process::res(it->name, it->annotation, it->kind, std::move(body));
    scope_.resize(scope_mark);
    return body;
  }

  Process prefixed() {
    const Token& t = peek();
    if (t.kind == Tok::Number && t.text == "0") {
      next();
      return Process::nil();
    }
    if (is_word("new")) {
      next();
      std::size_t mark = scope_.size();
      auto bs = binders();
      expect(".");
      return wrap(bs, par(), mark);
    }
    if (is_sym("(") && is_word("new", 1)) {
      next();
      next();
      std::size_t mark = scope_.size();
      auto bs = binders();
      if (is_sym(".")) {  // (new a. P)
        next();
        Process body = wrap(bs, par(), mark);
        expect(")");
        return body;
      }
      expect(")");
      return wrap(bs, prefixed(), mark);
    }
    if (is_sym("(")) {
      next();
      Process p = par();
      expect(")");
      return p;
    }
    if (is_sym("!")) {
      next();
      Name subject = use(ident("replicated input subject"));
      return input(subject, true);
    }
    if (t.kind != Tok::Ident) fail("process");
    Name subject = use(ident("channel name"));
    if (is_sym("<")) {
      next();
      std::vector<Value> vs;
      if (!is_sym(">")) {
        vs.push_back(value());
        while (is_sym(",")) {
          next();
          vs.push_back(value());
        }
      }
      expect(">");
      if (vs.empty()) vs.push_back(Value::star());
      return Process::out(subject, std::move(vs));
    }
    if (is_sym("(") || is_sym(".")) return input(subject, false);
    return Process::out(subject, {Value::star()});
  }

  Process input(Name subject, bool replicated) {
    std::size_t mark = scope_.size();
    std::vector<std::string> spellings;
    if (is_sym("(")) {
      next();
      if (!is_sym(")")) {
        spellings.push_back(ident("parameter"));
        while (is_sym(",")) {
          next();
          spellings.push_back(ident("parameter"));
        }
      }
      expect(")");
    } else if (!is_sym(".")) {
      fail("'(' or '.' after input subject");
    }
    std::vector<Name> params;
    for (const auto& s : spellings) params.push_back(bind(s));
    Process body;
    if (is_sym(".")) {
      next();
      body = prefixed();
    }
    scope_.resize(mark);
    return replicated ? Process::rep_in(subject, std::move(params), body)
                      : Process::in(subject, std::move(params), body);
  }

  // value := term ('+' term)* ; term := atom ('*' atom)*
  Value value() {
    Value v = term();
    while (is_sym("+")) {
      next();
      v = Value::add(v, term());
    }
    return v;
  }

  Value term() {
    Value v = atom();
    while (is_sym("*") && starts_atom(1)) {
      next();
      v = Value::mul(v, atom());
    }
    return v;
  }

  bool starts_atom(std::size_t ahead) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::Ident || t.kind == Tok::Number || is_sym("(", ahead) ||
           is_sym("*", ahead);
  }

  Value atom() {
    const Token& t = peek();
    if (is_sym("*")) {
      next();
      return Value::star();
    }
    if (is_sym("(")) {
      next();
      Value v = value();
      expect(")");
      return v;
    }
    if (t.kind == Tok::Number) {
      std::uint64_t n = 0;
      std::from_chars(t.text.data(), t.text.data() + t.text.size(), n);
      next();
      return Value::number(n);
    }
    if (t.kind == Tok::Ident) return Value::ref(use(ident("value")));
    fail("value");
  }

  Type type() {
    const Token& t = peek();
    if (is_sym("#")) {
      next();
      if (peek().kind != Tok::Number) fail("level after '#'");
      unsigned level = static_cast<unsigned>(std::stoul(next().text));
      return Type::chan(Cap::Sharp, level, payload());
    }
    if (t.kind != Tok::Ident) fail("type");
    std::string word = next().text;
    if (word == "Unit") return Type::unit();
    if (word == "Nat") return Type::nat();
    if ((word[0] == 'o' || word[0] == 'i') && word.size() > 1 &&
        word.find_first_not_of("0123456789", 1) == std::string::npos) {
      unsigned level = static_cast<unsigned>(std::stoul(word.substr(1)));
      return Type::chan(word[0] == 'o' ? Cap::Out : Cap::In, level, payload());
    }
    throw SyntaxError("unknown type '" + word + "'", t.line, t.column);
  }

  std::vector<Type> payload() {
    expect("[");
    std::vector<Type> ts;
    if (!is_sym("]")) {
      ts.push_back(type());
      while (is_sym(",")) {
        next();
        ts.push_back(type());
      }
    }
    expect("]");
    return ts;
  }
};

}  // namespace

Process parse_process(std::string_view text) { return Parser(text).process_eof(); }

Type parse_type(std::string_view text) { return Parser(text).type_eof(); }

std::vector<std::pair<Name, Type>> parse_bindings(std::string_view text) {
  return Parser(text).bindings_eof();
}

}  // namespace piterm

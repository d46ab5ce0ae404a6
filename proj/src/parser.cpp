#include "fuzzynf/parser.hpp"

#include <cctype>
#include <map>
#include <utility>

namespace fnf {

namespace {

enum class Tok {
  Ident,
  Nat,
  Slash,
  LParen,
  RParen,
  Comma,
  Dot,
  Colon,
  Eq,
  Lt,
  Tilde,
  Amp,
  Bar,
  Arrow,
  DArrow,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

std::vector<Token> lex(std::string_view src, SourcePos origin) {
  std::vector<Token> out;
  SourcePos pos = origin;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    SourcePos at = pos;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), at});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Nat, std::string(src.substr(i, j - i)), at});
      advance(j - i);
      continue;
    }
    auto rest = src.substr(i);
    if (rest.starts_with("<->")) {
      out.push_back({Tok::DArrow, "<->", at});
      advance(3);
      continue;
    }
    if (rest.starts_with("->")) {
      out.push_back({Tok::Arrow, "->", at});
      advance(2);
      continue;
    }
    Tok kind;
    switch (c) {
      case '/': kind = Tok::Slash; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case ',': kind = Tok::Comma; break;
      case '.': kind = Tok::Dot; break;
      case ':': kind = Tok::Colon; break;
      case '=': kind = Tok::Eq; break;
      case '<': kind = Tok::Lt; break;
      case '~': kind = Tok::Tilde; break;
      case '&': kind = Tok::Amp; break;
      case '|': kind = Tok::Bar; break;
      default:
        throw SyntaxError(SyntaxError::Code::Lexical, at,
                          std::string("unexpected character '") + c + "'");
    }
    out.push_back({kind, std::string(1, c), at});
    advance(1);
  }
  out.push_back({Tok::End, "", pos});
  return out;
}

bool is_keyword(const std::string& s) {
  return s == "forall" || s == "exists" || s == "in" || s == "mu";
}

// Untyped syntax produced by the recursive-descent pass.
struct RawTerm {
  bool literal = false;
  std::string text;  // identifier, or literal text
  Degree value;
  SourcePos pos;
};

struct RawNode {
  enum class Kind { In, Mu, Cmp, Not, Binary, Quant };
  Kind kind;
  NodeKind op = NodeKind::And;  // Binary/Quant: connective; Mu/Cmp: MuEq-or-DegEq vs MuLt-or-DegLt
  bool less = false;            // Mu/Cmp relation
  std::vector<RawTerm> terms;
  std::vector<RawNode> children;
  std::string var;
  Sort sort = Sort::Set;
  SourcePos pos;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  RawNode parse_all() {
    RawNode f = formula();
    if (peek().kind != Tok::End) fail(peek(), "unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  Token take() { return toks_[i_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++i_;
    return true;
  }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw SyntaxError(SyntaxError::Code::Parse, t.pos, msg);
  }
  Token expect(Tok k, const char* what) {
    if (peek().kind != k) {
      fail(peek(), std::string("expected ") + what + ", found '" +
                       (peek().kind == Tok::End ? std::string("end of input") : peek().text) + "'");
    }
    return take();
  }
  bool at_keyword(const char* kw) const { return peek().kind == Tok::Ident && peek().text == kw; }

  RawNode formula() {
    if (at_keyword("forall") || at_keyword("exists")) {
      Token q = take();
      Token name = expect(Tok::Ident, "variable name");
      if (is_keyword(name.text)) fail(name, "keyword '" + name.text + "' used as variable");
      expect(Tok::Colon, "':'");
      Token s = expect(Tok::Ident, "sort U or D");
      if (s.text != "U" && s.text != "D") fail(s, "unknown sort '" + s.text + "'");
      expect(Tok::Dot, "'.'");
      RawNode n{RawNode::Kind::Quant};
      n.op = q.text == "forall" ? NodeKind::Forall : NodeKind::Exists;
      n.var = name.text;
      n.sort = s.text == "U" ? Sort::Set : Sort::Degree;
      n.pos = q.pos;
      n.children.push_back(formula());
      return n;
    }
    return iff();
  }

  RawNode make_binary(NodeKind op, RawNode a, RawNode b, SourcePos pos) {
    RawNode n{RawNode::Kind::Binary};
    n.op = op;
    n.pos = pos;
    n.children.push_back(std::move(a));
    n.children.push_back(std::move(b));
    return n;
  }

  RawNode iff() {
    RawNode lhs = impl();
    while (peek().kind == Tok::DArrow) {
      SourcePos pos = take().pos;
      lhs = make_binary(NodeKind::Iff, std::move(lhs), impl(), pos);
    }
    return lhs;
  }

  RawNode impl() {
    RawNode lhs = disj();
    if (peek().kind == Tok::Arrow) {
      SourcePos pos = take().pos;
      return make_binary(NodeKind::Implies, std::move(lhs), impl(), pos);
    }
    return lhs;
  }

  RawNode disj() {
    RawNode lhs = conj();
    while (peek().kind == Tok::Bar) {
      SourcePos pos = take().pos;
      lhs = make_binary(NodeKind::Or, std::move(lhs), conj(), pos);
    }
    return lhs;
  }

  RawNode conj() {
    RawNode lhs = neg();
    while (peek().kind == Tok::Amp) {
      SourcePos pos = take().pos;
      lhs = make_binary(NodeKind::And, std::move(lhs), neg(), pos);
    }
    return lhs;
  }

  RawNode neg() {
    if (peek().kind == Tok::Tilde) {
      RawNode n{RawNode::Kind::Not};
      n.pos = take().pos;
      n.children.push_back(neg());
      return n;
    }
    return atom();
  }

  RawTerm term() {
    const Token& t = peek();
    if (t.kind == Tok::Ident) {
      if (is_keyword(t.text)) fail(t, "keyword '" + t.text + "' used as term");
      Token id = take();
      return RawTerm{false, id.text, {}, id.pos};
    }
    if (t.kind == Tok::Nat) {
      Token num = take();
      std::string text = num.text;
      if (accept(Tok::Slash)) text += "/" + expect(Tok::Nat, "denominator").text;
      try {
        return RawTerm{true, text, Degree::parse(text), num.pos};
      } catch (const std::invalid_argument& e) {
        throw SyntaxError(SyntaxError::Code::BadLiteral, num.pos, e.what());
      }
    }
    fail(t, "expected a term, found '" + (t.kind == Tok::End ? std::string("end of input") : t.text) + "'");
  }

  RawNode atom() {
    if (accept(Tok::LParen)) {
      RawNode f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    SourcePos pos = peek().pos;
    if (at_keyword("in")) {
      take();
      expect(Tok::LParen, "'('");
      RawNode n{RawNode::Kind::In};
      n.pos = pos;
      n.terms.push_back(term());
      expect(Tok::Comma, "','");
      n.terms.push_back(term());
      expect(Tok::RParen, "')'");
      return n;
    }
    if (at_keyword("mu")) {
      take();
      expect(Tok::LParen, "'('");
      RawNode n{RawNode::Kind::Mu};
      n.pos = pos;
      n.terms.push_back(term());
      expect(Tok::Comma, "','");
      n.terms.push_back(term());
      expect(Tok::RParen, "')'");
      n.less = relation();
      n.terms.push_back(term());
      return n;
    }
    RawNode n{RawNode::Kind::Cmp};
    n.pos = pos;
    n.terms.push_back(term());
    n.less = relation();
    n.terms.push_back(term());
    return n;
  }

  bool relation() {
    if (accept(Tok::Eq)) return false;
    if (accept(Tok::Lt)) return true;
    fail(peek(), "expected '=' or '<'");
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

// Resolves scopes, renames shadowing binders and infers sorts of free identifiers.
class Elaborator {
 public:
  Elaborator(const ParseContext& ctx, std::set<std::string> used) : ctx_(ctx), used_(std::move(used)) {
    for (const auto& c : ctx_.constants) used_.insert(c);
    if (ctx_.declared) {
      for (const auto& [name, sort] : *ctx_.declared) {
        used_.insert(name);
        free_sorts_[name] = sort;
      }
    }
  }

  Formula run(const RawNode& root) {
    infer(root);
    // Equalities between free identifiers of unknown sort are settled last.
    bool progress = true;
    while (progress) {
      progress = false;
      for (auto& [a, b, pos] : deferred_) {
        auto sa = known(a), sb = known(b);
        if (sa && !sb) {
          assign(b, *sa);
          progress = true;
        } else if (sb && !sa) {
          assign(a, *sb);
          progress = true;
        }
      }
    }
    for (auto& [a, b, pos] : deferred_) {
      if (!known(a)) assign(a, Sort::Set);
      if (!known(b)) assign(b, Sort::Set);
    }
    scope_.clear();
    return sort_check(build(root));
  }

 private:
  struct Binding {
    std::string original;
    std::string renamed;
    Sort sort;
  };

  const Binding* bound(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->original == name) return &*it;
    }
    return nullptr;
  }

  // Sort of a term when it can be determined locally; nullopt for a free identifier of unknown sort.
  std::optional<Sort> sort_of(const RawTerm& t) {
    if (t.literal) return Sort::Degree;
    if (const Binding* b = bound(t.text)) return b->sort;
    if (ctx_.constants.count(t.text)) return Sort::Set;
    check_free(t);
    return known(t.text);
  }

  std::optional<Sort> known(const std::string& name) const {
    auto it = free_sorts_.find(name);
    if (it == free_sorts_.end()) return std::nullopt;
    return it->second;
  }

  void assign(const std::string& name, Sort s) { free_sorts_.emplace(name, s); }

  void check_free(const RawTerm& t) const {
    if (ctx_.declared && !ctx_.declared->count(t.text)) {
      throw SyntaxError(SyntaxError::Code::UnboundVariable, t.pos, "unbound variable '" + t.text + "'");
    }
  }

  void require(const RawTerm& t, Sort expected) {
    auto s = sort_of(t);
    if (!s) {
      assign(t.text, expected);
      return;
    }
    if (*s != expected) throw SortClash(t.pos, expected, *s, t.text);
  }

  void infer(const RawNode& n) {
    switch (n.kind) {
      case RawNode::Kind::In:
        require(n.terms[0], Sort::Set);
        require(n.terms[1], Sort::Set);
        return;
      case RawNode::Kind::Mu:
        require(n.terms[0], Sort::Set);
        require(n.terms[1], Sort::Set);
        require(n.terms[2], Sort::Degree);
        return;
      case RawNode::Kind::Cmp: {
        if (n.less) {
          require(n.terms[0], Sort::Degree);
          require(n.terms[1], Sort::Degree);
          return;
        }
        auto sa = sort_of(n.terms[0]);
        auto sb = sort_of(n.terms[1]);
        if (sa && sb) {
          if (*sa != *sb) throw SortClash(n.terms[1].pos, *sa, *sb, n.terms[1].text);
        } else if (sa) {
          require(n.terms[1], *sa);
        } else if (sb) {
          require(n.terms[0], *sb);
        } else {
          deferred_.push_back({n.terms[0].text, n.terms[1].text, n.pos});
        }
        return;
      }
      case RawNode::Kind::Quant:
        scope_.push_back(bind(n));
        infer(n.children[0]);
        scope_.pop_back();
        return;
      default:
        for (const auto& c : n.children) infer(c);
    }
  }

  Binding bind(const RawNode& n) {
    bool clashes = bound(n.var) || ctx_.constants.count(n.var) ||
                   (ctx_.declared && ctx_.declared->count(n.var));
    std::string name = n.var;
    if (clashes) {
      auto it = renames_.find(n.pos.line * 100000 + n.pos.column);
      if (it != renames_.end()) {
        name = it->second;
      } else {
        name = fresh_name(n.var, used_);
        used_.insert(name);
        renames_[n.pos.line * 100000 + n.pos.column] = name;
      }
    }
    return Binding{n.var, name, n.sort};
  }

  Term resolve(const RawTerm& t) {
    if (t.literal) return Term::literal(t.value, t.pos);
    if (const Binding* b = bound(t.text)) return Term::var(b->renamed, b->sort, t.pos);
    if (ctx_.constants.count(t.text)) return Term::constant(t.text, t.pos);
    return Term::var(t.text, *known(t.text), t.pos);
  }

  Formula build(const RawNode& n) {
    switch (n.kind) {
      case RawNode::Kind::In:
        return Formula::crisp_in(resolve(n.terms[0]), resolve(n.terms[1]), n.pos);
      case RawNode::Kind::Mu: {
        Term a = resolve(n.terms[0]), b = resolve(n.terms[1]), d = resolve(n.terms[2]);
        return n.less ? Formula::mu_lt(a, b, d, n.pos) : Formula::mu_eq(a, b, d, n.pos);
      }
      case RawNode::Kind::Cmp: {
        Term a = resolve(n.terms[0]), b = resolve(n.terms[1]);
        if (n.less) return Formula::deg_lt(a, b, n.pos);
        return a.sort == Sort::Degree ? Formula::deg_eq(a, b, n.pos) : Formula::set_eq(a, b, n.pos);
      }
      case RawNode::Kind::Not:
        return Formula::negation(build(n.children[0]), n.pos);
      case RawNode::Kind::Binary:
        return Formula::binary(n.op, build(n.children[0]), build(n.children[1]), n.pos);
      case RawNode::Kind::Quant: {
        Binding b = bind(n);
        scope_.push_back(b);
        Formula body = build(n.children[0]);
        scope_.pop_back();
        return Formula::quantifier(n.op, Var{b.renamed, b.sort}, std::move(body), n.pos);
      }
    }
    throw std::logic_error("unreachable raw node");
  }

  const ParseContext& ctx_;
  std::set<std::string> used_;
  std::map<std::string, Sort> free_sorts_;
  std::vector<Binding> scope_;
  std::vector<std::tuple<std::string, std::string, SourcePos>> deferred_;
  std::map<long, std::string> renames_;
};

}  // namespace

Formula parse_formula(std::string_view text, const ParseContext& ctx) {
  auto toks = lex(text, ctx.origin);
  std::set<std::string> idents;
  for (const auto& t : toks) {
    if (t.kind == Tok::Ident) idents.insert(t.text);
  }
  RawNode raw = Parser(std::move(toks)).parse_all();
  return Elaborator(ctx, std::move(idents)).run(raw);
}

}  // namespace fnf

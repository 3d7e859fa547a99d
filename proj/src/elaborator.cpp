#include "contcalc/elaborator.hpp"

#include <cctype>
#include <set>
#include <sstream>

#include "contcalc/w_fixpoint.hpp"

namespace contcalc {

ExprPtr FunctorExpr::zero() { return std::make_shared<const FunctorExpr>(FunctorExpr{Kind::zero, {}, {}, {}, {}}); }

ExprPtr FunctorExpr::one() { return std::make_shared<const FunctorExpr>(FunctorExpr{Kind::one, {}, {}, {}, {}}); }

ExprPtr FunctorExpr::param(std::string name) {
  return std::make_shared<const FunctorExpr>(FunctorExpr{Kind::param, std::move(name), {}, {}, {}});
}

ExprPtr FunctorExpr::rec() { return std::make_shared<const FunctorExpr>(FunctorExpr{Kind::rec, {}, {}, {}, {}}); }

ExprPtr FunctorExpr::sum(ExprPtr l, ExprPtr r) {
  return std::make_shared<const FunctorExpr>(FunctorExpr{Kind::sum, {}, {}, std::move(l), std::move(r)});
}

ExprPtr FunctorExpr::prod(ExprPtr l, ExprPtr r) {
  return std::make_shared<const FunctorExpr>(FunctorExpr{Kind::prod, {}, {}, std::move(l), std::move(r)});
}

ExprPtr FunctorExpr::constant(Domain d) {
  return std::make_shared<const FunctorExpr>(FunctorExpr{Kind::constant, {}, std::move(d), {}, {}});
}

ExprPtr FunctorExpr::exp(std::uint64_t n, ExprPtr body) { return exp(Domain::fin(n), std::move(body)); }

ExprPtr FunctorExpr::exp(Domain d, ExprPtr body) {
  if (!d.finite()) throw Error("exponent domain " + d.describe() + " is not finite");
  return std::make_shared<const FunctorExpr>(FunctorExpr{Kind::exp, {}, std::move(d), std::move(body), {}});
}

std::size_t FunctorExpr::exponent() const { return domain.elements().size(); }

bool same_expr(const FunctorExpr& a, const FunctorExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case FunctorExpr::Kind::zero:
    case FunctorExpr::Kind::one:
    case FunctorExpr::Kind::rec:
      return true;
    case FunctorExpr::Kind::param:
      return a.name == b.name;
    case FunctorExpr::Kind::sum:
    case FunctorExpr::Kind::prod:
      return same_expr(*a.left, *b.left) && same_expr(*a.right, *b.right);
    case FunctorExpr::Kind::constant:
      return a.domain.describe() == b.domain.describe();
    case FunctorExpr::Kind::exp:
      return a.domain.describe() == b.domain.describe() && same_expr(*a.left, *b.left);
  }
  return false;
}

IndexSet Decl::body_indices() const { return IndexSet(params).with(binder); }

namespace {

struct Lexeme {
  enum class Kind { ident, number, punct, end };
  Kind kind = Kind::end;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

std::vector<Lexeme> lex(std::string_view text, std::size_t line) {
  std::vector<Lexeme> out;
  std::size_t col = 1;
  std::size_t k = 0;
  while (k < text.size()) {
    char c = text[k];
    if (c == '\n') {
      ++line;
      col = 1;
      ++k;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++k;
      ++col;
      continue;
    }
    if (c == '#') {
      while (k < text.size() && text[k] != '\n') ++k;
      continue;
    }
    Lexeme lx;
    lx.line = line;
    lx.column = col;
    std::size_t start = k;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (k < text.size() && (std::isalnum(static_cast<unsigned char>(text[k])) || text[k] == '_' ||
                                 text[k] == '\'')) {
        ++k;
      }
      lx.kind = Lexeme::Kind::ident;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
      lx.kind = Lexeme::Kind::number;
    } else if (c == '-' && k + 1 < text.size() && text[k + 1] == '>') {
      k += 2;
      lx.kind = Lexeme::Kind::punct;
    } else if (std::string_view("()[],=+*").find(c) != std::string_view::npos) {
      ++k;
      lx.kind = Lexeme::Kind::punct;
    } else {
      throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }
    lx.text = std::string(text.substr(start, k - start));
    col += k - start;
    out.push_back(std::move(lx));
  }
  Lexeme end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

class DeclParser {
 public:
  explicit DeclParser(std::vector<Lexeme> lexemes) : lx_(std::move(lexemes)) {}

  Decl decl() {
    Decl d;
    d.line = peek().line;
    if (accept("mu")) {
      d.fixity = Fixity::mu;
    } else if (accept("nu")) {
      d.fixity = Fixity::nu;
    } else {
      fail("expected 'mu' or 'nu'");
    }
    d.name = ident("declaration name");
    expect("(");
    if (!peek_is(")")) {
      do {
        auto tok = peek();
        auto p = ident("parameter name");
        if (p == d.binder) throw ParseError(tok.line, tok.column, "'" + p + "' is reserved");
        for (const auto& q : d.params) {
          if (q == p) throw ParseError(tok.line, tok.column, "duplicate parameter '" + p + "'");
        }
        d.params.push_back(p);
      } while (accept(","));
    }
    expect(")");
    expect("=");
    params_ = d.params;
    d.body = expr();
    if (peek().kind != Lexeme::Kind::end) fail("unexpected '" + peek().text + "'");
    return d;
  }

 private:
  ExprPtr expr() {
    auto e = term();
    while (accept("+")) e = FunctorExpr::sum(e, term());
    return e;
  }

  ExprPtr term() {
    auto e = factor();
    while (accept("*")) e = FunctorExpr::prod(e, factor());
    return e;
  }

  ExprPtr factor() {
    const auto& tok = peek();
    if (tok.kind == Lexeme::Kind::end) fail("syntax error at end of input");
    if (tok.kind == Lexeme::Kind::number) {
      auto text = tok.text;
      ++pos_;
      if (text == "0") return FunctorExpr::zero();
      if (text == "1") return FunctorExpr::one();
      throw ParseError(tok.line, tok.column, "only 0 and 1 are constants; use [n] -> for exponents");
    }
    if (tok.kind == Lexeme::Kind::ident) {
      auto name = tok.text;
      auto t = tok;
      ++pos_;
      if (name == "rec") return FunctorExpr::rec();
      for (const auto& p : params_) {
        if (p == name) return FunctorExpr::param(name);
      }
      throw ParseError(t.line, t.column, "unbound identifier '" + name + "'");
    }
    if (accept("(")) {
      auto e = expr();
      expect(")");
      return e;
    }
    if (accept("[")) {
      const auto& n = peek();
      if (n.kind != Lexeme::Kind::number) fail("expected an exponent size");
      std::uint64_t size = 0;
      try {
        size = std::stoull(n.text);
      } catch (const std::out_of_range&) {
        throw ParseError(n.line, n.column, "exponent too large");
      }
      ++pos_;
      expect("]");
      expect("->");
      return FunctorExpr::exp(size, factor());
    }
    fail("unexpected '" + tok.text + "'");
  }

  const Lexeme& peek() const { return lx_[pos_]; }
  bool peek_is(std::string_view t) const {
    return lx_[pos_].kind != Lexeme::Kind::end && lx_[pos_].kind != Lexeme::Kind::number && lx_[pos_].text == t;
  }
  bool accept(std::string_view t) {
    if (!peek_is(t)) return false;
    ++pos_;
    return true;
  }
  void expect(std::string_view t) {
    if (!accept(t)) {
      if (peek().kind == Lexeme::Kind::end) fail("expected '" + std::string(t) + "' at end of input");
      fail("expected '" + std::string(t) + "' but found '" + peek().text + "'");
    }
  }
  std::string ident(const char* what) {
    const auto& tok = peek();
    if (tok.kind != Lexeme::Kind::ident) fail(std::string("expected ") + what);
    if (tok.text == "mu" || tok.text == "nu") fail(std::string("expected ") + what + ", found keyword");
    ++pos_;
    return tok.text;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const auto& tok = peek();
    if (tok.kind == Lexeme::Kind::end && msg.find("end of input") == std::string::npos) {
      throw ParseError(tok.line, tok.column, msg + " at end of input");
    }
    throw ParseError(tok.line, tok.column, msg);
  }

  std::vector<Lexeme> lx_;
  std::size_t pos_ = 0;
  std::vector<std::string> params_;
};

void render_into(const FunctorExpr& e, int level, std::string& out) {
  using K = FunctorExpr::Kind;
  auto wrap = [&](int own, auto&& body) {
    bool paren = own < level;
    if (paren) out += "(";
    body();
    if (paren) out += ")";
  };
  switch (e.kind) {
    case K::zero:
      out += "0";
      return;
    case K::one:
      out += "1";
      return;
    case K::param:
      out += e.name;
      return;
    case K::rec:
      out += "rec";
      return;
    case K::constant:
      out += "const<" + e.domain.describe() + ">";
      return;
    case K::sum:
      wrap(0, [&] {
        render_into(*e.left, 0, out);
        out += " + ";
        render_into(*e.right, 1, out);
      });
      return;
    case K::prod:
      wrap(1, [&] {
        render_into(*e.left, 1, out);
        out += " * ";
        render_into(*e.right, 2, out);
      });
      return;
    case K::exp:
      out += "[" + std::to_string(e.exponent()) + "] -> ";
      render_into(*e.left, 2, out);
      return;
  }
}

}  // namespace

Decl parse_decl(std::string_view text) { return DeclParser(lex(text, 1)).decl(); }

std::vector<Decl> parse_decls(std::string_view text) {
  std::vector<Decl> out;
  std::set<std::string> names;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    ++lineno;
    auto lexemes = lex(line, lineno);
    if (lexemes.size() == 1) continue;
    auto d = DeclParser(std::move(lexemes)).decl();
    if (!names.insert(d.name).second) throw ParseError(lineno, 1, "duplicate declaration '" + d.name + "'");
    out.push_back(std::move(d));
  }
  return out;
}

std::string render(const FunctorExpr& e) {
  std::string out;
  render_into(e, 0, out);
  return out;
}

std::string render(const Decl& d) {
  std::string out = std::string(to_string(d.fixity)) + " " + d.name + "(";
  for (std::size_t k = 0; k < d.params.size(); ++k) {
    if (k) out += ", ";
    out += d.params[k];
  }
  return out + ") = " + render(*d.body);
}

Container to_container(const FunctorExpr& e, const IndexSet& indices) {
  using K = FunctorExpr::Kind;
  Container c;
  c.indices = indices;
  auto none = [](std::size_t, const Value&) { return Domain::empty(); };
  switch (e.kind) {
    case K::zero:
      c.shapes = Domain::empty();
      c.pos = none;
      return c;
    case K::one:
      c.shapes = Domain::unit();
      c.pos = none;
      return c;
    case K::constant:
      c.shapes = e.domain;
      c.pos = none;
      return c;
    case K::param:
    case K::rec: {
      if (indices.size() == 0) throw Error("to_container: no index for " + render(e));
      std::size_t at = e.kind == K::rec ? indices.size() - 1 : indices.at(e.name);
      c.shapes = Domain::unit();
      c.pos = [at](std::size_t i, const Value&) { return i == at ? Domain::unit() : Domain::empty(); };
      return c;
    }
    case K::sum: {
      auto l = to_container(*e.left, indices);
      auto r = to_container(*e.right, indices);
      c.shapes = Domain::sum(l.shapes, r.shapes);
      c.pos = [l, r](std::size_t i, const Value& s) {
        if (s.is(Value::Kind::inl)) return l.pos(i, s.inner());
        if (s.is(Value::Kind::inr)) return r.pos(i, s.inner());
        throw Error("sum container: shape " + s.render() + " is not inl/inr");
      };
      return c;
    }
    case K::prod: {
      auto l = to_container(*e.left, indices);
      auto r = to_container(*e.right, indices);
      c.shapes = Domain::prod(l.shapes, r.shapes);
      c.pos = [l, r](std::size_t i, const Value& s) {
        if (!s.is(Value::Kind::pair)) throw Error("product container: shape " + s.render() + " is not a pair");
        return Domain::sum(l.pos(i, s.first()), r.pos(i, s.second()));
      };
      return c;
    }
    case K::exp: {
      // A → F as the right-nested product F × (F × ... ), one factor per
      // element of A; A = Empty gives the unit container.
      std::size_t n = e.exponent();
      if (n == 0) return to_container(*FunctorExpr::one(), indices);
      ExprPtr acc = e.left;
      for (std::size_t k = 1; k < n; ++k) acc = FunctorExpr::prod(e.left, acc);
      return to_container(*acc, indices);
    }
  }
  throw Error("to_container: unknown expression kind");
}

SplitContainer body_split(const Decl& d) {
  auto s = split_last(to_container(*d.body, d.body_indices()));
  s.rec_name = d.binder;
  return s;
}

Elaborated elaborate(const Decl& d, Registry reg) {
  Elaborated out;
  out.decl = d;
  out.body = body_split(d);
  if (d.fixity == Fixity::mu) {
    out.fixed = mu_container(out.body);
  } else {
    out.registry = reg ? std::move(reg) : std::make_shared<MachineRegistry>();
    out.fixed = nu_container(out.body, out.registry);
  }
  return out;
}

std::string summarize(const Elaborated& e) {
  std::ostringstream os;
  os << render(e.decl) << "\n";
  os << "  fixity: " << to_string(e.decl.fixity) << "\n";
  os << "  indices: ";
  if (e.body.base.indices.size() == 0) os << "(none)";
  for (std::size_t i = 0; i < e.body.base.indices.size(); ++i) os << (i ? ", " : "") << e.body.base.indices.name(i);
  os << "\n";
  os << "  body shapes: " << e.body.base.shapes.describe() << "\n";
  Budget b{2, 8};
  auto sample = e.body.base.shapes.enumerate(b);
  for (const auto& s : sample.values) {
    os << "    " << s.render() << ":";
    for (std::size_t i = 0; i < e.body.base.indices.size(); ++i) {
      auto p = e.body.base.positions(i, s).enumerate(b);
      os << " " << e.body.base.indices.name(i) << "=" << p.values.size() << (p.complete() ? "" : "+");
    }
    auto q = e.body.q(s).enumerate(b);
    os << " " << e.body.rec_name << "=" << q.values.size() << (q.complete() ? "" : "+") << "\n";
  }
  if (!sample.complete()) os << "    ...\n";
  if (e.decl.fixity == Fixity::mu) {
    os << "  shapes: W-domain (finite trees)\n";
    os << "  positions: Pos paths (mu), finite per tree\n";
  } else {
    os << "  shapes: M-domain (regular trees as coalgebra machines)\n";
    os << "  positions: Pos paths (nu), enumerated by path budget\n";
  }
  return os.str();
}

}  // namespace contcalc

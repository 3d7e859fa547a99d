#include "contcalc/text.hpp"

#include <cctype>
#include <charconv>

namespace contcalc {

namespace {

bool is_punct(char c) {
  switch (c) {
    case '(':
    case ')':
    case '[':
    case ']':
    case '{':
    case '}':
    case ',':
    case ';':
      return true;
    default:
      return false;
  }
}

std::uint64_t to_number(std::string_view digits, const TokenStream& ts) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) {
    ts.fail("malformed number '" + std::string(digits) + "'");
  }
  return out;
}

}  // namespace

TokenStream::TokenStream(std::string_view text, std::size_t first_line) {
  std::size_t line = first_line;
  std::size_t col = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++col;
      ++i;
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = col;
    if (is_punct(c)) {
      tok.text = std::string(1, c);
      ++i;
      ++col;
    } else {
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && !is_punct(text[j])) {
        ++j;
      }
      tok.text = std::string(text.substr(i, j - i));
      col += j - i;
      i = j;
    }
    tokens_.push_back(std::move(tok));
  }
  end_line_ = line;
  end_column_ = col;
}

const TokenStream::Token& TokenStream::peek() const {
  if (at_end()) fail("unexpected end of input");
  return tokens_[pos_];
}

bool TokenStream::peek_is(std::string_view text) const {
  return !at_end() && tokens_[pos_].text == text;
}

TokenStream::Token TokenStream::next() {
  Token t = peek();
  ++pos_;
  return t;
}

void TokenStream::expect(std::string_view text) {
  if (at_end()) fail("expected '" + std::string(text) + "' but reached end of input");
  if (tokens_[pos_].text != text) {
    fail("expected '" + std::string(text) + "' but found '" + tokens_[pos_].text + "'");
  }
  ++pos_;
}

bool TokenStream::accept(std::string_view text) {
  if (peek_is(text)) {
    ++pos_;
    return true;
  }
  return false;
}

void TokenStream::fail(const std::string& message) const {
  if (at_end()) throw ParseError(end_line_, end_column_, message);
  throw ParseError(tokens_[pos_].line, tokens_[pos_].column, message);
}

Value TokenStream::read_value() {
  if (at_end()) fail("expected a value but reached end of input");
  const Token& tok = peek();
  if (tok.text == "inl") {
    next();
    return Value::inl(read_operand());
  }
  if (tok.text == "inr") {
    next();
    return Value::inr(read_operand());
  }
  if (tok.text == "sup") {
    next();
    Value shape = read_operand();
    expect("[");
    std::vector<Branch> children;
    if (!accept("]")) {
      do {
        Value q = read_value();
        expect("->");
        Value t = read_value();
        children.push_back(Branch{std::move(q), std::move(t)});
      } while (accept(","));
      expect("]");
    }
    return Value::sup(std::move(shape), std::move(children));
  }
  if (tok.text == "below" || tok.text == "here") {
    Token first = next();
    return read_path_from(first);
  }
  return read_operand();
}

Value TokenStream::read_operand() {
  if (at_end()) fail("expected a value but reached end of input");
  if (accept("(")) {
    Value a = read_value();
    if (accept(",")) {
      Value b = read_value();
      expect(")");
      return Value::pair(std::move(a), std::move(b));
    }
    expect(")");
    return a;
  }
  Token tok = next();
  return read_word_value(tok);
}

Value TokenStream::read_word_value(const Token& tok) {
  const std::string& w = tok.text;
  auto bad = [&](const std::string& why) -> Value {
    throw ParseError(tok.line, tok.column, why);
  };
  if (w == "unit") return Value::unit();
  if (w.rfind("nat:", 0) == 0) return Value::nat(to_number(std::string_view(w).substr(4), *this));
  if (w.rfind("fin:", 0) == 0) {
    auto body = std::string_view(w).substr(4);
    auto slash = body.find('/');
    if (slash == std::string_view::npos) return bad("malformed fin literal '" + w + "'");
    auto k = to_number(body.substr(0, slash), *this);
    auto n = to_number(body.substr(slash + 1), *this);
    if (k >= n) return bad("fin literal out of range '" + w + "'");
    return Value::fin(k, n);
  }
  if (w.rfind("atom:", 0) == 0) {
    if (w.size() == 5) return bad("empty atom literal");
    return Value::atom(w.substr(5));
  }
  if (w.rfind("seed:", 0) == 0) {
    auto body = w.substr(5);
    auto slash = body.rfind('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == body.size()) {
      return bad("malformed seed literal '" + w + "'");
    }
    return Value::seed(body.substr(0, slash), body.substr(slash + 1));
  }
  return bad("unexpected '" + w + "' where a value was expected");
}

Value TokenStream::read_path_from(const Token& first) {
  std::vector<Value> steps;
  Token tok = first;
  while (tok.text == "below") {
    steps.push_back(read_operand());
    expect(".");
    tok = next();
  }
  if (tok.text != "here") throw ParseError(tok.line, tok.column, "expected 'here' or 'below' in path");
  expect("(");
  Token index = next();
  if (is_punct(index.text[0])) throw ParseError(index.line, index.column, "expected an index name");
  expect(",");
  Value p = read_value();
  expect(")");
  return Value::path(std::move(steps), index.text, std::move(p));
}

}  // namespace contcalc

#include "contcalc/value.hpp"

#include <cctype>
#include <ostream>
#include <sstream>

#include "contcalc/text.hpp"

namespace contcalc {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

struct Value::Node {
  Kind kind = Kind::unit;
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  std::string s1;  // atom symbol, machine name, index name
  std::string s2;  // seed state
  std::vector<Value> items;  // inl/inr: [v]; pair: [a, b]; sup: [shape]; path: [final]
  std::vector<Value> steps;  // path only
  std::vector<Branch> branches;
};

Value::Value() : Value(Value::unit()) {}

Value::Value(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Value Value::unit() {
  static const auto node = std::make_shared<const Node>();
  return Value(node);
}

Value Value::inl(Value v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::inl;
  n->items.push_back(std::move(v));
  return Value(std::move(n));
}

Value Value::inr(Value v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::inr;
  n->items.push_back(std::move(v));
  return Value(std::move(n));
}

Value Value::pair(Value first, Value second) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::pair;
  n->items.push_back(std::move(first));
  n->items.push_back(std::move(second));
  return Value(std::move(n));
}

Value Value::nat(std::uint64_t k) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::nat;
  n->a = k;
  return Value(std::move(n));
}

Value Value::fin(std::uint64_t k, std::uint64_t bound) {
  if (k >= bound) {
    throw Error("fin:" + std::to_string(k) + "/" + std::to_string(bound) + " out of range");
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::fin;
  n->a = k;
  n->b = bound;
  return Value(std::move(n));
}

Value Value::atom(std::string symbol) {
  if (symbol.empty()) throw Error("empty atom symbol");
  auto n = std::make_shared<Node>();
  n->kind = Kind::atom;
  n->s1 = std::move(symbol);
  return Value(std::move(n));
}

Value Value::sup(Value shape, std::vector<Branch> children) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::sup;
  n->items.push_back(std::move(shape));
  n->branches = std::move(children);
  return Value(std::move(n));
}

Value Value::seed(std::string machine, std::string state) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::seed;
  n->s1 = std::move(machine);
  n->s2 = std::move(state);
  return Value(std::move(n));
}

Value Value::path(std::vector<Value> steps, std::string index, Value final_position) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::path;
  n->steps = std::move(steps);
  n->items.push_back(std::move(final_position));
  n->s1 = std::move(index);
  return Value(std::move(n));
}

Value here(std::string index, Value position) {
  return Value::path({}, std::move(index), std::move(position));
}

Value::Kind Value::kind() const { return node().kind; }

namespace {

[[noreturn]] void wrong_kind(const char* accessor) {
  throw Error(std::string("Value::") + accessor + " applied to the wrong kind of value");
}

}  // namespace

const Value& Value::inner() const {
  if (!is(Kind::inl) && !is(Kind::inr)) wrong_kind("inner");
  return node().items[0];
}

const Value& Value::first() const {
  if (!is(Kind::pair)) wrong_kind("first");
  return node().items[0];
}

const Value& Value::second() const {
  if (!is(Kind::pair)) wrong_kind("second");
  return node().items[1];
}

std::uint64_t Value::number() const {
  if (!is(Kind::nat) && !is(Kind::fin)) wrong_kind("number");
  return node().a;
}

std::uint64_t Value::bound() const {
  if (!is(Kind::fin)) wrong_kind("bound");
  return node().b;
}

const std::string& Value::symbol() const {
  if (!is(Kind::atom)) wrong_kind("symbol");
  return node().s1;
}

const Value& Value::shape() const {
  if (!is(Kind::sup)) wrong_kind("shape");
  return node().items[0];
}

const std::vector<Branch>& Value::children() const {
  if (!is(Kind::sup)) wrong_kind("children");
  return node().branches;
}

const Value* Value::child(const Value& position) const {
  for (const auto& b : children()) {
    if (b.position == position) return &b.subtree;
  }
  return nullptr;
}

const std::string& Value::machine() const {
  if (!is(Kind::seed)) wrong_kind("machine");
  return node().s1;
}

const std::string& Value::state() const {
  if (!is(Kind::seed)) wrong_kind("state");
  return node().s2;
}

const std::vector<Value>& Value::steps() const {
  if (!is(Kind::path)) wrong_kind("steps");
  return node().steps;
}

const std::string& Value::index_name() const {
  if (!is(Kind::path)) wrong_kind("index_name");
  return node().s1;
}

const Value& Value::final_position() const {
  if (!is(Kind::path)) wrong_kind("final_position");
  return node().items.back();
}

Value Value::path_tail() const {
  if (!is(Kind::path) || node().steps.empty()) wrong_kind("path_tail");
  const auto& all = node().steps;
  std::vector<Value> rest(all.begin() + 1, all.end());
  return Value::path(std::move(rest), index_name(), final_position());
}

Value Value::path_below(const Value& step) const {
  if (!is(Kind::path)) wrong_kind("path_below");
  const auto& all = node().steps;
  std::vector<Value> steps;
  steps.reserve(all.size() + 1);
  steps.push_back(step);
  steps.insert(steps.end(), all.begin(), all.end());
  return Value::path(std::move(steps), index_name(), final_position());
}

bool operator==(const Value& a, const Value& b) {
  return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Value& a, const Value& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  const auto& x = a.node();
  const auto& y = b.node();
  if (auto c = x.kind <=> y.kind; c != 0) return c;
  if (auto c = x.a <=> y.a; c != 0) return c;
  if (auto c = x.b <=> y.b; c != 0) return c;
  if (auto c = x.s1.compare(y.s1) <=> 0; c != 0) return c;
  if (auto c = x.s2.compare(y.s2) <=> 0; c != 0) return c;
  if (auto c = x.items.size() <=> y.items.size(); c != 0) return c;
  for (std::size_t i = 0; i < x.items.size(); ++i) {
    if (auto c = x.items[i] <=> y.items[i]; c != 0) return c;
  }
  if (auto c = x.steps.size() <=> y.steps.size(); c != 0) return c;
  for (std::size_t i = 0; i < x.steps.size(); ++i) {
    if (auto c = x.steps[i] <=> y.steps[i]; c != 0) return c;
  }
  if (auto c = x.branches.size() <=> y.branches.size(); c != 0) return c;
  for (std::size_t i = 0; i < x.branches.size(); ++i) {
    if (auto c = x.branches[i].position <=> y.branches[i].position; c != 0) return c;
    if (auto c = x.branches[i].subtree <=> y.branches[i].subtree; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

namespace {

bool needs_parens(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::inl:
    case Value::Kind::inr:
    case Value::Kind::sup:
    case Value::Kind::path:
      return true;
    default:
      return false;
  }
}

void render_to(std::ostringstream& out, const Value& v);

void render_operand(std::ostringstream& out, const Value& v) {
  if (needs_parens(v)) {
    out << '(';
    render_to(out, v);
    out << ')';
  } else {
    render_to(out, v);
  }
}

void render_to(std::ostringstream& out, const Value& v) {
  switch (v.kind()) {
    case Value::Kind::unit:
      out << "unit";
      return;
    case Value::Kind::inl:
      out << "inl ";
      render_operand(out, v.inner());
      return;
    case Value::Kind::inr:
      out << "inr ";
      render_operand(out, v.inner());
      return;
    case Value::Kind::pair:
      out << '(';
      render_to(out, v.first());
      out << " , ";
      render_to(out, v.second());
      out << ')';
      return;
    case Value::Kind::nat:
      out << "nat:" << v.number();
      return;
    case Value::Kind::fin:
      out << "fin:" << v.number() << '/' << v.bound();
      return;
    case Value::Kind::atom:
      out << "atom:" << v.symbol();
      return;
    case Value::Kind::sup: {
      out << "sup ";
      render_operand(out, v.shape());
      out << " [";
      bool first = true;
      for (const auto& b : v.children()) {
        if (!first) out << ", ";
        first = false;
        render_to(out, b.position);
        out << " -> ";
        render_to(out, b.subtree);
      }
      out << ']';
      return;
    }
    case Value::Kind::seed:
      out << "seed:" << v.machine() << '/' << v.state();
      return;
    case Value::Kind::path: {
      for (const auto& s : v.steps()) {
        out << "below ";
        render_operand(out, s);
        out << " . ";
      }
      out << "here(" << v.index_name() << ", ";
      render_to(out, v.final_position());
      out << ')';
      return;
    }
  }
}

}  // namespace

std::string Value::render() const {
  std::ostringstream out;
  render_to(out, *this);
  return out.str();
}

std::ostream& operator<<(std::ostream& os, const Value& v) { return os << v.render(); }

Value parse_value(std::string_view text) {
  TokenStream ts(text);
  Value v = ts.read_value();
  if (!ts.at_end()) ts.fail("unexpected '" + ts.peek().text + "' after value");
  return v;
}

}  // namespace contcalc

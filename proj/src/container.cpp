#include "contcalc/container.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "contcalc/text.hpp"

namespace contcalc {

IndexSet::IndexSet(std::vector<std::string> names) : names_(std::move(names)) {
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw Error("empty index name");
    if (!seen.insert(n).second) throw Error("duplicate index name '" + n + "'");
  }
}

std::optional<std::size_t> IndexSet::find(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::size_t IndexSet::at(const std::string& name) const {
  auto i = find(name);
  if (!i) throw Error("unknown index '" + name + "'");
  return *i;
}

IndexSet IndexSet::with(std::string extra) const {
  auto names = names_;
  names.push_back(std::move(extra));
  return IndexSet(std::move(names));
}

IndexSet IndexSet::without_last() const {
  if (names_.empty()) throw Error("index set is empty");
  return IndexSet(std::vector<std::string>(names_.begin(), names_.end() - 1));
}

PayloadError::PayloadError(std::size_t index, Value position, const std::string& what)
    : Error(what), index_(index), position_(std::move(position)) {}

Payload table_payload(PayloadTable table) {
  auto shared = std::make_shared<const PayloadTable>(std::move(table));
  return [shared](std::size_t index, const Value& position) -> Value {
    auto it = shared->find({index, position});
    if (it == shared->end()) {
      throw PayloadError(index, position, "no payload at position " + position.render());
    }
    return it->second;
  };
}

Payload empty_payload() {
  return [](std::size_t index, const Value& position) -> Value {
    throw PayloadError(index, position, "no payload at position " + position.render());
  };
}

FamilyMorphism FamilyMorphism::identity(std::size_t n) {
  FamilyMorphism f;
  f.maps.assign(n, [](const Value& v) { return v; });
  return f;
}

FamilyMorphism FamilyMorphism::after(const FamilyMorphism& inner) const {
  if (inner.maps.size() != maps.size()) throw Error("composing family morphisms of different arity");
  FamilyMorphism out;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    out.maps.push_back([outer = maps[i], in = inner.maps[i]](const Value& v) { return outer(in(v)); });
  }
  return out;
}

Membership ext_contains(const Container& c, const FamilyAssignment& x, const ExtElement& e,
                        const Budget& budget) {
  Membership m;
  if (x.size() != c.indices.size()) {
    m.reason = "family assignment has " + std::to_string(x.size()) + " domains for " +
               std::to_string(c.indices.size()) + " indices";
    return m;
  }
  if (!c.shapes.contains(e.shape)) {
    m.reason = "shape " + e.shape.render() + " is not in " + c.shapes.describe();
    return m;
  }
  for (std::size_t i = 0; i < c.indices.size(); ++i) {
    auto positions = c.positions(i, e.shape).enumerate(budget);
    for (const auto& p : positions.values) {
      Value v;
      try {
        v = e.payload(i, p);
      } catch (const PayloadError& err) {
        m.offence = Offence{i, p, err.what()};
        m.reason = "payload undefined at (" + c.indices.name(i) + ", " + p.render() + ")";
        return m;
      }
      if (!x[i].contains(v)) {
        m.offence = Offence{i, p, "value " + v.render() + " is not in " + x[i].describe()};
        m.reason = "payload at (" + c.indices.name(i) + ", " + p.render() + ") has wrong domain";
        return m;
      }
    }
  }
  m.ok = true;
  return m;
}

ExtEnumeration ext_enumerate(const Container& c, const FamilyAssignment& x, const Budget& budget) {
  ExtEnumeration out;
  if (x.size() != c.indices.size()) throw Error("family assignment does not match the index set");
  auto shapes = c.shapes.enumerate(budget);
  out.exhausted = shapes.exhausted;
  out.bounded = shapes.bounded;

  std::vector<Enumeration> values;
  for (std::size_t i = 0; i < x.size(); ++i) {
    values.push_back(x[i].enumerate(budget));
    if (values.back().bounded) out.bounded = true;
    if (values.back().exhausted) out.exhausted = true;
  }

  for (const auto& s : shapes.values) {
    // Slots are the (index, position) pairs of this shape in index order.
    std::vector<std::pair<std::size_t, Value>> slots;
    bool skip = false;
    for (std::size_t i = 0; i < c.indices.size(); ++i) {
      auto ps = c.positions(i, s).enumerate(budget);
      if (!ps.complete()) {
        // Payload functions over an unbounded position set cannot be listed.
        out.bounded = out.bounded || ps.bounded;
        out.exhausted = out.exhausted || ps.exhausted;
        skip = true;
        break;
      }
      for (auto& p : ps.values) slots.emplace_back(i, std::move(p));
    }
    if (skip) continue;
    bool any_empty = std::any_of(slots.begin(), slots.end(),
                                 [&](const auto& sl) { return values[sl.first].values.empty(); });
    if (any_empty) continue;

    std::vector<std::size_t> odometer(slots.size(), 0);
    while (true) {
      if (out.elements.size() == budget.count) {
        out.exhausted = true;
        return out;
      }
      PayloadTable table;
      for (std::size_t k = 0; k < slots.size(); ++k) {
        table.emplace(slots[k], values[slots[k].first].values[odometer[k]]);
      }
      out.elements.push_back(ExtElement{s, table_payload(std::move(table))});
      // Last slot varies fastest.
      bool done = true;
      for (std::size_t k = slots.size(); k-- > 0;) {
        if (++odometer[k] < values[slots[k].first].values.size()) {
          done = false;
          break;
        }
        odometer[k] = 0;
      }
      if (done) break;
    }
  }
  return out;
}

ExtElement extend_mor(const Container& c, const FamilyMorphism& f, const ExtElement& e) {
  if (f.maps.size() != c.indices.size()) throw Error("family morphism does not match the index set");
  auto maps = f.maps;
  auto g = e.payload;
  return ExtElement{e.shape, [maps, g](std::size_t i, const Value& p) { return maps.at(i)(g(i, p)); }};
}

ExtComparison ext_equal(const Container& c, const FamilyAssignment& x, const ExtElement& e1,
                        const ExtElement& e2, const Budget& budget) {
  ExtComparison out;
  auto shapes = c.shapes.equal(e1.shape, e2.shape, budget);
  if (shapes == Equality::distinct) {
    out.verdict = Equality::distinct;
    return out;
  }
  if (shapes == Equality::unknown) {
    out.verdict = Equality::unknown;
    return out;
  }
  bool complete = true;
  bool unsure = false;
  for (std::size_t i = 0; i < c.indices.size(); ++i) {
    // Positions of bisimilar shapes are the same path records, so e1's
    // positions index e2 directly.
    auto ps = c.positions(i, e1.shape).enumerate(budget);
    complete = complete && ps.complete();
    for (const auto& p : ps.values) {
      ++out.positions_checked;
      auto r = x[i].equal(e1.payload(i, p), e2.payload(i, p), budget);
      if (r == Equality::distinct) {
        out.verdict = Equality::distinct;
        out.witness = std::make_pair(i, p);
        return out;
      }
      if (r == Equality::unknown) unsure = true;
    }
  }
  out.verdict = (complete && !unsure) ? Equality::equal : Equality::unknown;
  return out;
}

SplitContainer split_last(const Container& c) {
  if (c.indices.size() == 0) throw Error("split_last: container has no indices");
  SplitContainer f;
  const std::size_t last = c.indices.size() - 1;
  f.rec_name = c.indices.name(last);
  f.base.indices = c.indices.without_last();
  f.base.shapes = c.shapes;
  f.base.pos = c.pos;
  f.q = [pos = c.pos, last](const Value& s) { return pos(last, s); };
  return f;
}

Container reassemble(const SplitContainer& f) {
  Container c;
  c.indices = f.base.indices.with(f.rec_name);
  c.shapes = f.base.shapes;
  const std::size_t last = f.base.indices.size();
  c.pos = [base = f.base.pos, q = f.q, last](std::size_t i, const Value& s) {
    return i == last ? q(s) : base(i, s);
  };
  return c;
}

SplitElement to_split(const SplitContainer& f, const ExtElement& e, const Budget& budget) {
  SplitElement out;
  out.shape = e.shape;
  out.params = e.payload;
  const std::size_t last = f.base.indices.size();
  auto qs = f.q(e.shape).enumerate(budget);
  if (!qs.complete()) throw Error("to_split: recursive positions of " + e.shape.render() + " are not finite");
  for (const auto& q : qs.values) out.children.emplace_back(q, e.payload(last, q));
  return out;
}

ExtElement from_split(const SplitContainer& f, const SplitElement& e) {
  const std::size_t last = f.base.indices.size();
  auto children = e.children;
  auto params = e.params;
  return ExtElement{e.shape, [children, params, last](std::size_t i, const Value& p) -> Value {
                      if (i != last) return params(i, p);
                      for (const auto& [q, y] : children) {
                        if (q == p) return y;
                      }
                      throw PayloadError(i, p, "no child at recursive position " + p.render());
                    }};
}

std::vector<SplitElement> split_enumerate(const SplitContainer& f, const FamilyAssignment& x,
                                          const Domain& y, const Budget& budget) {
  std::vector<SplitElement> out;
  auto ys = y.enumerate(budget).values;
  // Parameter payloads come from the unary-per-index extension of the base.
  auto base = ext_enumerate(f.base, x, budget);
  for (const auto& e : base.elements) {
    auto qs = f.q(e.shape).enumerate(budget);
    if (!qs.complete()) continue;
    if (!qs.values.empty() && ys.empty()) continue;
    std::vector<std::size_t> odometer(qs.values.size(), 0);
    while (true) {
      if (out.size() == budget.count) return out;
      SplitElement se;
      se.shape = e.shape;
      se.params = e.payload;
      for (std::size_t k = 0; k < qs.values.size(); ++k) se.children.emplace_back(qs.values[k], ys[odometer[k]]);
      out.push_back(std::move(se));
      bool done = true;
      for (std::size_t k = odometer.size(); k-- > 0;) {
        if (++odometer[k] < ys.size()) {
          done = false;
          break;
        }
        odometer[k] = 0;
      }
      if (done) break;
    }
  }
  return out;
}

std::string render_element(const Container& c, const ExtElement& e, const Budget& budget) {
  std::ostringstream out;
  out << e.shape.render() << " with {";
  bool first = true;
  bool partial = false;
  for (std::size_t i = 0; i < c.indices.size(); ++i) {
    auto ps = c.positions(i, e.shape).enumerate(budget);
    partial = partial || !ps.complete();
    for (const auto& p : ps.values) {
      if (!first) out << "; ";
      first = false;
      if (!p.is(Value::Kind::path)) out << c.indices.name(i) << " : ";
      out << p.render() << " => " << e.payload(i, p).render();
    }
  }
  if (partial) out << (first ? "..." : "; ...");
  out << '}';
  return out.str();
}

ExtElement parse_element(const IndexSet& indices, std::string_view text) {
  TokenStream ts(text);
  Value shape = ts.read_value();
  ts.expect("with");
  ts.expect("{");
  PayloadTable table;
  if (!ts.accept("}")) {
    do {
      if (ts.accept("...")) continue;
      std::size_t index = 0;
      Value pos;
      if (ts.peek_is("below") || ts.peek_is("here")) {
        pos = ts.read_value();
        auto i = indices.find(pos.index_name());
        if (!i) ts.fail("unknown index '" + pos.index_name() + "'");
        index = *i;
      } else {
        auto tok = ts.next();
        auto i = indices.find(tok.text);
        if (!i) throw ParseError(tok.line, tok.column, "unknown index '" + tok.text + "'");
        index = *i;
        ts.expect(":");
        pos = ts.read_value();
      }
      ts.expect("=>");
      Value v = ts.read_value();
      if (!table.emplace(std::make_pair(index, pos), v).second) {
        ts.fail("duplicate payload entry for " + pos.render());
      }
    } while (ts.accept(";"));
    ts.expect("}");
  }
  if (!ts.at_end()) ts.fail("unexpected '" + ts.peek().text + "' after element");
  return ExtElement{shape, table_payload(std::move(table))};
}

}  // namespace contcalc

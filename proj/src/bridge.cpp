#include "contcalc/bridge.hpp"

#include "contcalc/w_fixpoint.hpp"

namespace contcalc::bridge {

namespace {

using Wrap = std::function<Value(const Value&)>;

SemValue atom_of(const Value& v) {
  if (!v.is(Value::Kind::atom)) throw Error("bridge: payload " + v.render() + " is not an atom");
  return SemValue::atom(v.symbol());
}

SemValue walk(const FunctorExpr& e, const IndexSet& params, const Value& shape, const Payload& payload,
              const std::function<SemValue(const Value&)>& rec, const Wrap& wrap) {
  using K = FunctorExpr::Kind;
  switch (e.kind) {
    case K::zero:
      throw Error("bridge: the empty functor has no elements");
    case K::one:
      return SemValue::unit();
    case K::param:
      return atom_of(payload(params.at(e.name), wrap(Value::unit())));
    case K::rec:
      return rec(wrap(Value::unit()));
    case K::sum:
      if (shape.is(Value::Kind::inl)) return SemValue::inl(walk(*e.left, params, shape.inner(), payload, rec, wrap));
      return SemValue::inr(walk(*e.right, params, shape.inner(), payload, rec, wrap));
    case K::prod: {
      Wrap l = [wrap](const Value& p) { return wrap(Value::inl(p)); };
      Wrap r = [wrap](const Value& p) { return wrap(Value::inr(p)); };
      return SemValue::pair(walk(*e.left, params, shape.first(), payload, rec, l),
                            walk(*e.right, params, shape.second(), payload, rec, r));
    }
    case K::exp: {
      std::size_t n = e.exponent();
      std::vector<SemValue> items;
      Value s = shape;
      Wrap w = wrap;
      for (std::size_t k = 0; k < n; ++k) {
        if (k + 1 == n) {
          items.push_back(walk(*e.left, params, s, payload, rec, w));
          break;
        }
        Wrap l = [w](const Value& p) { return w(Value::inl(p)); };
        items.push_back(walk(*e.left, params, s.first(), payload, rec, l));
        s = s.second();
        w = [w](const Value& p) { return w(Value::inr(p)); };
      }
      return SemValue::tuple(std::move(items));
    }
    case K::constant:
      throw Error("bridge: constant domains have no oracle counterpart");
  }
  throw Error("bridge: unknown expression kind");
}

}  // namespace

SemValue layer(const FunctorExpr& body, const IndexSet& params, const Value& shape, const Payload& payload,
               const std::function<SemValue(const Value& q)>& rec) {
  return walk(body, params, shape, payload, rec, [](const Value& p) { return p; });
}

SemValue body_element(const FunctorExpr& body, const IndexSet& indices, const ExtElement& e) {
  std::size_t last = indices.size() - 1;
  return layer(body, indices, e.shape, e.payload,
               [&](const Value& q) { return SemValue::rec(atom_of(e.payload(last, q))); });
}

SemValue mu_element(const Elaborated& d, const ExtElement& e) {
  auto l = out_mu(d.body, e);
  return layer(*d.decl.body, d.body.base.indices, l.shape, l.params, [&](const Value& q) {
    const ExtElement* c = l.child(q);
    if (!c) throw Error("bridge: no child at " + q.render());
    return SemValue::rec(mu_element(d, *c));
  });
}

SemValue nu_element(const Elaborated& d, const ExtElement& e, std::size_t depth) {
  if (depth == 0) return SemValue::trunc();
  auto l = out(d.body, d.registry, e);
  return layer(*d.decl.body, d.body.base.indices, l.shape, l.params, [&](const Value& q) {
    const ExtElement* c = l.child(q);
    if (!c) throw Error("bridge: no child at " + q.render());
    return SemValue::rec(nu_element(d, *c, depth - 1));
  });
}

oracle::SemAssignment sem_assignment(const IndexSet& params, const FamilyAssignment& x) {
  oracle::SemAssignment out;
  for (std::size_t i = 0; i < params.size(); ++i) {
    std::vector<std::string> syms;
    for (const auto& v : x[i].elements()) syms.push_back(atom_of(v).symbol);
    out[params.name(i)] = std::move(syms);
  }
  return out;
}

}  // namespace contcalc::bridge

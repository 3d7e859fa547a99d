#include "contcalc/oracle.hpp"

namespace contcalc::oracle {

SemValue SemValue::unit() { return SemValue{}; }

SemValue SemValue::inl(SemValue v) { return SemValue{Kind::inl, {}, {std::move(v)}}; }

SemValue SemValue::inr(SemValue v) { return SemValue{Kind::inr, {}, {std::move(v)}}; }

SemValue SemValue::pair(SemValue a, SemValue b) { return SemValue{Kind::pair, {}, {std::move(a), std::move(b)}}; }

SemValue SemValue::atom(std::string s) { return SemValue{Kind::atom, std::move(s), {}}; }

SemValue SemValue::rec(SemValue v) { return SemValue{Kind::rec, {}, {std::move(v)}}; }

SemValue SemValue::tuple(std::vector<SemValue> vs) { return SemValue{Kind::tuple, {}, std::move(vs)}; }

SemValue SemValue::trunc() { return SemValue{Kind::trunc, {}, {}}; }

std::strong_ordering operator<=>(const SemValue& a, const SemValue& b) {
  if (auto c = a.kind <=> b.kind; c != 0) return c;
  if (auto c = a.symbol <=> b.symbol; c != 0) return c;
  if (auto c = a.items.size() <=> b.items.size(); c != 0) return c;
  for (std::size_t k = 0; k < a.items.size(); ++k) {
    if (auto c = a.items[k] <=> b.items[k]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::string SemValue::render() const {
  switch (kind) {
    case Kind::unit:
      return "tt";
    case Kind::inl:
      return "L(" + items[0].render() + ")";
    case Kind::inr:
      return "R(" + items[0].render() + ")";
    case Kind::pair:
      return "<" + items[0].render() + ", " + items[1].render() + ">";
    case Kind::atom:
      return "'" + symbol + "'";
    case Kind::rec:
      return "rec(" + items[0].render() + ")";
    case Kind::tuple: {
      std::string out = "{";
      for (std::size_t k = 0; k < items.size(); ++k) out += (k ? ", " : "") + items[k].render();
      return out + "}";
    }
    case Kind::trunc:
      return "...";
  }
  return "?";
}

std::vector<SemValue> semantic_enumerate(const FunctorExpr& e, const SemAssignment& x,
                                         const std::vector<SemValue>& rec_set) {
  using K = FunctorExpr::Kind;
  std::vector<SemValue> out;
  switch (e.kind) {
    case K::zero:
      return out;
    case K::one:
      out.push_back(SemValue::unit());
      return out;
    case K::param: {
      auto it = x.find(e.name);
      if (it == x.end()) throw Error("oracle: no atoms for parameter " + e.name);
      for (const auto& s : it->second) out.push_back(SemValue::atom(s));
      return out;
    }
    case K::rec:
      for (const auto& r : rec_set) out.push_back(SemValue::rec(r));
      return out;
    case K::sum:
      for (auto& v : semantic_enumerate(*e.left, x, rec_set)) out.push_back(SemValue::inl(std::move(v)));
      for (auto& v : semantic_enumerate(*e.right, x, rec_set)) out.push_back(SemValue::inr(std::move(v)));
      return out;
    case K::prod: {
      auto ls = semantic_enumerate(*e.left, x, rec_set);
      auto rs = semantic_enumerate(*e.right, x, rec_set);
      for (const auto& a : ls) {
        for (const auto& b : rs) out.push_back(SemValue::pair(a, b));
      }
      return out;
    }
    case K::exp: {
      auto base = semantic_enumerate(*e.left, x, rec_set);
      std::vector<std::vector<SemValue>> acc{{}};
      for (std::size_t k = 0; k < e.exponent(); ++k) {
        std::vector<std::vector<SemValue>> next;
        for (const auto& prefix : acc) {
          for (const auto& b : base) {
            auto t = prefix;
            t.push_back(b);
            next.push_back(std::move(t));
          }
        }
        acc = std::move(next);
      }
      for (auto& t : acc) out.push_back(SemValue::tuple(std::move(t)));
      return out;
    }
    case K::constant:
      throw Error("oracle: constant domains are not supported");
  }
  return out;
}

std::vector<SemValue> mu_iterate(const FunctorExpr& e, const SemAssignment& x, std::size_t height) {
  std::vector<SemValue> cur;
  for (std::size_t h = 0; h < height; ++h) cur = semantic_enumerate(e, x, cur);
  return cur;
}

std::vector<SemValue> nu_truncate(const FunctorExpr& e, const SemAssignment& x, std::size_t depth) {
  std::vector<SemValue> cur{SemValue::trunc()};
  for (std::size_t h = 0; h < depth; ++h) cur = semantic_enumerate(e, x, cur);
  return cur;
}

}  // namespace contcalc::oracle

#include "contcalc/w_fixpoint.hpp"

#include <algorithm>
#include <limits>

namespace contcalc {

namespace {

struct Graded {
  Value tree;
  std::size_t rank;
};

class WDomain final : public DomainImpl {
 public:
  WDomain(Domain shapes, std::function<Domain(const Value&)> q) : shapes_(std::move(shapes)), q_(std::move(q)) {}

  DomainKind kind() const override { return DomainKind::w; }

  bool contains(const Value& v) const override {
    if (!v.is(Value::Kind::sup) || !shapes_.contains(v.shape())) return false;
    auto qd = q_(v.shape());
    if (!qd.finite()) return false;
    auto qs = qd.elements();
    const auto& kids = v.children();
    if (kids.size() != qs.size()) return false;
    for (std::size_t k = 0; k < qs.size(); ++k) {
      if (!(kids[k].position == qs[k]) || !contains(kids[k].subtree)) return false;
    }
    return true;
  }

  std::vector<Value> level(std::size_t rank, std::size_t cap, bool& truncated) const override {
    std::vector<Value> out;
    for (auto& g : upto(rank, std::numeric_limits<std::size_t>::max(), truncated)) {
      if (g.rank != rank) continue;
      if (out.size() == cap) {
        truncated = true;
        break;
      }
      out.push_back(std::move(g.tree));
    }
    return out;
  }

  bool has_beyond(std::size_t rank) const override {
    if (shapes_.impl().has_beyond(rank)) return true;
    bool t = false;
    return !level(rank + 1, 1, t).empty();
  }

  Enumeration enumerate(const Budget& budget) const override {
    Enumeration out;
    bool truncated = false;
    auto all = upto(budget.size, plus_one(budget.count), truncated);
    std::stable_sort(all.begin(), all.end(), [](const Graded& a, const Graded& b) { return a.rank < b.rank; });
    for (auto& g : all) {
      if (out.values.size() == budget.count) {
        truncated = true;
        break;
      }
      out.values.push_back(std::move(g.tree));
    }
    out.exhausted = truncated;
    out.bounded = has_beyond(budget.size);
    return out;
  }

  Equality equal(const Value& a, const Value& b, const Budget& budget) const override {
    auto s = shapes_.equal(a.shape(), b.shape(), budget);
    if (s != Equality::equal) return s;
    const auto& ka = a.children();
    const auto& kb = b.children();
    if (ka.size() != kb.size()) return Equality::distinct;
    bool unsure = false;
    for (std::size_t k = 0; k < ka.size(); ++k) {
      if (!(ka[k].position == kb[k].position)) return Equality::distinct;
      auto c = equal(ka[k].subtree, kb[k].subtree, budget);
      if (c == Equality::distinct) return c;
      if (c == Equality::unknown) unsure = true;
    }
    return unsure ? Equality::unknown : Equality::equal;
  }

  bool finite() const override {
    if (!shapes_.finite()) return false;
    for (const auto& s : shapes_.elements()) {
      bool t = false;
      if (!q_(s).impl().level(0, 1, t).empty() || q_(s).impl().has_beyond(0)) return false;
    }
    return true;
  }

  std::string describe() const override { return "W(" + shapes_.describe() + ")"; }

 private:
  /// Trees of rank ≤ `rank` with their ranks, built by iterating
  /// Le(h) = { sup s t | rank s ≤ h, t : Q s → Le(h-1) }.
  std::vector<Graded> upto(std::size_t rank, std::size_t cap, bool& truncated) const {
    std::vector<Graded> prev;
    std::vector<std::pair<Value, std::size_t>> shapes;
    for (std::size_t h = 0; h <= rank; ++h) {
      bool st = false;
      for (auto& s : shapes_.impl().level(h, cap, st)) shapes.emplace_back(std::move(s), h);
      if (st) truncated = true;
      std::vector<Graded> cur;
      for (const auto& [s, rs] : shapes) {
        auto qd = q_(s);
        if (!qd.finite()) throw Error("W-domain: shape " + s.render() + " has infinitely many recursive positions");
        auto qs = qd.elements();
        if (qs.empty()) {
          cur.push_back(Graded{Value::sup(s, {}), rs});
        } else if (!prev.empty()) {
          std::vector<std::size_t> odo(qs.size(), 0);
          while (true) {
            std::vector<Branch> kids;
            std::size_t r = rs;
            for (std::size_t k = 0; k < qs.size(); ++k) {
              kids.push_back(Branch{qs[k], prev[odo[k]].tree});
              r = std::max(r, prev[odo[k]].rank + 1);
            }
            cur.push_back(Graded{Value::sup(s, std::move(kids)), r});
            if (cur.size() > cap) {
              truncated = true;
              break;
            }
            bool done = true;
            for (std::size_t k = odo.size(); k-- > 0;) {
              if (++odo[k] < prev.size()) {
                done = false;
                break;
              }
              odo[k] = 0;
            }
            if (done) break;
          }
        }
        if (cur.size() > cap) {
          truncated = true;
          break;
        }
      }
      prev = std::move(cur);
      if (truncated) break;
    }
    return prev;
  }

  Domain shapes_;
  std::function<Domain(const Value&)> q_;
};

}  // namespace

Domain w_domain(Domain shapes, std::function<Domain(const Value&)> q) {
  return Domain(std::make_shared<const WDomain>(std::move(shapes), std::move(q)));
}

Unfolding unsup_w(const Value& tree) {
  if (!tree.is(Value::Kind::sup)) throw Error("not a W-tree: " + tree.render());
  Unfolding u;
  u.shape = tree.shape();
  for (const auto& b : tree.children()) u.children.emplace_back(b.position, b.subtree);
  return u;
}

Navigator w_navigator() { return [](const Value& node) { return unsup_w(node); }; }

Container mu_container(const SplitContainer& f) {
  Budget probe{5, 10000};
  for (const auto& s : f.base.shapes.enumerate(probe).values) {
    if (!f.q(s).finite()) {
      throw Error("mu: shape " + s.render() + " has infinitely many recursive positions (" + f.q(s).describe() +
                  "); W-trees need finite branching");
    }
  }
  Container c;
  c.indices = f.base.indices;
  c.shapes = w_domain(f.base.shapes, f.q);
  c.pos = [f](std::size_t i, const Value& w) { return pos_domain(Fixity::mu, f, i, w, w_navigator()); };
  return c;
}

ExtElement into(const SplitContainer& f, const MuLayer& layer) {
  auto qs = f.q(layer.shape).elements();
  if (qs.size() != layer.children.size()) {
    throw Error("into: shape " + layer.shape.render() + " needs " + std::to_string(qs.size()) + " children, got " +
                std::to_string(layer.children.size()));
  }
  std::vector<Branch> kids;
  for (std::size_t k = 0; k < qs.size(); ++k) {
    if (!(layer.children[k].first == qs[k])) {
      throw Error("into: child " + std::to_string(k) + " is at " + layer.children[k].first.render() + ", expected " +
                  qs[k].render());
    }
    kids.push_back(Branch{qs[k], layer.children[k].second.shape});
  }
  auto params = layer.params;
  auto children = layer.children;
  auto names = f.base.indices;
  return ExtElement{Value::sup(layer.shape, std::move(kids)),
                    [params, children, names](std::size_t i, const Value& path) -> Value {
                      if (!path.is(Value::Kind::path) || i >= names.size() || path.index_name() != names.name(i)) {
                        throw PayloadError(i, path, "into: invalid position " + path.render());
                      }
                      if (path.steps().empty()) return params(i, path.final_position());
                      for (const auto& [q, child] : children) {
                        if (q == path.steps().front()) return child.payload(i, path.path_tail());
                      }
                      throw PayloadError(i, path, "into: invalid position " + path.render());
                    }};
}

MuLayer out_mu(const SplitContainer& f, const ExtElement& e) {
  auto u = unsup_w(e.shape);
  MuLayer layer;
  layer.shape = u.shape;
  auto names = f.base.indices;
  auto g = e.payload;
  layer.params = [g, names](std::size_t i, const Value& p) { return g(i, here(names.name(i), p)); };
  for (const auto& [q, t] : u.children) {
    layer.children.emplace_back(q, ExtElement{t, [g, q = q](std::size_t i, const Value& b) {
                                                 return g(i, b.path_below(q));
                                               }});
  }
  return layer;
}

Value fold(const SplitContainer& f, const Algebra& alg, const ExtElement& e) {
  struct Frame {
    Value tree;
    std::vector<Value> prefix;
    std::size_t next = 0;
    std::vector<std::pair<Value, Value>> results;
  };
  auto names = f.base.indices;
  std::vector<Frame> stack;
  stack.push_back(Frame{e.shape, {}, 0, {}});
  while (true) {
    Frame& top = stack.back();
    const auto& kids = top.tree.children();
    if (top.next < kids.size()) {
      const Branch& b = kids[top.next++];
      auto prefix = top.prefix;
      prefix.push_back(b.position);
      Value sub = b.subtree;
      stack.push_back(Frame{std::move(sub), std::move(prefix), 0, {}});
      continue;
    }
    auto prefix = top.prefix;
    auto g = e.payload;
    Payload params = [g, prefix, names](std::size_t i, const Value& p) {
      return g(i, Value::path(prefix, names.name(i), p));
    };
    auto results = std::move(top.results);
    std::function<Value(const Value&)> rec = [&results](const Value& q) -> Value {
      for (const auto& [k, v] : results) {
        if (k == q) return v;
      }
      throw Error("fold: no recursive result at " + q.render());
    };
    Value out = alg.act(top.tree.shape(), params, rec);
    stack.pop_back();
    if (stack.empty()) return out;
    Frame& parent = stack.back();
    parent.results.emplace_back(parent.tree.children()[parent.next - 1].position, std::move(out));
  }
}

ExtElement mu_subelement(const ExtElement& e, const std::vector<Value>& steps) {
  Value t = e.shape;
  for (const auto& q : steps) {
    const Value* c = t.child(q);
    if (!c) throw Error("mu_subelement: no child at " + q.render() + " in " + t.render());
    t = *c;
  }
  auto g = e.payload;
  return ExtElement{t, [g, steps](std::size_t i, const Value& b) {
                      auto all = steps;
                      all.insert(all.end(), b.steps().begin(), b.steps().end());
                      return g(i, Value::path(std::move(all), b.index_name(), b.final_position()));
                    }};
}

namespace {

void postorder(const Value& tree, std::vector<Value>& prefix, std::vector<std::vector<Value>>& out) {
  for (const auto& b : tree.children()) {
    prefix.push_back(b.position);
    postorder(b.subtree, prefix, out);
    prefix.pop_back();
  }
  out.push_back(prefix);
}

}  // namespace

ProbeVerdict uniqueness_probe(const SplitContainer& f, const Algebra& alg, const Candidate& candidate,
                              const std::vector<ExtElement>& samples, const Budget& budget) {
  ProbeVerdict v;
  for (const auto& e : samples) {
    std::vector<std::vector<Value>> subs;
    std::vector<Value> prefix;
    postorder(e.shape, prefix, subs);
    for (const auto& steps : subs) {
      auto u = mu_subelement(e, steps);
      auto layer = out_mu(f, u);
      Value lhs = candidate(u);
      Value rhs = alg.act(layer.shape, layer.params, [&](const Value& q) -> Value {
        const ExtElement* c = layer.child(q);
        if (!c) throw Error("uniqueness_probe: no child at " + q.render());
        return candidate(*c);
      });
      if (alg.carrier.equal(lhs, rhs, budget) != Equality::equal) {
        v.consistent = false;
        v.witness = u;
        v.detail = "square fails at " + u.shape.render() + ": candidate gives " + lhs.render() +
                   ", algebra gives " + rhs.render();
        return v;
      }
    }
  }
  for (const auto& e : samples) {
    Value lhs = candidate(e);
    Value rhs = fold(f, alg, e);
    if (alg.carrier.equal(lhs, rhs, budget) != Equality::equal) {
      v.consistent = false;
      v.witness = e;
      v.detail = "candidate differs from fold at " + e.shape.render();
      return v;
    }
  }
  return v;
}

std::vector<Value> pos_enumerate_w(const Value& w, std::size_t index, const SplitContainer& f) {
  Budget all{w_height(w), std::numeric_limits<std::size_t>::max()};
  return enumerate_paths(f, index, w, w_navigator(), all).values;
}

std::size_t w_size(const Value& tree) {
  std::size_t n = 1;
  for (const auto& b : tree.children()) n += w_size(b.subtree);
  return n;
}

std::size_t w_height(const Value& tree) {
  std::size_t h = 0;
  for (const auto& b : tree.children()) h = std::max(h, w_height(b.subtree));
  return h + 1;
}

}  // namespace contcalc

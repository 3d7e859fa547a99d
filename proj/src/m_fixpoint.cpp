#include "contcalc/m_fixpoint.hpp"

#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

namespace contcalc {

namespace {

/// Serialises machine construction in unfold_seed and into_nu so that the
/// memo and the registered machines stay in step.
std::mutex build_mutex;

class MDomain final : public DomainImpl {
 public:
  MDomain(SplitContainer f, Registry reg) : f_(std::move(f)), reg_(std::move(reg)) {}

  DomainKind kind() const override { return DomainKind::m; }

  bool contains(const Value& v) const override {
    return reg_->valid_seed(v) && !conformance_error(f_, *reg_, v.machine());
  }

  std::vector<Value> level(std::size_t rank, std::size_t cap, bool& truncated) const override {
    std::vector<Value> reps;
    if (rank != 0) return reps;
    for (const auto& name : reg_->names()) {
      if (conformance_error(f_, *reg_, name)) continue;
      auto m = reg_->get(name);
      for (const auto& s : m->states) {
        auto seed = m->seed(s.name);
        bool fresh = true;
        for (const auto& r : reps) {
          if (bisim_exact(*reg_, r, seed).verdict == BisimVerdict::bisimilar) {
            fresh = false;
            break;
          }
        }
        if (!fresh) continue;
        if (reps.size() == cap) {
          truncated = true;
          return reps;
        }
        reps.push_back(seed);
      }
    }
    return reps;
  }

  bool has_beyond(std::size_t) const override { return false; }

  Equality equal(const Value& a, const Value& b, const Budget&) const override {
    return bisim_exact(*reg_, a, b).verdict == BisimVerdict::bisimilar ? Equality::equal : Equality::distinct;
  }

  bool finite() const override { return false; }

  std::string describe() const override { return "M(" + f_.base.shapes.describe() + ")"; }

 private:
  SplitContainer f_;
  Registry reg_;
};

Payload route_payload(const IndexSet& names, Payload params, std::vector<std::pair<Value, ExtElement>> children,
                      const char* who) {
  return [names, params, children, who](std::size_t i, const Value& path) -> Value {
    if (!path.is(Value::Kind::path) || i >= names.size() || path.index_name() != names.name(i)) {
      throw PayloadError(i, path, std::string(who) + ": invalid position " + path.render());
    }
    if (path.steps().empty()) return params(i, path.final_position());
    for (const auto& [q, child] : children) {
      if (q == path.steps().front()) return child.payload(i, path.path_tail());
    }
    throw PayloadError(i, path, std::string(who) + ": invalid position " + path.render());
  };
}

std::string unfold_key(const Coalgebra& co, const Value& y) { return "unfold " + co.name + " " + y.render(); }

}  // namespace

Navigator m_navigator(Registry reg) {
  return [reg](const Value& seed) { return reg->step(seed); };
}

Domain m_domain(const SplitContainer& f, Registry reg) {
  return Domain(std::make_shared<const MDomain>(f, std::move(reg)));
}

Container nu_container(const SplitContainer& f, Registry reg) {
  Container c;
  c.indices = f.base.indices;
  c.shapes = m_domain(f, reg);
  c.pos = [f, reg](std::size_t i, const Value& m) { return pos_domain(Fixity::nu, f, i, m, m_navigator(reg)); };
  return c;
}

NuLayer out(const SplitContainer& f, Registry reg, const ExtElement& e) {
  auto u = reg->step(e.shape);
  NuLayer layer;
  layer.shape = u.shape;
  auto names = f.base.indices;
  auto g = e.payload;
  layer.params = [g, names](std::size_t i, const Value& p) { return g(i, here(names.name(i), p)); };
  for (const auto& [q, c] : u.children) {
    layer.children.emplace_back(q, ExtElement{c, [g, q = q](std::size_t i, const Value& b) {
                                                 return g(i, b.path_below(q));
                                               }});
  }
  return layer;
}

ExtElement into_nu(const SplitContainer& f, Registry reg, const NuLayer& layer) {
  auto qs = f.q(layer.shape).elements();
  if (qs.size() != layer.children.size()) {
    throw Error("into: shape " + layer.shape.render() + " needs " + std::to_string(qs.size()) + " children, got " +
                std::to_string(layer.children.size()));
  }
  std::string key = "sup " + layer.shape.render();
  MachineState root;
  root.name = "root";
  root.shape = layer.shape;
  for (std::size_t k = 0; k < qs.size(); ++k) {
    const auto& [q, child] = layer.children[k];
    if (!(q == qs[k])) {
      throw Error("into: child " + std::to_string(k) + " is at " + q.render() + ", expected " + qs[k].render());
    }
    if (!reg->valid_seed(child.shape)) throw Error("into: child " + child.shape.render() + " is not a seed");
    root.children.emplace_back(q, child.shape);
    key += " " + q.render() + " " + child.shape.render();
  }
  Value seed;
  {
    std::lock_guard lock(build_mutex);
    if (auto hit = reg->memo(key)) {
      seed = *hit;
    } else {
      CoalgebraMachine m;
      m.name = reg->fresh_name("sup");
      m.states.push_back(std::move(root));
      seed = m.seed("root");
      reg->add(std::move(m));
      reg->remember(key, seed);
    }
  }
  return ExtElement{seed, route_payload(f.base.indices, layer.params, layer.children, "into")};
}

std::vector<Value> coalgebra_reachable(const SplitContainer& f, const Coalgebra& co, const Value& y,
                                       std::size_t state_cap) {
  std::vector<Value> out;
  std::set<Value> seen{y};
  std::deque<Value> queue{y};
  while (!queue.empty()) {
    Value cur = queue.front();
    queue.pop_front();
    out.push_back(cur);
    for (const auto& q : f.q(co.bs(cur)).elements()) {
      Value next = co.bh(cur, q);
      if (seen.insert(next).second) {
        if (seen.size() > state_cap) {
          throw NonRegular("coalgebra " + co.name + ": more than " + std::to_string(state_cap) +
                           " states reachable from " + y.render());
        }
        queue.push_back(next);
      }
    }
  }
  return out;
}

Value unfold_seed(const SplitContainer& f, Registry reg, const Coalgebra& co, const Value& y, std::size_t state_cap) {
  std::lock_guard lock(build_mutex);
  if (auto hit = reg->memo(unfold_key(co, y))) return *hit;

  CoalgebraMachine m;
  m.name = reg->fresh_name("unfold-" + co.name);
  std::map<Value, Value> local;
  std::deque<Value> queue;
  auto assign = [&](const Value& v) -> Value {
    if (auto hit = reg->memo(unfold_key(co, v))) return *hit;
    auto it = local.find(v);
    if (it != local.end()) return it->second;
    if (local.size() == state_cap) {
      throw NonRegular("coalgebra " + co.name + ": more than " + std::to_string(state_cap) +
                       " states reachable from " + y.render());
    }
    Value seed = m.seed("s" + std::to_string(local.size()));
    local.emplace(v, seed);
    queue.push_back(v);
    return seed;
  };
  Value root = assign(y);
  std::vector<Value> order;
  while (!queue.empty()) {
    Value cur = queue.front();
    queue.pop_front();
    order.push_back(cur);
    MachineState st;
    st.name = local.at(cur).state();
    st.shape = co.bs(cur);
    if (!f.base.shapes.contains(st.shape)) {
      throw Error("coalgebra " + co.name + ": shape " + st.shape.render() + " at " + cur.render() + " is not in " +
                  f.base.shapes.describe());
    }
    for (const auto& q : f.q(st.shape).elements()) st.children.emplace_back(q, assign(co.bh(cur, q)));
    m.states.push_back(std::move(st));
  }
  reg->add(std::move(m));
  for (const auto& v : order) reg->remember(unfold_key(co, v), local.at(v));
  return root;
}

ExtElement unfold(const SplitContainer& f, Registry reg, const Coalgebra& co, const Value& y, std::size_t state_cap) {
  Value seed = unfold_seed(f, reg, co, y, state_cap);
  Retraction r{[f, reg, co, state_cap](const Value& d) { return unfold_seed(f, reg, co, d, state_cap); },
               [co](const Value& d, const Value& q) { return co.bh(d, q); }};
  PosHandlers h{[co](const Value& d, std::size_t i, const Value& p) { return co.bg(d, i, p); },
                [](const Value&, const Value&, const Value&, const Value& rec) { return rec; }};
  return ExtElement{seed, [f, reg, r, h, y](std::size_t i, const Value& path) {
                      if (!path.is(Value::Kind::path) || i >= f.base.indices.size() ||
                          path.index_name() != f.base.indices.name(i)) {
                        throw PayloadError(i, path, "unfold: invalid position " + path.render());
                      }
                      return pos_induct(f, reg, r, h, y, path);
                    }};
}

std::string BisimWitness::render() const {
  if (steps.empty()) return "root";
  std::string out;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    if (k) out += " . ";
    auto q = steps[k].render();
    bool wrap = steps[k].is(Value::Kind::inl) || steps[k].is(Value::Kind::inr) || steps[k].is(Value::Kind::sup) ||
                steps[k].is(Value::Kind::path);
    out += "below " + (wrap ? "(" + q + ")" : q);
  }
  return out;
}

const char* to_string(BisimVerdict v) {
  switch (v) {
    case BisimVerdict::bisimilar:
      return "bisimilar";
    case BisimVerdict::distinct:
      return "distinct";
    case BisimVerdict::exhausted:
      return "exhausted";
  }
  return "?";
}

namespace {

bool same_positions(const Unfolding& a, const Unfolding& b) {
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t k = 0; k < a.children.size(); ++k) {
    if (!(a.children[k].first == b.children[k].first)) return false;
  }
  return true;
}

}  // namespace

BisimResult bisim_bounded(const MachineRegistry& reg, const Value& m0, const Value& m1, std::size_t depth,
                          std::size_t pair_cap) {
  struct Item {
    Value a, b;
    std::vector<Value> steps;
  };
  BisimResult res;
  std::set<std::pair<Value, Value>> seen{{m0, m1}};
  std::vector<Item> level{Item{m0, m1, {}}};
  for (std::size_t d = 0; d < depth && !level.empty(); ++d) {
    std::vector<Item> next;
    for (const auto& it : level) {
      ++res.pairs_visited;
      if (it.a == it.b) continue;
      auto ua = reg.step(it.a);
      auto ub = reg.step(it.b);
      if (!(ua.shape == ub.shape) || !same_positions(ua, ub)) {
        res.verdict = BisimVerdict::distinct;
        res.witness = BisimWitness{it.steps};
        return res;
      }
      for (std::size_t k = 0; k < ua.children.size(); ++k) {
        std::pair<Value, Value> p{ua.children[k].second, ub.children[k].second};
        if (!seen.insert(p).second) continue;
        if (seen.size() > pair_cap) {
          res.verdict = BisimVerdict::exhausted;
          return res;
        }
        auto steps = it.steps;
        steps.push_back(ua.children[k].first);
        next.push_back(Item{p.first, p.second, std::move(steps)});
      }
    }
    level = std::move(next);
  }
  return res;
}

BisimResult bisim_exact(const MachineRegistry& reg, const Value& m0, const Value& m1) {
  BisimResult res;
  if (m0 == m1) return res;
  auto states = reg.reachable({m0, m1});
  std::map<Value, std::size_t> id;
  for (std::size_t k = 0; k < states.size(); ++k) id.emplace(states[k], k);
  std::vector<Unfolding> steps;
  steps.reserve(states.size());
  for (const auto& s : states) steps.push_back(reg.step(s));

  // Initial blocks by shape and position list, then refine by child blocks
  // until the number of blocks is stable.
  std::vector<std::size_t> block(states.size());
  {
    std::map<std::pair<Value, std::vector<Value>>, std::size_t> sig;
    for (std::size_t k = 0; k < states.size(); ++k) {
      std::vector<Value> qs;
      for (const auto& [q, c] : steps[k].children) qs.push_back(q);
      block[k] = sig.emplace(std::make_pair(steps[k].shape, std::move(qs)), sig.size()).first->second;
    }
  }
  std::size_t blocks = 0;
  for (auto b : block) blocks = std::max(blocks, b + 1);
  while (true) {
    std::map<std::vector<std::size_t>, std::size_t> sig;
    std::vector<std::size_t> next(states.size());
    for (std::size_t k = 0; k < states.size(); ++k) {
      std::vector<std::size_t> key{block[k]};
      for (const auto& [q, c] : steps[k].children) key.push_back(block[id.at(c)]);
      next[k] = sig.emplace(std::move(key), sig.size()).first->second;
    }
    block = std::move(next);
    if (sig.size() == blocks) break;
    blocks = sig.size();
  }
  res.pairs_visited = states.size();
  if (block[id.at(m0)] == block[id.at(m1)]) return res;
  auto w = bisim_bounded(reg, m0, m1, states.size() + 1, static_cast<std::size_t>(-1));
  res.verdict = BisimVerdict::distinct;
  res.witness = w.witness;
  return res;
}

PathWalk pos_eval(const SplitContainer& f, Registry reg, const Value& seed, const Value& path) {
  return walk_path(f, seed, m_navigator(std::move(reg)), path);
}

RetractionError::RetractionError(Value d, Value q, const std::string& what)
    : Error(what), d_(std::move(d)), q_(std::move(q)) {}

Value pos_induct(const SplitContainer& f, Registry reg, const Retraction& r, const PosHandlers& h, const Value& d,
                 const Value& path) {
  if (!path.is(Value::Kind::path)) throw Error("pos_induct: not a path: " + path.render());
  auto index = f.base.indices.find(path.index_name());
  if (!index) throw Error("pos_induct: unknown index '" + path.index_name() + "'");
  const auto& steps = path.steps();
  std::vector<Value> ds{d};
  Value seed = r.map(d);
  for (std::size_t k = 0; k < steps.size(); ++k) {
    auto u = reg->step(seed);
    const Value* child = u.child(steps[k]);
    if (!child) {
      throw PayloadError(*index, path,
                         "invalid position " + path.render() + ": step " + std::to_string(k) + " (" +
                             steps[k].render() + ") is not a recursive position of " + u.shape.render());
    }
    Value next = r.lift(ds.back(), steps[k]);
    Value next_seed = r.map(next);
    if (bisim_exact(*reg, *child, next_seed).verdict != BisimVerdict::bisimilar) {
      throw RetractionError(ds.back(), steps[k],
                            "retraction evidence fails at " + ds.back().render() + ", " + steps[k].render() +
                                ": lift maps to " + next_seed.render() + ", child is " + child->render());
    }
    ds.push_back(next);
    seed = next_seed;
  }
  auto shape = reg->step(seed).shape;
  if (!f.base.positions(*index, shape).contains(path.final_position())) {
    throw PayloadError(*index, path,
                       "invalid position " + path.render() + ": " + path.final_position().render() +
                           " is not a position of " + shape.render());
  }
  Value result = h.here(ds.back(), *index, path.final_position());
  Value rest = Value::path({}, path.index_name(), path.final_position());
  for (std::size_t k = steps.size(); k-- > 0;) {
    result = h.below(ds[k], steps[k], rest, result);
    rest = rest.path_below(steps[k]);
  }
  return result;
}

MorphismVerdict coalg_morphism_check(const SplitContainer& f, Registry reg, const FamilyAssignment& x,
                                     const Coalgebra& co, const CoalgebraCandidate& candidate, const Value& y0,
                                     const Budget& budget, std::size_t state_cap) {
  MorphismVerdict v;
  auto fail = [&](const char* component, const Value& y, std::optional<Value> witness, std::string detail) {
    v.consistent = false;
    v.component = component;
    v.y = y;
    v.witness = std::move(witness);
    v.detail = std::move(detail);
    return v;
  };
  auto nav = m_navigator(reg);
  for (const auto& y : coalgebra_reachable(f, co, y0, state_cap)) {
    ExtElement c = candidate(y);
    Value s = co.bs(y);
    if (!reg->valid_seed(c.shape)) return fail("comm1", y, std::nullopt, c.shape.render() + " is not a seed");
    auto u = reg->step(c.shape);
    if (f.base.shapes.equal(u.shape, s, budget) != Equality::equal) {
      return fail("comm1", y, std::nullopt,
                  "candidate shape " + u.shape.render() + " differs from " + s.render());
    }
    auto qs = f.q(s).elements();
    for (const auto& q : qs) {
      const Value* child = u.child(q);
      ExtElement cy = candidate(co.bh(y, q));
      if (!child) return fail("comm2", y, std::nullopt, "candidate seed has no child at " + q.render());
      auto b = bisim_exact(*reg, *child, cy.shape);
      if (b.verdict != BisimVerdict::bisimilar) {
        BisimWitness w{{q}};
        if (b.witness) w.steps.insert(w.steps.end(), b.witness->steps.begin(), b.witness->steps.end());
        return fail("comm2", y, std::nullopt,
                    "child at " + q.render() + " is not bisimilar to the candidate at bh; shapes differ at " +
                        w.render());
      }
    }
    for (std::size_t i = 0; i < f.base.indices.size(); ++i) {
      const auto& name = f.base.indices.name(i);
      for (const auto& p : f.base.positions(i, s).enumerate(budget).values) {
        Value path = here(name, p);
        try {
          Value lhs = c.payload(i, path);
          Value rhs = co.bg(y, i, p);
          if (x[i].equal(lhs, rhs, budget) != Equality::equal) {
            return fail("comm3", y, path, "candidate gives " + lhs.render() + ", coalgebra gives " + rhs.render());
          }
        } catch (const Error& e) {
          return fail("comm3", y, path, e.what());
        }
      }
      if (budget.size == 0) continue;
      Budget inner{budget.size - 1, budget.count};
      for (const auto& q : qs) {
        ExtElement cy = candidate(co.bh(y, q));
        for (const auto& b : pos_domain(Fixity::nu, f, i, cy.shape, nav).enumerate(inner).values) {
          Value path = b.path_below(q);
          try {
            Value lhs = c.payload(i, path);
            Value rhs = cy.payload(i, b);
            if (x[i].equal(lhs, rhs, budget) != Equality::equal) {
              return fail("comm4", y, path,
                          "candidate gives " + lhs.render() + ", candidate at bh gives " + rhs.render());
            }
          } catch (const Error& e) {
            return fail("comm4", y, path, e.what());
          }
        }
      }
    }
  }
  auto cmp = ext_equal(nu_container(f, reg), x, candidate(y0), unfold(f, reg, co, y0, state_cap), budget);
  if (cmp.verdict == Equality::distinct) {
    std::optional<Value> w;
    if (cmp.witness) w = cmp.witness->second;
    return fail("final", y0, w, "candidate differs from unfold");
  }
  return v;
}

}  // namespace contcalc

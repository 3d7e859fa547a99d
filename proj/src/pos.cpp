#include <set>

#include "contcalc/fixpoint.hpp"

namespace contcalc {

const char* to_string(Fixity f) { return f == Fixity::mu ? "mu" : "nu"; }

PathWalk walk_path(const SplitContainer& f, const Value& anchor, const Navigator& nav, const Value& path) {
  PathWalk w;
  if (!path.is(Value::Kind::path)) {
    w.reason = "not a path: " + path.render();
    return w;
  }
  Value node = anchor;
  Unfolding layer = nav(node);
  const auto& steps = path.steps();
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const Value* next = layer.child(steps[k]);
    if (!next) {
      w.failed_step = k;
      w.reason = steps[k].render() + " is not a recursive position of shape " + layer.shape.render();
      return w;
    }
    node = *next;
    layer = nav(node);
  }
  w.failed_step = steps.size();
  auto index = f.base.indices.find(path.index_name());
  if (!index) {
    w.reason = "unknown index '" + path.index_name() + "'";
    return w;
  }
  if (!f.base.positions(*index, layer.shape).contains(path.final_position())) {
    w.reason = path.final_position().render() + " is not a position of shape " + layer.shape.render() +
               " at index " + path.index_name();
    return w;
  }
  w.valid = true;
  w.landing_node = node;
  w.landing_shape = layer.shape;
  return w;
}

namespace {

struct Frontier {
  std::vector<Value> steps;
  Value node;
};

/// Does some node reachable from `start` (inclusive) carry a position at
/// `index`? Nodes are finite trees or machine seeds, so the visited set is
/// finite.
bool productive(const SplitContainer& f, std::size_t index, const Navigator& nav,
                const std::vector<Frontier>& start) {
  std::set<Value> seen;
  std::vector<Value> stack;
  for (const auto& fr : start) stack.push_back(fr.node);
  while (!stack.empty()) {
    Value n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    auto layer = nav(n);
    bool t = false;
    if (!f.base.positions(index, layer.shape).impl().level(0, 1, t).empty() ||
        f.base.positions(index, layer.shape).impl().has_beyond(0)) {
      return true;
    }
    for (const auto& [q, c] : layer.children) stack.push_back(c);
  }
  return false;
}

std::vector<Frontier> step_frontier(const std::vector<Frontier>& frontier, const Navigator& nav) {
  std::vector<Frontier> next;
  for (const auto& fr : frontier) {
    auto layer = nav(fr.node);
    for (const auto& [q, c] : layer.children) {
      auto steps = fr.steps;
      steps.push_back(q);
      next.push_back(Frontier{std::move(steps), c});
    }
  }
  return next;
}

class PosDomain final : public DomainImpl {
 public:
  PosDomain(Fixity fixity, SplitContainer f, std::size_t index, Value anchor, Navigator nav)
      : fixity_(fixity), f_(std::move(f)), index_(index), anchor_(std::move(anchor)), nav_(std::move(nav)) {}

  DomainKind kind() const override { return DomainKind::pos; }

  bool contains(const Value& v) const override {
    if (!v.is(Value::Kind::path) || v.index_name() != f_.base.indices.name(index_)) return false;
    return walk_path(f_, anchor_, nav_, v).valid;
  }

  std::vector<Value> level(std::size_t rank, std::size_t cap, bool& truncated) const override {
    std::vector<Frontier> frontier{Frontier{{}, anchor_}};
    for (std::size_t r = 0; r < rank && !frontier.empty(); ++r) frontier = step_frontier(frontier, nav_);
    std::vector<Value> out;
    Budget inner{rank, cap};
    for (const auto& fr : frontier) {
      auto layer = nav_(fr.node);
      for (const auto& p : f_.base.positions(index_, layer.shape).enumerate(inner).values) {
        if (out.size() == cap) {
          truncated = true;
          return out;
        }
        out.push_back(Value::path(fr.steps, f_.base.indices.name(index_), p));
      }
    }
    return out;
  }

  bool has_beyond(std::size_t rank) const override {
    std::vector<Frontier> frontier{Frontier{{}, anchor_}};
    for (std::size_t r = 0; r <= rank && !frontier.empty(); ++r) frontier = step_frontier(frontier, nav_);
    return productive(f_, index_, nav_, frontier);
  }

  Enumeration enumerate(const Budget& budget) const override {
    Enumeration out;
    std::vector<Frontier> frontier{Frontier{{}, anchor_}};
    const auto& name = f_.base.indices.name(index_);
    for (std::size_t r = 0; r <= budget.size && !frontier.empty(); ++r) {
      for (const auto& fr : frontier) {
        auto layer = nav_(fr.node);
        for (const auto& p : f_.base.positions(index_, layer.shape).enumerate(budget).values) {
          if (out.values.size() == budget.count) {
            out.exhausted = true;
            return out;
          }
          out.values.push_back(Value::path(fr.steps, name, p));
        }
      }
      frontier = step_frontier(frontier, nav_);
    }
    out.bounded = !frontier.empty() && productive(f_, index_, nav_, frontier);
    return out;
  }

  bool finite() const override { return fixity_ == Fixity::mu; }

  std::string describe() const override {
    return std::string("Pos(") + to_string(fixity_) + ", " + f_.base.indices.name(index_) + ", " +
           anchor_.render() + ")";
  }

 private:
  Fixity fixity_;
  SplitContainer f_;
  std::size_t index_;
  Value anchor_;
  Navigator nav_;
};

}  // namespace

Domain pos_domain(Fixity fixity, const SplitContainer& f, std::size_t index, Value anchor, Navigator nav) {
  return Domain(std::make_shared<const PosDomain>(fixity, f, index, std::move(anchor), std::move(nav)));
}

Enumeration enumerate_paths(const SplitContainer& f, std::size_t index, const Value& anchor,
                            const Navigator& nav, const Budget& budget) {
  return pos_domain(Fixity::mu, f, index, anchor, nav).enumerate(budget);
}

}  // namespace contcalc

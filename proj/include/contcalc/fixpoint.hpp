#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "contcalc/container.hpp"

namespace contcalc {

enum class Fixity { mu, nu };

const char* to_string(Fixity f);

/// One layer of a W- or M-tree: the root shape (ξ₀) and the child table
/// (ξ₁) in canonical position order.
struct Unfolding {
  Value shape;
  std::vector<std::pair<Value, Value>> children;

  const Value* child(const Value& q) const {
    for (const auto& [k, v] : children) {
      if (k == q) return &v;
    }
    return nullptr;
  }
};

/// Destructor of a fixed point carrier: W-trees answer with their root
/// node, machine seeds with one machine step.
using Navigator = std::function<Unfolding(const Value& node)>;

/// The family Pos i c of finite paths into `anchor`: below-steps through
/// Q-positions ending in here(i, p) with p ∈ P i (landing shape). Rank is
/// the number of below-steps; enumeration is shortlex.
Domain pos_domain(Fixity fixity, const SplitContainer& f, std::size_t index, Value anchor, Navigator nav);

/// All paths of rank ≤ budget.size, shortlex.
Enumeration enumerate_paths(const SplitContainer& f, std::size_t index, const Value& anchor,
                            const Navigator& nav, const Budget& budget);

/// Walks `path` from `anchor`. Returns the landing node or, on failure, the
/// index of the failing step (steps.size() means the final position).
struct PathWalk {
  bool valid = false;
  Value landing_node;
  Value landing_shape;
  std::size_t failed_step = 0;
  std::string reason;
};

PathWalk walk_path(const SplitContainer& f, const Value& anchor, const Navigator& nav, const Value& path);

}  // namespace contcalc

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "contcalc/container.hpp"
#include "contcalc/fixpoint.hpp"

namespace contcalc {

/// The domain W S Q of finite trees `sup s [q -> t, ...]`, children listed
/// in the canonical order of Q s. Rank is height minus one (leaves have the
/// rank of their shape).
Domain w_domain(Domain shapes, std::function<Domain(const Value&)> q);

/// Root layer of a W-tree (ξ₀, ξ₁ for WAlg).
Unfolding unsup_w(const Value& tree);

Navigator w_navigator();

/// The least fixed point container W S Q ◁ Pos over the first I indices.
/// Throws when some enumerable shape has infinitely many recursive
/// positions.
Container mu_container(const SplitContainer& f);

/// Element of ⟦F⟧(X, ⟦W ◁ Pos⟧X) with each child given as a μ-element.
using MuLayer = Unrolled<ExtElement>;

/// The initial algebra map: sup the shape over the child trees and route
/// here-paths to the parameter payload, below q b to child q at b.
ExtElement into(const SplitContainer& f, const MuLayer& layer);

/// Inverse decomposition of a μ-element into its root layer.
MuLayer out_mu(const SplitContainer& f, const ExtElement& e);

/// An algebra ⟦F⟧(X, Y) → Y in split presentation.
struct Algebra {
  Domain carrier;
  std::function<Value(const Value& shape, const Payload& params, const std::function<Value(const Value&)>& rec)>
      act;
};

/// The mediating map out of the initial algebra, by structural recursion
/// on the tree. Runs on an explicit stack.
Value fold(const SplitContainer& f, const Algebra& alg, const ExtElement& e);

/// Sub-element of a μ-element at a chain of recursive positions.
ExtElement mu_subelement(const ExtElement& e, const std::vector<Value>& steps);

struct ProbeVerdict {
  bool consistent = true;
  std::optional<ExtElement> witness;
  std::string detail;
};

using Candidate = std::function<Value(const ExtElement&)>;

/// Checks candidate ∘ into = act ∘ ⟦F⟧(X, candidate) on every sample and
/// every sub-element of it (smallest first), then checks candidate agrees
/// with fold on the samples.
ProbeVerdict uniqueness_probe(const SplitContainer& f, const Algebra& alg, const Candidate& candidate,
                              const std::vector<ExtElement>& samples, const Budget& budget = {});

/// All positions at `index` of a finite tree, shortlex.
std::vector<Value> pos_enumerate_w(const Value& w, std::size_t index, const SplitContainer& f);

/// Number of nodes and height of a W-tree.
std::size_t w_size(const Value& tree);
std::size_t w_height(const Value& tree);

}  // namespace contcalc

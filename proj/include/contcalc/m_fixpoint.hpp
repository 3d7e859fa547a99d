#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "contcalc/container.hpp"
#include "contcalc/fixpoint.hpp"
#include "contcalc/machine.hpp"

namespace contcalc {

using Registry = std::shared_ptr<MachineRegistry>;

Navigator m_navigator(Registry reg);

/// The domain M S Q of registered seeds whose machines conform to (S, Q).
/// Equality is exact bisimilarity; enumeration lists one seed per
/// bisimilarity class, in registration order.
Domain m_domain(const SplitContainer& f, Registry reg);

/// The greatest fixed point container M S Q ◁ Pos over the first I indices.
Container nu_container(const SplitContainer& f, Registry reg);

/// Element of ⟦F⟧(X, ⟦M ◁ Pos⟧X) with each child given as a ν-element.
using NuLayer = Unrolled<ExtElement>;

/// Terminal coalgebra map: one machine step on the seed, payloads
/// re-rooted at here / below q.
NuLayer out(const SplitContainer& f, Registry reg, const ExtElement& e);

/// Inverse of `out`: registers (or reuses) a one-state machine whose state
/// has the layer's shape and points at the child seeds.
ExtElement into_nu(const SplitContainer& f, Registry reg, const NuLayer& layer);

/// A coalgebra Y → ⟦F⟧(X, Y) in split presentation. `name` keys the unfold
/// memo, so distinct coalgebras need distinct names.
struct Coalgebra {
  std::string name;
  Domain carrier;
  std::function<Value(const Value& y)> bs;
  std::function<Value(const Value& y, std::size_t index, const Value& p)> bg;
  std::function<Value(const Value& y, const Value& q)> bh;
};

/// Raised when the states reachable from y exceed the cap.
class NonRegular : public Error {
 public:
  using Error::Error;
};

constexpr std::size_t default_state_cap = 10000;

/// The seed part of unfold: the machine of states reachable from y under
/// bh, registered once per coalgebra. States already materialised by an
/// earlier call are reused, so child q of unfold_seed(y) is exactly
/// unfold_seed(bh y q).
Value unfold_seed(const SplitContainer& f, Registry reg, const Coalgebra& co, const Value& y,
                  std::size_t state_cap = default_state_cap);

/// The unique coalgebra morphism into the terminal coalgebra, at y. The
/// payload is computed by Pos induction along the retraction
/// (unfold_seed, bh).
ExtElement unfold(const SplitContainer& f, Registry reg, const Coalgebra& co, const Value& y,
                  std::size_t state_cap = default_state_cap);

/// Shape-level difference between two seeds: the below-steps to the first
/// node where the shapes differ.
struct BisimWitness {
  std::vector<Value> steps;
  /// Number of nodes on the witness path.
  std::size_t length() const { return steps.size() + 1; }
  std::string render() const;
};

enum class BisimVerdict { bisimilar, distinct, exhausted };

const char* to_string(BisimVerdict v);

struct BisimResult {
  BisimVerdict verdict = BisimVerdict::bisimilar;
  std::optional<BisimWitness> witness;
  std::size_t pairs_visited = 0;
};

/// Compares the shapes of all nodes at step-depth < depth, breadth first,
/// so a distinct verdict carries a shortest witness. `exhausted` when more
/// than `pair_cap` seed pairs would be visited.
BisimResult bisim_bounded(const MachineRegistry& reg, const Value& m0, const Value& m1, std::size_t depth,
                          std::size_t pair_cap = 1000000);

/// Exact bisimilarity by partition refinement over the states reachable
/// from both seeds. Never `exhausted`.
BisimResult bisim_exact(const MachineRegistry& reg, const Value& m0, const Value& m1);

/// Walks `path` from `seed`; failure names the offending step.
PathWalk pos_eval(const SplitContainer& f, Registry reg, const Value& seed, const Value& path);

/// A map D → M with lifts: map(lift(d, q)) must be bisimilar to child q of
/// map(d).
struct Retraction {
  std::function<Value(const Value& d)> map;
  std::function<Value(const Value& d, const Value& q)> lift;
};

struct PosHandlers {
  std::function<Value(const Value& d, std::size_t index, const Value& p)> here;
  std::function<Value(const Value& d, const Value& q, const Value& rest, const Value& rec)> below;
};

class RetractionError : public Error {
 public:
  RetractionError(Value d, Value q, const std::string& what);
  const Value& element() const { return d_; }
  const Value& step() const { return q_; }

 private:
  Value d_;
  Value q_;
};

/// Pos induction over a retraction: here(i, p) goes to handlers.here at the
/// current d, below q rest to handlers.below with the result at lift(d, q).
/// Checks the retraction evidence at each step taken.
Value pos_induct(const SplitContainer& f, Registry reg, const Retraction& r, const PosHandlers& h, const Value& d,
                 const Value& path);

struct MorphismVerdict {
  bool consistent = true;
  /// comm1 .. comm4, or "final" for the closing comparison with unfold.
  std::string component;
  Value y;
  std::optional<Value> witness;
  std::string detail;
};

using CoalgebraCandidate = std::function<ExtElement(const Value& y)>;

/// Checks that `candidate` is a coalgebra morphism on every y reachable
/// from y0: comm1 shapes, comm2 children (exact bisimilarity), comm3 here
/// payloads, comm4 below payloads on paths with at most budget.size steps.
/// If all hold, compares candidate(y0) with unfold(y0) by ext_equal.
MorphismVerdict coalg_morphism_check(const SplitContainer& f, Registry reg, const FamilyAssignment& x,
                                     const Coalgebra& co, const CoalgebraCandidate& candidate, const Value& y0,
                                     const Budget& budget, std::size_t state_cap = default_state_cap);

/// States reachable from y under bh, BFS order. Throws NonRegular past the
/// cap.
std::vector<Value> coalgebra_reachable(const SplitContainer& f, const Coalgebra& co, const Value& y,
                                       std::size_t state_cap = default_state_cap);

}  // namespace contcalc

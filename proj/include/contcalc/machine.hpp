#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "contcalc/container.hpp"
#include "contcalc/fixpoint.hpp"
#include "contcalc/value.hpp"

namespace contcalc {

struct MachineState {
  std::string name;
  Value shape;
  /// Q-position ↦ target seed, in canonical position order. Targets are
  /// usually states of the same machine; machines built by the engine may
  /// point into other registered machines.
  std::vector<std::pair<Value, Value>> children;
};

/// A finite-state step system presenting a regular M-tree from each state.
/// Optional payload lines attach parameter values to states so that a
/// machine file can double as a coalgebra.
struct CoalgebraMachine {
  std::string name;
  std::vector<MachineState> states;
  std::map<std::tuple<std::string, std::string, Value>, Value> payloads;

  const MachineState* find(const std::string& state) const;
  const MachineState& at(const std::string& state) const;
  Value seed(const std::string& state) const { return Value::seed(name, state); }
};

class UnknownMachine : public Error {
 public:
  using Error::Error;
};

/// Reads every `machine <name>` block of a machine file:
///
///   machine <name>
///   <state> : shape <value> ; <q> -> <state> ; ...
///   payload <state> <index> <position> = <value>
///
/// `#` starts a comment. Local targets must name states of the block.
std::vector<CoalgebraMachine> parse_machines(std::string_view text);

std::string render_machine(const CoalgebraMachine& m);

/// Machines by name. Append-only; all members are safe to call
/// concurrently.
class MachineRegistry {
 public:
  /// Throws if the name is taken or a target seed is dangling.
  void add(CoalgebraMachine m);
  bool has(const std::string& name) const;
  std::shared_ptr<const CoalgebraMachine> get(const std::string& name) const;
  std::vector<std::string> names() const;

  /// True when `seed` names a registered machine and one of its states.
  bool valid_seed(const Value& seed) const;
  /// One machine step: the state's shape and child seeds.
  Unfolding step(const Value& seed) const;
  /// Every seed reachable from `start` (inclusive), BFS order.
  std::vector<Value> reachable(const std::vector<Value>& start) const;

  /// Fresh machine name with the given prefix.
  std::string fresh_name(const std::string& prefix) const;

  /// Keyed seed memo used by unfold and into_nu.
  std::optional<Value> memo(const std::string& key) const;
  void remember(const std::string& key, const Value& seed);

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const CoalgebraMachine>> machines_;
  std::vector<std::string> order_;
  std::map<std::string, Value> memo_;
};

/// Checks that every state reachable from the machine's states has a shape
/// in S and children exactly on Q of that shape. Returns an explanation on
/// failure.
std::optional<std::string> conformance_error(const SplitContainer& f, const MachineRegistry& reg,
                                             const std::string& machine);

}  // namespace contcalc

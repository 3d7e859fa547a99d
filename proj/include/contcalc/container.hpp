#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "contcalc/domain.hpp"
#include "contcalc/value.hpp"

namespace contcalc {

/// Ordered, duplicate-free list of index names. The order fixes the
/// argument order of payload oracles.
class IndexSet {
 public:
  IndexSet() = default;
  explicit IndexSet(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> find(const std::string& name) const;
  std::size_t at(const std::string& name) const;

  IndexSet with(std::string extra) const;
  IndexSet without_last() const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<std::string> names_;
};

using PositionFamily = std::function<Domain(std::size_t index, const Value& shape)>;

/// An I-ary container S ◁ P.
struct Container {
  IndexSet indices;
  Domain shapes;
  PositionFamily pos;

  Domain positions(std::size_t index, const Value& shape) const { return pos(index, shape); }
};

/// A container over I+1 indices presented as (S ◁ P, Q): `base` carries
/// the first I position families and `q` the recursion slot.
struct SplitContainer {
  Container base;
  std::function<Domain(const Value& shape)> q;
  std::string rec_name = "rec";
};

/// One domain per index (the family X : I → Type).
struct FamilyAssignment {
  std::vector<Domain> domains;

  const Domain& operator[](std::size_t i) const { return domains.at(i); }
  std::size_t size() const { return domains.size(); }
};

/// Payload oracle: (index, position) ↦ value. Must be pure.
using Payload = std::function<Value(std::size_t index, const Value& position)>;

/// Raised by payload oracles that are not defined at a position.
class PayloadError : public Error {
 public:
  PayloadError(std::size_t index, Value position, const std::string& what);
  std::size_t index() const { return index_; }
  const Value& position() const { return position_; }

 private:
  std::size_t index_;
  Value position_;
};

/// An element (s, g) of ⟦S ◁ P⟧X.
struct ExtElement {
  Value shape;
  Payload payload;
};

using PayloadTable = std::map<std::pair<std::size_t, Value>, Value>;

/// Finite-table payload; lookups outside the table raise PayloadError.
Payload table_payload(PayloadTable table);

/// Payload with no positions at all.
Payload empty_payload();

/// Componentwise maps f : Π i. X i → Y i.
struct FamilyMorphism {
  std::vector<std::function<Value(const Value&)>> maps;

  static FamilyMorphism identity(std::size_t n);
  /// (this ∘ inner): apply `inner` first.
  FamilyMorphism after(const FamilyMorphism& inner) const;
};

struct Offence {
  std::size_t index = 0;
  Value position;
  std::string reason;
};

struct Membership {
  bool ok = false;
  /// Set for payload failures; empty when the shape itself is rejected.
  std::optional<Offence> offence;
  std::string reason;

  explicit operator bool() const { return ok; }
};

Membership ext_contains(const Container& c, const FamilyAssignment& x, const ExtElement& e,
                        const Budget& budget = {});

struct ExtEnumeration {
  std::vector<ExtElement> elements;
  bool exhausted = false;  // count cap hit (partial result)
  bool bounded = false;    // larger elements exist beyond the size bound

  bool complete() const { return !exhausted && !bounded; }
};

ExtEnumeration ext_enumerate(const Container& c, const FamilyAssignment& x, const Budget& budget = {});

ExtElement extend_mor(const Container& c, const FamilyMorphism& f, const ExtElement& e);

struct ExtComparison {
  Equality verdict = Equality::unknown;
  /// For `distinct`: the separating position, or nothing for a shape
  /// mismatch.
  std::optional<std::pair<std::size_t, Value>> witness;
  std::size_t positions_checked = 0;

  /// Agreement on everything checked: equal, or unknown without a witness.
  bool agrees_to_budget() const { return verdict != Equality::distinct; }
};

ExtComparison ext_equal(const Container& c, const FamilyAssignment& x, const ExtElement& e1,
                        const ExtElement& e2, const Budget& budget = {});

/// Splits off the last index as the recursion slot.
SplitContainer split_last(const Container& c);

/// Inverse of split_last.
Container reassemble(const SplitContainer& f);

/// An element of Σ s. (Π i. P i s → X i) × (Q s → Y) with a finite
/// Q-indexed table of children.
template <class Child>
struct Unrolled {
  Value shape;
  Payload params;
  std::vector<std::pair<Value, Child>> children;

  const Child* child(const Value& q) const {
    for (const auto& [k, v] : children) {
      if (k == q) return &v;
    }
    return nullptr;
  }
};

using SplitElement = Unrolled<Value>;

/// Repackages an element of ⟦reassemble(f)⟧(X, Y) in split form and back.
SplitElement to_split(const SplitContainer& f, const ExtElement& e, const Budget& budget = {});
ExtElement from_split(const SplitContainer& f, const SplitElement& e);

/// Enumerates ⟦f⟧(X, Y) directly in split form.
std::vector<SplitElement> split_enumerate(const SplitContainer& f, const FamilyAssignment& x,
                                          const Domain& y, const Budget& budget = {});

/// Canonical rendering `shape with {pos => value; ...}` over the positions
/// enumerable within `budget` (`...` marks an incomplete position set).
std::string render_element(const Container& c, const ExtElement& e, const Budget& budget = {});

/// Reads `shape with {entries}`; entries are `index : pos => value`, or
/// `path => value` where the path carries its own index.
ExtElement parse_element(const IndexSet& indices, std::string_view text);

}  // namespace contcalc

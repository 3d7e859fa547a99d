#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "contcalc/value.hpp"

namespace contcalc {

/// Enumeration budget. `size` bounds the rank of enumerated values (the
/// natural number for nat:k, tree height minus one for W-trees, number of
/// below-steps for position paths); `count` caps the number of results.
struct Budget {
  std::size_t size = 5;
  std::size_t count = 100000;
};

/// n + 1, saturating; count caps may be SIZE_MAX.
constexpr std::size_t plus_one(std::size_t n) { return n == static_cast<std::size_t>(-1) ? n : n + 1; }

/// Bounded semi-decision of equality.
enum class Equality { equal, distinct, unknown };

const char* to_string(Equality e);

struct Enumeration {
  std::vector<Value> values;
  /// The count cap was hit; `values` is a partial result.
  bool exhausted = false;
  /// Elements of rank above `size` exist.
  bool bounded = false;

  bool complete() const { return !exhausted && !bounded; }
};

enum class DomainKind { empty, unit, fin, nat, sum, prod, atoms, w, m, pos };

class Domain;

/// Interface behind Domain. Implementations enumerate by rank level so that
/// enumeration is prefix-monotone in the budget.
class DomainImpl {
 public:
  virtual ~DomainImpl() = default;

  virtual DomainKind kind() const = 0;
  virtual bool contains(const Value& v) const = 0;
  /// Elements of rank exactly `rank`, at most `cap` of them; sets
  /// `truncated` when the cap cut the level short.
  virtual std::vector<Value> level(std::size_t rank, std::size_t cap, bool& truncated) const = 0;
  /// True when some element has rank above `rank`.
  virtual bool has_beyond(std::size_t rank) const = 0;
  virtual Equality equal(const Value& a, const Value& b, const Budget& budget) const;
  virtual bool finite() const = 0;
  virtual std::string describe() const = 0;

  /// Default walks the levels; implementations with a cheaper traversal
  /// override it.
  virtual Enumeration enumerate(const Budget& budget) const;
};

/// A type of the closed universe: Empty, Unit, Fin n, Nat, sums, products,
/// atom sets, and the W / M / Pos constructions supplied by the fixed-point
/// modules. Immutable; copies share the implementation.
class Domain {
 public:
  Domain();  // Empty
  explicit Domain(std::shared_ptr<const DomainImpl> impl);

  static Domain empty();
  static Domain unit();
  static Domain fin(std::uint64_t n);
  static Domain nat();
  static Domain sum(Domain left, Domain right);
  static Domain prod(Domain left, Domain right);
  static Domain atoms(std::vector<std::string> symbols);

  DomainKind kind() const { return impl_->kind(); }
  bool contains(const Value& v) const { return impl_->contains(v); }
  Enumeration enumerate(const Budget& budget) const { return impl_->enumerate(budget); }
  /// Complete enumeration of a finite domain; throws when the domain is not
  /// finite or does not fit in `cap`.
  std::vector<Value> elements(std::size_t cap = 1u << 20) const;
  Equality equal(const Value& a, const Value& b, const Budget& budget = {}) const {
    return impl_->equal(a, b, budget);
  }
  bool finite() const { return impl_->finite(); }
  std::string describe() const { return impl_->describe(); }

  const DomainImpl& impl() const { return *impl_; }

 private:
  std::shared_ptr<const DomainImpl> impl_;
};

/// Components of a sum or product domain (for structural inspection).
const Domain& left_of(const Domain& d);
const Domain& right_of(const Domain& d);

}  // namespace contcalc

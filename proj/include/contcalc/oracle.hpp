#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "contcalc/elaborator.hpp"

/// Brute-force set semantics of functor expressions, written without the
/// container machinery so that agreement with the engine means something.
/// Only the expression tree is shared.
namespace contcalc::oracle {

struct SemValue {
  enum class Kind { unit, inl, inr, pair, atom, rec, tuple, trunc };

  Kind kind = Kind::unit;
  std::string symbol;           // atom
  std::vector<SemValue> items;  // inl/inr/rec: 1, pair: 2, tuple: n

  static SemValue unit();
  static SemValue inl(SemValue v);
  static SemValue inr(SemValue v);
  static SemValue pair(SemValue a, SemValue b);
  static SemValue atom(std::string s);
  static SemValue rec(SemValue v);
  static SemValue tuple(std::vector<SemValue> vs);
  static SemValue trunc();

  std::string render() const;

  friend bool operator==(const SemValue&, const SemValue&) = default;
  friend std::strong_ordering operator<=>(const SemValue& a, const SemValue& b);
};

/// Parameter name ↦ atom symbols.
using SemAssignment = std::map<std::string, std::vector<std::string>>;

/// F(X, R) for R = rec_set, in a fixed order: sums left then right,
/// products and tuples lexicographic.
std::vector<SemValue> semantic_enumerate(const FunctorExpr& e, const SemAssignment& x,
                                         const std::vector<SemValue>& rec_set);

/// F^height(∅).
std::vector<SemValue> mu_iterate(const FunctorExpr& e, const SemAssignment& x, std::size_t height);

/// F^depth({trunc}): depth-limited unrollings, one per observable
/// behaviour up to that depth.
std::vector<SemValue> nu_truncate(const FunctorExpr& e, const SemAssignment& x, std::size_t depth);

}  // namespace contcalc::oracle

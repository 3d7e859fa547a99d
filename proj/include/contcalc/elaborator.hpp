#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "contcalc/container.hpp"
#include "contcalc/fixpoint.hpp"
#include "contcalc/m_fixpoint.hpp"

namespace contcalc {

struct FunctorExpr;
using ExprPtr = std::shared_ptr<const FunctorExpr>;

/// Strictly positive functor expression over named parameters and the
/// recursion variable.
struct FunctorExpr {
  enum class Kind { zero, one, param, rec, sum, prod, constant, exp };

  Kind kind = Kind::zero;
  std::string name;  // param
  Domain domain;     // constant; exponent domain (must be finite)
  ExprPtr left;      // sum, prod; body of exp
  ExprPtr right;     // sum, prod

  static ExprPtr zero();
  static ExprPtr one();
  static ExprPtr param(std::string name);
  static ExprPtr rec();
  static ExprPtr sum(ExprPtr l, ExprPtr r);
  static ExprPtr prod(ExprPtr l, ExprPtr r);
  static ExprPtr constant(Domain d);
  /// `[n] -> body`; the exponent is Fin n.
  static ExprPtr exp(std::uint64_t n, ExprPtr body);
  static ExprPtr exp(Domain d, ExprPtr body);

  /// Cardinality of the exponent domain.
  std::size_t exponent() const;
};

bool same_expr(const FunctorExpr& a, const FunctorExpr& b);

struct Decl {
  Fixity fixity = Fixity::mu;
  std::string name;
  std::vector<std::string> params;
  ExprPtr body;
  std::string binder = "rec";
  std::size_t line = 1;

  /// Parameter names followed by the recursion slot.
  IndexSet body_indices() const;
};

Decl parse_decl(std::string_view text);

/// Newline-separated declarations with `#` comments. Declaration names must
/// be unique.
std::vector<Decl> parse_decls(std::string_view text);

/// Minimal-parenthesis rendering that parses back to the same tree.
std::string render(const FunctorExpr& e);
std::string render(const Decl& d);

/// Closure combinators. `indices` names every index the expression may
/// mention, the recursion slot included; Param and Rec select by name
/// (Rec uses the last index).
Container to_container(const FunctorExpr& e, const IndexSet& indices);

/// Body container of the declaration split on its recursion slot.
SplitContainer body_split(const Decl& d);

struct Elaborated {
  Decl decl;
  SplitContainer body;
  Container fixed;
  Registry registry;  // ν only
};

/// Builds the body container, splits it and takes the fixed point. ν
/// declarations use `reg` (a fresh registry when null).
Elaborated elaborate(const Decl& d, Registry reg = nullptr);

/// One-paragraph description of an elaborated declaration.
std::string summarize(const Elaborated& e);

}  // namespace contcalc

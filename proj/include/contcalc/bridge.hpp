#pragma once

#include <cstddef>
#include <functional>

#include "contcalc/container.hpp"
#include "contcalc/elaborator.hpp"
#include "contcalc/m_fixpoint.hpp"
#include "contcalc/oracle.hpp"

/// Explicit pairing between engine elements and oracle terms, following
/// the encoding of to_container.
namespace contcalc::bridge {

using oracle::SemValue;

/// One layer: `shape` in the body container's shape domain, parameter
/// payload at body positions, and the translation of each recursive
/// position.
SemValue layer(const FunctorExpr& body, const IndexSet& params, const Value& shape, const Payload& payload,
               const std::function<SemValue(const Value& q)>& rec);

/// An element of ⟦to_container(body)⟧X whose recursion slot carries atoms;
/// each rec atom y becomes rec('y').
SemValue body_element(const FunctorExpr& body, const IndexSet& indices, const ExtElement& e);

/// A μ-element of the elaborated declaration.
SemValue mu_element(const Elaborated& d, const ExtElement& e);

/// The depth-limited unrolling of a ν-element; nodes at step-depth `depth`
/// become trunc.
SemValue nu_element(const Elaborated& d, const ExtElement& e, std::size_t depth);

/// Assignment for the oracle from an assignment of atom domains.
oracle::SemAssignment sem_assignment(const IndexSet& params, const FamilyAssignment& x);

}  // namespace contcalc::bridge

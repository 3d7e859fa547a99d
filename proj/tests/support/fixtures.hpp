#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "contcalc/container.hpp"
#include "contcalc/elaborator.hpp"
#include "contcalc/m_fixpoint.hpp"
#include "contcalc/machine.hpp"
#include "contcalc/w_fixpoint.hpp"

/// Hand-built containers, machines and coalgebras shared by the tests.
namespace fixtures {

using namespace contcalc;

/// S = ⊤ ⊎ ⊤, Q(inl) = ⊥, Q(inr) = ⊤, no parameters.
SplitContainer nat_signature();

/// Nat signature with one parameter X and a single X-position at every
/// shape, so every node of a path carries exactly one here.
SplitContainer unary_nat_signature();

/// S = ⊤ ⊎ ⊤ with P_A and Q empty at inl and ⊤ at inr.
SplitContainer list_signature();

/// ℕ ◁ Fin over one index A.
Container list_container();

/// S = ⊤, no positions.
Container unit_container();

/// No shapes.
Container empty_container();

FamilyAssignment atoms(const std::vector<std::string>& symbols);

/// Nil and cons shapes of a list-like split container, with the single
/// parameter position and recursive position of cons.
struct ListShapes {
  Value nil;
  Value cons;
  Value p;
  Value q;
};

ListShapes list_shapes(const SplitContainer& f);

/// The μ-element [a1, ..., an], built with `into`.
ExtElement list_element(const SplitContainer& f, const std::vector<std::string>& items);

/// Machine "nat" with states s0 .. s<n>; s<k> presents the number k.
CoalgebraMachine nat_machine(std::size_t n);
Value nat_seed(std::size_t k);

/// Machine `name` whose `period` states all have shape inr and form a
/// cycle; every state presents ∞.
CoalgebraMachine inf_machine(const std::string& name, std::size_t period);

/// Random machine over the Nat signature with `states` states.
CoalgebraMachine random_nat_machine(const std::string& name, std::size_t states, std::uint64_t seed);

/// Registry with nat (0..10), inf1, inf2, and the random machines
/// rand0 .. rand<count-1> of at most 12 states.
Registry nat_registry(std::size_t random_count = 16);

/// Cyclic colist r, e, d on carrier Atoms{r, e, d}; bh r = e, e = d, d = r.
Coalgebra red_coalgebra(const SplitContainer& list_like);

/// The constant ∞ on carrier Unit.
Coalgebra infinity_coalgebra();

/// k, k-1, ..., 0 on carrier ℕ (Nat signature).
Coalgebra countdown_coalgebra();

/// List-like coalgebra on Fin states with random shapes, successors and
/// payload atoms from `symbols`. Name `rand-<seed>`.
Coalgebra random_list_coalgebra(const SplitContainer& list_like, std::size_t states, std::uint64_t seed,
                                const std::vector<std::string>& symbols);

/// List-like coalgebra on Fin states whose state k has payload
/// symbols[k mod n] and successor k+1 mod states.
Coalgebra cycle_coalgebra(const SplitContainer& list_like, std::size_t states, const std::vector<std::string>& symbols);

/// Declarations of tests/data/decls.ctc by name.
Decl decl(const std::string& name);

}  // namespace fixtures

#include "doctest.h"

#include <cctype>
#include <random>

#include "contcalc/container.hpp"
#include "contcalc/oracle.hpp"
#include "fixtures.hpp"

using namespace contcalc;

namespace {

ExtElement list_of(const std::vector<std::string>& items) {
  PayloadTable t;
  for (std::size_t k = 0; k < items.size(); ++k) {
    t.emplace(std::make_pair(std::size_t{0}, Value::fin(k, items.size())), Value::atom(items[k]));
  }
  return ExtElement{Value::nat(items.size()), table_payload(std::move(t))};
}

Value upper(const Value& v) {
  std::string s = v.symbol();
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return Value::atom(s);
}

}  // namespace

TEST_CASE("membership in the Nat signature extension") {
  Container c = reassemble(fixtures::nat_signature());
  FamilyAssignment x{{Domain::unit()}};
  CHECK(ext_contains(c, x, ExtElement{Value::inl(Value::unit()), empty_payload()}));
}

TEST_CASE("membership in the list container") {
  Container c = fixtures::list_container();
  auto x = fixtures::atoms({"r", "e", "d"});
  CHECK(ext_contains(c, x, list_of({"r", "e", "d"})));

  PayloadTable t;
  t.emplace(std::make_pair(std::size_t{0}, Value::fin(0, 3)), Value::atom("r"));
  t.emplace(std::make_pair(std::size_t{0}, Value::fin(1, 3)), Value::atom("e"));
  auto m = ext_contains(c, x, ExtElement{Value::nat(3), table_payload(std::move(t))});
  CHECK(!m);
  REQUIRE(m.offence);
  CHECK(m.offence->index == 0);
  CHECK(m.offence->position == Value::fin(2, 3));

  auto outside = ext_contains(c, x, list_of({"r", "x"}));
  CHECK(!outside);
}

TEST_CASE("enumeration counts") {
  auto x2 = fixtures::atoms({"a", "b"});
  CHECK(ext_enumerate(fixtures::unit_container(), FamilyAssignment{}).elements.size() == 1);
  Container unit1 = fixtures::unit_container();
  unit1.indices = IndexSet({"A"});
  CHECK(ext_enumerate(unit1, x2).elements.size() == 1);
  CHECK(ext_enumerate(unit1, FamilyAssignment{{Domain::empty()}}).elements.size() == 1);
  CHECK(ext_enumerate(fixtures::empty_container(), FamilyAssignment{}).elements.empty());

  // Lists of length ≤ 3 over two atoms, counted against the oracle's
  // F^4(∅) for F(A, R) = 1 + A × R.
  auto en = ext_enumerate(fixtures::list_container(), x2, Budget{3, 100000});
  auto body = FunctorExpr::sum(FunctorExpr::one(), FunctorExpr::prod(FunctorExpr::param("A"), FunctorExpr::rec()));
  auto oracle_count = oracle::mu_iterate(*body, {{"A", {"a", "b"}}}, 4).size();
  CHECK(oracle_count == 15);
  CHECK(en.elements.size() == oracle_count);
  CHECK(en.bounded);
  for (const auto& e : en.elements) CHECK(ext_contains(fixtures::list_container(), x2, e));
}

TEST_CASE("count cap gives a partial enumeration") {
  auto en = ext_enumerate(fixtures::list_container(), fixtures::atoms({"a", "b"}), Budget{3, 5});
  CHECK(en.elements.size() == 5);
  CHECK(en.exhausted);
}

TEST_CASE("extend_mor applies the family map") {
  Container c = fixtures::list_container();
  FamilyMorphism up{{upper}};
  auto e = extend_mor(c, up, list_of({"r", "e", "d"}));
  auto x = fixtures::atoms({"R", "E", "D"});
  CHECK(ext_equal(c, x, e, list_of({"R", "E", "D"})).verdict == Equality::equal);
  CHECK(e.payload(0, Value::fin(2, 3)) == Value::atom("D"));
}

TEST_CASE("functor laws on sampled elements") {
  Container c = fixtures::list_container();
  auto x = fixtures::atoms({"a", "b", "c"});
  auto en = ext_enumerate(c, x, Budget{4, 100000});
  std::mt19937_64 rng(7);
  FamilyMorphism g{{[](const Value& v) { return Value::atom(v.symbol() == "a" ? "b" : v.symbol()); }}};
  FamilyMorphism h{{[](const Value& v) { return Value::atom(v.symbol() == "b" ? "c" : "a"); }}};
  for (int k = 0; k < 100; ++k) {
    const auto& e = en.elements[rng() % en.elements.size()];
    CHECK(ext_equal(c, x, extend_mor(c, FamilyMorphism::identity(1), e), e).verdict == Equality::equal);
    auto both = extend_mor(c, h.after(g), e);
    auto seq = extend_mor(c, h, extend_mor(c, g, e));
    CHECK(ext_equal(c, x, both, seq).verdict == Equality::equal);
  }
}

TEST_CASE("ext_equal verdicts") {
  Container c = fixtures::list_container();
  auto x = fixtures::atoms({"r", "e", "d", "x"});
  auto e = list_of({"r", "e", "d"});
  CHECK(ext_equal(c, x, e, e).verdict == Equality::equal);
  auto cmp = ext_equal(c, x, e, list_of({"r", "e", "x"}));
  CHECK(cmp.verdict == Equality::distinct);
  REQUIRE(cmp.witness);
  CHECK(cmp.witness->second == Value::fin(2, 3));
  auto shape = ext_equal(c, x, e, list_of({"r", "e"}));
  CHECK(shape.verdict == Equality::distinct);
  CHECK(!shape.witness);
}

TEST_CASE("split of the list signature") {
  SplitContainer f = fixtures::list_signature();
  Container c = reassemble(f);
  CHECK(c.indices.names() == std::vector<std::string>{"A", "rec"});
  SplitContainer g = split_last(c);
  CHECK(g.base.indices.names() == std::vector<std::string>{"A"});
  Value inl = Value::inl(Value::unit());
  Value inr = Value::inr(Value::unit());
  CHECK(g.base.positions(0, inl).elements().empty());
  CHECK(g.base.positions(0, inr).elements().size() == 1);
  CHECK(g.q(inl).elements().empty());
  CHECK(g.q(inr).elements().size() == 1);
}

TEST_CASE("split of a unary container has an empty base") {
  Container c = fixtures::list_container();
  SplitContainer f = split_last(c);
  CHECK(f.base.indices.size() == 0);
  CHECK(f.q(Value::nat(2)).elements().size() == 2);
  CHECK_THROWS_AS(split_last(fixtures::unit_container()), Error);
}

TEST_CASE("reassembled split agrees with the original") {
  Container c = reassemble(fixtures::list_signature());
  Container d = reassemble(split_last(c));
  FamilyAssignment x{{Domain::atoms({"a", "b"}), Domain::fin(3)}};
  auto en = ext_enumerate(c, x, Budget{2, 50});
  REQUIRE(en.elements.size() > 0);
  for (const auto& e : en.elements) {
    CHECK(ext_contains(d, x, e));
    auto se = to_split(split_last(c), e);
    CHECK(ext_equal(d, x, from_split(split_last(c), se), e).verdict == Equality::equal);
  }
  auto split = split_enumerate(fixtures::list_signature(), FamilyAssignment{{Domain::atoms({"a", "b"})}},
                               Domain::fin(3));
  CHECK(split.size() == 1 + 2 * 3);
}

TEST_CASE("element text round trip") {
  Container c = fixtures::list_container();
  auto e = list_of({"r", "e", "d"});
  auto text = render_element(c, e);
  CHECK(text == "nat:3 with {A : fin:0/3 => atom:r; A : fin:1/3 => atom:e; A : fin:2/3 => atom:d}");
  auto back = parse_element(c.indices, text);
  CHECK(ext_equal(c, fixtures::atoms({"r", "e", "d"}), e, back).verdict == Equality::equal);
  CHECK_THROWS_AS(parse_element(c.indices, "nat:1 with {B : fin:0/1 => atom:r}"), Error);
}

#include "doctest.h"

#include "contcalc/value.hpp"

using namespace contcalc;

TEST_CASE("rendering of every kind") {
  CHECK(Value::unit().render() == "unit");
  CHECK(Value::inl(Value::unit()).render() == "inl unit");
  CHECK(Value::inr(Value::inl(Value::unit())).render() == "inr (inl unit)");
  CHECK(Value::pair(Value::nat(1), Value::atom("r")).render() == "(nat:1 , atom:r)");
  CHECK(Value::fin(2, 3).render() == "fin:2/3");
  CHECK(Value::seed("inf1", "a").render() == "seed:inf1/a");
  Value leaf = Value::sup(Value::inl(Value::unit()), {});
  CHECK(leaf.render() == "sup (inl unit) []");
  Value p = Value::path({Value::unit(), Value::unit()}, "A", Value::unit());
  CHECK(p.render() == "below unit . below unit . here(A, unit)");
  CHECK(here("A", Value::unit()).render() == "here(A, unit)");
}

TEST_CASE("render and parse round trip") {
  std::vector<Value> vs = {
      Value::unit(),
      Value::inl(Value::inr(Value::unit())),
      Value::pair(Value::pair(Value::unit(), Value::nat(7)), Value::fin(0, 1)),
      Value::atom("x0"),
      Value::sup(Value::inr(Value::unit()), {Branch{Value::unit(), Value::sup(Value::inl(Value::unit()), {})}}),
      Value::seed("unfold-red.1", "s0"),
      Value::path({Value::inr(Value::unit())}, "A", Value::inl(Value::unit())),
  };
  for (const auto& v : vs) {
    CAPTURE(v.render());
    CHECK(parse_value(v.render()) == v);
  }
}

TEST_CASE("accessors and path surgery") {
  Value t = Value::sup(Value::inr(Value::unit()), {Branch{Value::unit(), Value::sup(Value::inl(Value::unit()), {})}});
  REQUIRE(t.child(Value::unit()) != nullptr);
  CHECK(t.child(Value::unit())->shape() == Value::inl(Value::unit()));
  CHECK(t.child(Value::inl(Value::unit())) == nullptr);

  Value p = here("X", Value::unit()).path_below(Value::unit()).path_below(Value::unit());
  CHECK(p.steps().size() == 2);
  CHECK(p.path_tail().steps().size() == 1);
  CHECK(p.index_name() == "X");
}

TEST_CASE("ordering is total and consistent with equality") {
  Value a = Value::nat(1);
  Value b = Value::nat(2);
  CHECK(a < b);
  CHECK(!(b < a));
  CHECK(Value::inl(a) != Value::inr(a));
  CHECK((Value::atom("r") <=> Value::atom("r")) == std::strong_ordering::equal);
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(parse_value("inl"), ParseError);
  CHECK_THROWS_AS(parse_value("(unit , unit"), ParseError);
  CHECK_THROWS_AS(parse_value("nonsense"), ParseError);
  try {
    parse_value("inl (unit");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
}

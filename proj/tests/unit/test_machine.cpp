#include "doctest.h"

#include "contcalc/machine.hpp"
#include "fixtures.hpp"

using namespace contcalc;

namespace {

const char* two_machines = R"(# comment line
machine inf2
a : shape inr unit ; unit -> b
b : shape inr unit ; unit -> a   # trailing comment

machine z
s : shape inl unit
payload s X unit = atom:z
)";

}  // namespace

TEST_CASE("parse machine blocks") {
  auto ms = parse_machines(two_machines);
  REQUIRE(ms.size() == 2);
  CHECK(ms[0].name == "inf2");
  REQUIRE(ms[0].states.size() == 2);
  CHECK(ms[0].at("a").children.front().second == Value::seed("inf2", "b"));
  CHECK(ms[1].at("s").shape == Value::inl(Value::unit()));
  CHECK(ms[1].payloads.at({"s", "X", Value::unit()}) == Value::atom("z"));
  CHECK(ms[0].find("zz") == nullptr);
}

TEST_CASE("render and parse round trip") {
  for (const auto& m : parse_machines(two_machines)) {
    auto back = parse_machines(render_machine(m));
    REQUIRE(back.size() == 1);
    CHECK(render_machine(back.front()) == render_machine(m));
  }
}

TEST_CASE("malformed machine files") {
  CHECK_THROWS_AS(parse_machines("a : shape unit"), ParseError);
  CHECK_THROWS_AS(parse_machines("machine m\na : shape inr unit ; unit -> nowhere"), ParseError);
  CHECK_THROWS_AS(parse_machines("machine m\na : shape"), ParseError);
  CHECK_THROWS_AS(parse_machines("machine m\na : shape unit\npayload b X unit = unit"), ParseError);
  try {
    parse_machines("machine m\n\na : shape (unit");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("registry") {
  MachineRegistry reg;
  for (auto& m : parse_machines(two_machines)) reg.add(m);
  CHECK(reg.has("inf2"));
  CHECK(reg.names() == std::vector<std::string>{"inf2", "z"});
  CHECK_THROWS_AS(reg.add(parse_machines(two_machines).front()), Error);
  CHECK_THROWS_AS(reg.get("nope"), UnknownMachine);
  CHECK(reg.valid_seed(Value::seed("inf2", "a")));
  CHECK(!reg.valid_seed(Value::seed("inf2", "c")));
  CHECK(!reg.valid_seed(Value::unit()));
  CHECK(reg.step(Value::seed("inf2", "a")).shape == Value::inr(Value::unit()));
  CHECK(reg.reachable({Value::seed("inf2", "b")}).size() == 2);
  CHECK(reg.fresh_name("sup") != reg.fresh_name("sup.1") );

  CoalgebraMachine dangling;
  dangling.name = "d";
  dangling.states.push_back(MachineState{"x", Value::inr(Value::unit()), {{Value::unit(), Value::seed("gone", "x")}}});
  CHECK_THROWS_AS(reg.add(dangling), Error);

  CHECK(!reg.memo("k"));
  reg.remember("k", Value::seed("z", "s"));
  CHECK(reg.memo("k") == Value::seed("z", "s"));
}

TEST_CASE("cross-machine targets") {
  MachineRegistry reg;
  for (auto& m : parse_machines(two_machines)) reg.add(m);
  auto ms = parse_machines("machine one\nt : shape inr unit ; unit -> z/s\n");
  reg.add(ms.front());
  auto f = fixtures::nat_signature();
  CHECK(!conformance_error(f, reg, "one"));
  CHECK(reg.reachable({Value::seed("one", "t")}).size() == 2);
}

TEST_CASE("conformance") {
  MachineRegistry reg;
  auto ms = parse_machines("machine m\na : shape inr unit\nmachine w\nb : shape (unit , unit)\n");
  for (auto& m : ms) reg.add(m);
  auto f = fixtures::nat_signature();
  auto missing = conformance_error(f, reg, "m");
  REQUIRE(missing);
  auto shape = conformance_error(f, reg, "w");
  REQUIRE(shape);
}

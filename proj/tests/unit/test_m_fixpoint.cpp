#include "doctest.h"

#include "contcalc/m_fixpoint.hpp"
#include "fixtures.hpp"

using namespace contcalc;

namespace {

const Value inl_unit = Value::inl(Value::unit());
const Value inr_unit = Value::inr(Value::unit());

Value below_k(std::size_t k, const std::string& index) {
  std::vector<Value> steps(k, Value::unit());
  return Value::path(steps, index, Value::unit());
}

}  // namespace

TEST_CASE("Nat-signature seeds are M-domain elements") {
  auto reg = fixtures::nat_registry(0);
  auto f = fixtures::nat_signature();
  Container nu = nu_container(f, reg);
  for (std::size_t k = 0; k <= 10; ++k) CHECK(nu.shapes.contains(fixtures::nat_seed(k)));
  CHECK(nu.shapes.contains(Value::seed("inf1", "c0")));
  CHECK(!nu.shapes.contains(Value::seed("nat", "s11")));
  CHECK(!nu.shapes.contains(Value::seed("missing", "s0")));
  CHECK(!nu.shapes.finite());
  // One representative per behaviour: 0..10 and ∞.
  CHECK(nu.shapes.enumerate(Budget{0, 1000}).values.size() == 12);
}

TEST_CASE("machines that do not fit the signature are rejected") {
  auto reg = fixtures::nat_registry(0);
  CoalgebraMachine bad;
  bad.name = "bad";
  bad.states.push_back(MachineState{"a", inl_unit, {{Value::unit(), Value::seed("bad", "a")}}});
  reg->add(bad);
  auto f = fixtures::nat_signature();
  CHECK(conformance_error(f, *reg, "bad"));
  CHECK(!conformance_error(f, *reg, "nat"));
  CHECK(!m_domain(f, reg).contains(Value::seed("bad", "a")));
}

TEST_CASE("no recursion leaves machines stuck after one step") {
  auto reg = std::make_shared<MachineRegistry>();
  auto f = fixtures::list_signature();
  f.q = [](const Value&) { return Domain::empty(); };
  CoalgebraMachine m;
  m.name = "flat";
  m.states.push_back(MachineState{"n", inl_unit, {}});
  m.states.push_back(MachineState{"c", inr_unit, {}});
  reg->add(m);
  CHECK(m_domain(f, reg).enumerate(Budget{0, 10}).values.size() == 2);
}

TEST_CASE("out of the infinity and zero seeds") {
  auto reg = fixtures::nat_registry(0);
  auto f = fixtures::nat_signature();
  auto inf = out(f, reg, ExtElement{Value::seed("inf1", "c0"), empty_payload()});
  CHECK(inf.shape == inr_unit);
  REQUIRE(inf.children.size() == 1);
  CHECK(inf.children.front().second.shape == Value::seed("inf1", "c0"));

  auto u = fixtures::unary_nat_signature();
  Payload g = [](std::size_t, const Value& p) { return Value::atom(p.render()); };
  auto zero = out(u, reg, ExtElement{fixtures::nat_seed(0), g});
  CHECK(zero.shape == inl_unit);
  CHECK(zero.children.empty());
  CHECK(zero.params(0, Value::unit()) == Value::atom("here(X, unit)"));
}

TEST_CASE("into_nu inverts out") {
  auto reg = fixtures::nat_registry(0);
  auto f = fixtures::unary_nat_signature();
  FamilyAssignment x{{Domain::atoms({"a", "b"})}};
  Payload g = [](std::size_t, const Value& p) { return Value::atom(p.steps().size() % 2 ? "a" : "b"); };
  ExtElement e{fixtures::nat_seed(4), g};
  auto back = into_nu(f, reg, out(f, reg, e));
  Container nu = nu_container(f, reg);
  auto cmp = ext_equal(nu, x, e, back, Budget{9, 1000});
  CHECK(cmp.verdict == Equality::equal);
  // Same layer, same seed.
  CHECK(into_nu(f, reg, out(f, reg, e)).shape == back.shape);
}

TEST_CASE("unfold of the constant successor is infinity") {
  auto reg = fixtures::nat_registry(0);
  auto f = fixtures::nat_signature();
  auto e = unfold(f, reg, fixtures::infinity_coalgebra(), Value::unit());
  CHECK(bisim_exact(*reg, e.shape, Value::seed("inf1", "c0")).verdict == BisimVerdict::bisimilar);
}

TEST_CASE("unfold of countdown is the numeral") {
  auto reg = fixtures::nat_registry(0);
  auto f = fixtures::nat_signature();
  for (std::size_t k = 0; k <= 10; ++k) {
    auto e = unfold(f, reg, fixtures::countdown_coalgebra(), Value::nat(k));
    CHECK(bisim_exact(*reg, e.shape, fixtures::nat_seed(k)).verdict == BisimVerdict::bisimilar);
  }
  auto zero = unfold_seed(f, reg, fixtures::countdown_coalgebra(), Value::nat(0));
  CHECK(reg->step(zero).shape == inl_unit);
}

TEST_CASE("unfold of the red cycle") {
  auto reg = std::make_shared<MachineRegistry>();
  auto f = fixtures::list_signature();
  auto e = unfold(f, reg, fixtures::red_coalgebra(f), Value::atom("r"));
  const char* expect[] = {"r", "e", "d", "r", "e", "d"};
  for (std::size_t k = 0; k < 6; ++k) CHECK(e.payload(0, below_k(k, "A")) == Value::atom(expect[k]));
  // The cycle closes: three states.
  CHECK(reg->get(e.shape.machine())->states.size() == 3);
}

TEST_CASE("unfold of a coalgebra constantly at zero") {
  auto reg = std::make_shared<MachineRegistry>();
  auto f = fixtures::unary_nat_signature();
  Coalgebra co;
  co.name = "stop";
  co.carrier = Domain::unit();
  co.bs = [](const Value&) { return inl_unit; };
  co.bg = [](const Value&, std::size_t, const Value&) { return Value::atom("z"); };
  co.bh = [](const Value& y, const Value&) { return y; };
  auto e = unfold(f, reg, co, Value::unit());
  CHECK(reg->step(e.shape).shape == inl_unit);
  CHECK(e.payload(0, here("X", Value::unit())) == Value::atom("z"));
  CHECK_THROWS_AS(e.payload(0, below_k(1, "X")), Error);
}

TEST_CASE("irregular coalgebras hit the state cap") {
  auto reg = std::make_shared<MachineRegistry>();
  auto f = fixtures::nat_signature();
  Coalgebra co;
  co.name = "up";
  co.carrier = Domain::nat();
  co.bs = [](const Value&) { return inr_unit; };
  co.bg = [](const Value&, std::size_t, const Value&) { return Value::unit(); };
  co.bh = [](const Value& y, const Value&) { return Value::nat(y.number() + 1); };
  CHECK_THROWS_AS(unfold_seed(f, reg, co, Value::nat(0), 100), NonRegular);
}

TEST_CASE("unfold child law") {
  auto f = fixtures::list_signature();
  auto reg = std::make_shared<MachineRegistry>();
  for (std::uint64_t s = 1; s <= 10; ++s) {
    auto co = fixtures::random_list_coalgebra(f, 1 + s * 4, s, {"a", "b"});
    for (const auto& y : coalgebra_reachable(f, co, Value::fin(0, 1 + s * 4))) {
      Value seed = unfold_seed(f, reg, co, y);
      for (const auto& [q, child] : reg->step(seed).children) {
        CHECK(child == unfold_seed(f, reg, co, co.bh(y, q)));
      }
    }
  }
}

TEST_CASE("bounded bisimulation") {
  auto reg = fixtures::nat_registry(0);
  Value inf1 = Value::seed("inf1", "c0");
  Value inf2 = Value::seed("inf2", "c0");
  CHECK(bisim_bounded(*reg, inf1, inf2, 100).verdict == BisimVerdict::bisimilar);
  for (std::size_t k : {0, 1, 5, 50}) CHECK(bisim_bounded(*reg, inf1, inf1, k).verdict == BisimVerdict::bisimilar);

  auto r = bisim_bounded(*reg, fixtures::nat_seed(1), fixtures::nat_seed(2), 2);
  CHECK(r.verdict == BisimVerdict::distinct);
  REQUIRE(r.witness);
  CHECK(r.witness->render() == "below unit");
  CHECK(r.witness->length() == 2);
  // At depth 1 only the roots are compared.
  CHECK(bisim_bounded(*reg, fixtures::nat_seed(1), fixtures::nat_seed(2), 1).verdict == BisimVerdict::bisimilar);
}

TEST_CASE("bounded bisimulation respects its pair cap") {
  auto reg = fixtures::nat_registry(0);
  auto r = bisim_bounded(*reg, Value::seed("inf1", "c0"), Value::seed("inf2", "c0"), 100, 1);
  CHECK(r.verdict == BisimVerdict::exhausted);
}

TEST_CASE("exact bisimulation") {
  auto reg = fixtures::nat_registry(0);
  CHECK(bisim_exact(*reg, Value::seed("inf1", "c0"), Value::seed("inf2", "c1")).verdict == BisimVerdict::bisimilar);
  auto r = bisim_exact(*reg, fixtures::nat_seed(3), Value::seed("inf1", "c0"));
  CHECK(r.verdict == BisimVerdict::distinct);
  REQUIRE(r.witness);
  CHECK(r.witness->length() == 4);
  CHECK(bisim_exact(*reg, fixtures::nat_seed(7), fixtures::nat_seed(7)).verdict == BisimVerdict::bisimilar);
}

TEST_CASE("bounded and exact agree at the state count") {
  auto reg = fixtures::nat_registry(24);
  auto names = reg->names();
  std::vector<Value> seeds;
  for (const auto& n : names) {
    for (const auto& s : reg->get(n)->states) seeds.push_back(Value::seed(n, s.name));
  }
  for (std::size_t a = 0; a < seeds.size(); a += 3) {
    for (std::size_t b = 0; b < seeds.size(); b += 5) {
      auto states = reg->reachable({seeds[a], seeds[b]}).size();
      auto ex = bisim_exact(*reg, seeds[a], seeds[b]);
      auto bd = bisim_bounded(*reg, seeds[a], seeds[b], states + 1);
      CHECK(ex.verdict == bd.verdict);
    }
  }
}

TEST_CASE("pos_eval") {
  auto reg = fixtures::nat_registry(0);
  auto f = fixtures::unary_nat_signature();
  Value inf = Value::seed("inf1", "c0");
  for (std::size_t k = 0; k <= 100; ++k) CHECK(pos_eval(f, reg, inf, below_k(k, "X")).valid);
  auto w = pos_eval(f, reg, fixtures::nat_seed(0), below_k(1, "X"));
  CHECK(!w.valid);
  CHECK(w.failed_step == 0);
  auto ok = pos_eval(f, reg, fixtures::nat_seed(0), here("X", Value::unit()));
  CHECK(ok.valid);
  CHECK(ok.landing_shape == inl_unit);
  auto bad = pos_eval(f, reg, fixtures::nat_seed(0), here("X", inl_unit));
  CHECK(!bad.valid);
  CHECK(bad.failed_step == 0);
}

TEST_CASE("pos induction") {
  auto reg = fixtures::nat_registry(0);
  auto f = fixtures::unary_nat_signature();
  Retraction id{[](const Value& d) { return d; },
                [reg](const Value& d, const Value& q) { return *reg->step(d).child(q); }};
  PosHandlers count{[](const Value&, std::size_t, const Value&) { return Value::nat(0); },
                    [](const Value&, const Value&, const Value&, const Value& rec) {
                      return Value::nat(rec.number() + 1);
                    }};
  CHECK(pos_induct(f, reg, id, count, fixtures::nat_seed(5), below_k(3, "X")) == Value::nat(3));
  CHECK(pos_induct(f, reg, id, count, Value::seed("inf2", "c0"), below_k(3, "X")) == Value::nat(3));
  CHECK_THROWS_AS(pos_induct(f, reg, id, count, fixtures::nat_seed(1), below_k(3, "X")), PayloadError);

  // A lift that does not commute with the child map is reported.
  Retraction broken{[](const Value& d) { return d; }, [](const Value& d, const Value&) { return d; }};
  CHECK_THROWS_AS(pos_induct(f, reg, broken, count, fixtures::nat_seed(5), below_k(2, "X")), RetractionError);
}

TEST_CASE("pos induction over a coalgebra retraction computes the payload") {
  auto reg = std::make_shared<MachineRegistry>();
  auto f = fixtures::list_signature();
  auto co = fixtures::red_coalgebra(f);
  Retraction r{[&](const Value& y) { return unfold_seed(f, reg, co, y); }, co.bh};
  PosHandlers h{[&](const Value& y, std::size_t i, const Value& p) { return co.bg(y, i, p); },
                [](const Value&, const Value&, const Value&, const Value& rec) { return rec; }};
  CHECK(pos_induct(f, reg, r, h, Value::atom("e"), below_k(4, "A")) == Value::atom("d"));
}

TEST_CASE("coalgebra morphism check") {
  auto reg = std::make_shared<MachineRegistry>();
  auto f = fixtures::list_signature();
  auto co = fixtures::red_coalgebra(f);
  auto x = fixtures::atoms({"r", "e", "d"});
  Value r = Value::atom("r");
  CoalgebraCandidate exact = [&](const Value& y) { return unfold(f, reg, co, y); };
  auto ok = coalg_morphism_check(f, reg, x, co, exact, r, Budget{8, 100000});
  CHECK(ok.consistent);

  CoalgebraCandidate bent = [&](const Value& y) {
    auto e = unfold(f, reg, co, y);
    if (!(y == r)) return e;
    Payload g = e.payload;
    return ExtElement{e.shape, [g](std::size_t i, const Value& p) {
                        return p.steps().size() == 2 ? Value::atom("r") : g(i, p);
                      }};
  };
  auto bad = coalg_morphism_check(f, reg, x, co, bent, r, Budget{8, 100000});
  CHECK(!bad.consistent);
  CHECK(bad.component == "comm4");
  REQUIRE(bad.witness);
  CHECK(bad.witness->steps().size() == 2);

  CoalgebraMachine nil;
  nil.name = "nil";
  nil.states.push_back(MachineState{"n", inl_unit, {}});
  reg->add(nil);
  CoalgebraCandidate wrong_shape = [&](const Value& y) {
    auto e = unfold(f, reg, co, y);
    return ExtElement{Value::seed("nil", "n"), e.payload};
  };
  auto shape = coalg_morphism_check(f, reg, x, co, wrong_shape, r, Budget{4, 100000});
  CHECK(!shape.consistent);
  CHECK(shape.component == "comm1");
}

TEST_CASE("bisimulation witnesses render as below steps") {
  BisimWitness w{{Value::unit(), Value::unit()}};
  CHECK(w.render() == "below unit . below unit");
  CHECK(BisimWitness{}.render() == "root");
  CHECK(std::string(to_string(BisimVerdict::exhausted)) == "exhausted");
}

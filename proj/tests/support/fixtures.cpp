#include "fixtures.hpp"

#include <fstream>
#include <random>
#include <sstream>

namespace fixtures {

namespace {

Domain unit_at_inr(const Value& s) { return s.is(Value::Kind::inr) ? Domain::unit() : Domain::empty(); }

}  // namespace

SplitContainer nat_signature() {
  SplitContainer f;
  f.base.shapes = Domain::sum(Domain::unit(), Domain::unit());
  f.base.pos = [](std::size_t, const Value&) { return Domain::empty(); };
  f.q = unit_at_inr;
  return f;
}

SplitContainer unary_nat_signature() {
  SplitContainer f = nat_signature();
  f.base.indices = IndexSet({"X"});
  f.base.pos = [](std::size_t, const Value&) { return Domain::unit(); };
  return f;
}

SplitContainer list_signature() {
  SplitContainer f;
  f.base.indices = IndexSet({"A"});
  f.base.shapes = Domain::sum(Domain::unit(), Domain::unit());
  f.base.pos = [](std::size_t, const Value& s) { return unit_at_inr(s); };
  f.q = unit_at_inr;
  return f;
}

Container list_container() {
  Container c;
  c.indices = IndexSet({"A"});
  c.shapes = Domain::nat();
  c.pos = [](std::size_t, const Value& s) { return Domain::fin(s.number()); };
  return c;
}

Container unit_container() {
  Container c;
  c.shapes = Domain::unit();
  c.pos = [](std::size_t, const Value&) { return Domain::empty(); };
  return c;
}

Container empty_container() {
  Container c;
  c.shapes = Domain::empty();
  c.pos = [](std::size_t, const Value&) { return Domain::empty(); };
  return c;
}

FamilyAssignment atoms(const std::vector<std::string>& symbols) { return FamilyAssignment{{Domain::atoms(symbols)}}; }

ListShapes list_shapes(const SplitContainer& f) {
  ListShapes out;
  bool nil = false;
  bool cons = false;
  for (const auto& s : f.base.shapes.enumerate(Budget{0, 64}).values) {
    auto qs = f.q(s).elements();
    auto ps = f.base.positions(0, s).elements();
    if (qs.empty() && ps.empty() && !nil) {
      out.nil = s;
      nil = true;
    }
    if (qs.size() == 1 && ps.size() == 1 && !cons) {
      out.cons = s;
      out.p = ps.front();
      out.q = qs.front();
      cons = true;
    }
  }
  if (!nil || !cons) throw Error("not a list-like container");
  return out;
}

ExtElement list_element(const SplitContainer& f, const std::vector<std::string>& items) {
  auto ls = list_shapes(f);
  ExtElement acc = into(f, MuLayer{ls.nil, empty_payload(), {}});
  for (auto it = items.rbegin(); it != items.rend(); ++it) {
    PayloadTable t;
    t.emplace(std::make_pair(std::size_t{0}, ls.p), Value::atom(*it));
    acc = into(f, MuLayer{ls.cons, table_payload(std::move(t)), {{ls.q, acc}}});
  }
  return acc;
}

CoalgebraMachine nat_machine(std::size_t n) {
  CoalgebraMachine m;
  m.name = "nat";
  m.states.push_back(MachineState{"s0", Value::inl(Value::unit()), {}});
  for (std::size_t k = 1; k <= n; ++k) {
    m.states.push_back(MachineState{"s" + std::to_string(k), Value::inr(Value::unit()),
                                    {{Value::unit(), nat_seed(k - 1)}}});
  }
  return m;
}

Value nat_seed(std::size_t k) { return Value::seed("nat", "s" + std::to_string(k)); }

CoalgebraMachine inf_machine(const std::string& name, std::size_t period) {
  CoalgebraMachine m;
  m.name = name;
  for (std::size_t k = 0; k < period; ++k) {
    m.states.push_back(MachineState{"c" + std::to_string(k), Value::inr(Value::unit()),
                                    {{Value::unit(), Value::seed(name, "c" + std::to_string((k + 1) % period))}}});
  }
  return m;
}

CoalgebraMachine random_nat_machine(const std::string& name, std::size_t states, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CoalgebraMachine m;
  m.name = name;
  for (std::size_t k = 0; k < states; ++k) {
    // Mostly successors, so that long and cyclic behaviours are common.
    bool zero = rng() % 4 == 0;
    MachineState st{"q" + std::to_string(k), zero ? Value::inl(Value::unit()) : Value::inr(Value::unit()), {}};
    if (!zero) st.children.emplace_back(Value::unit(), Value::seed(name, "q" + std::to_string(rng() % states)));
    m.states.push_back(std::move(st));
  }
  return m;
}

Registry nat_registry(std::size_t random_count) {
  auto reg = std::make_shared<MachineRegistry>();
  reg->add(nat_machine(10));
  reg->add(inf_machine("inf1", 1));
  reg->add(inf_machine("inf2", 2));
  for (std::size_t k = 0; k < random_count; ++k) {
    reg->add(random_nat_machine("rand" + std::to_string(k), 1 + k % 12, 1000 + k));
  }
  return reg;
}

Coalgebra red_coalgebra(const SplitContainer& list_like) {
  auto ls = list_shapes(list_like);
  Coalgebra co;
  co.name = "red";
  co.carrier = Domain::atoms({"r", "e", "d"});
  co.bs = [ls](const Value&) { return ls.cons; };
  co.bg = [](const Value& y, std::size_t, const Value&) { return y; };
  co.bh = [](const Value& y, const Value&) {
    const auto& s = y.symbol();
    return Value::atom(s == "r" ? "e" : s == "e" ? "d" : "r");
  };
  return co;
}

Coalgebra infinity_coalgebra() {
  Coalgebra co;
  co.name = "infinity";
  co.carrier = Domain::unit();
  co.bs = [](const Value&) { return Value::inr(Value::unit()); };
  co.bg = [](const Value&, std::size_t, const Value&) -> Value { throw Error("the Nat signature has no parameters"); };
  co.bh = [](const Value& y, const Value&) { return y; };
  return co;
}

Coalgebra countdown_coalgebra() {
  Coalgebra co;
  co.name = "countdown";
  co.carrier = Domain::nat();
  co.bs = [](const Value& y) { return y.number() == 0 ? Value::inl(Value::unit()) : Value::inr(Value::unit()); };
  co.bg = [](const Value&, std::size_t, const Value&) -> Value { throw Error("the Nat signature has no parameters"); };
  co.bh = [](const Value& y, const Value&) { return Value::nat(y.number() - 1); };
  return co;
}

Coalgebra random_list_coalgebra(const SplitContainer& list_like, std::size_t states, std::uint64_t seed,
                                const std::vector<std::string>& symbols) {
  auto ls = list_shapes(list_like);
  std::mt19937_64 rng(seed);
  auto shapes = std::make_shared<std::vector<Value>>();
  auto next = std::make_shared<std::vector<std::uint64_t>>();
  auto payload = std::make_shared<std::vector<std::string>>();
  for (std::size_t k = 0; k < states; ++k) {
    shapes->push_back(rng() % 5 == 0 ? ls.nil : ls.cons);
    next->push_back(rng() % states);
    payload->push_back(symbols[rng() % symbols.size()]);
  }
  Coalgebra co;
  co.name = "rand-" + std::to_string(seed);
  co.carrier = Domain::fin(states);
  co.bs = [shapes](const Value& y) { return shapes->at(y.number()); };
  co.bg = [payload](const Value& y, std::size_t, const Value&) { return Value::atom(payload->at(y.number())); };
  co.bh = [next, states](const Value& y, const Value&) { return Value::fin(next->at(y.number()), states); };
  return co;
}

Coalgebra cycle_coalgebra(const SplitContainer& list_like, std::size_t states,
                          const std::vector<std::string>& symbols) {
  auto ls = list_shapes(list_like);
  Coalgebra co;
  co.name = "cycle-" + std::to_string(states);
  co.carrier = Domain::fin(states);
  co.bs = [ls](const Value&) { return ls.cons; };
  co.bg = [symbols](const Value& y, std::size_t, const Value&) {
    return Value::atom(symbols[y.number() % symbols.size()]);
  };
  co.bh = [states](const Value& y, const Value&) { return Value::fin((y.number() + 1) % states, states); };
  return co;
}

Decl decl(const std::string& name) {
  std::ifstream in(CONTCALC_TEST_DATA "/decls.ctc");
  std::stringstream ss;
  ss << in.rdbuf();
  for (auto& d : parse_decls(ss.str())) {
    if (d.name == name) return d;
  }
  throw Error("no declaration " + name);
}

}  // namespace fixtures

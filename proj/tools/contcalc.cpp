// Command-line front end: elaborate, enumerate, fold, unfold, bisim,
// check-iso. Exit codes: 0 ok, 1 distinct / suite failure, 2 usage, parse or
// lookup error, 3 count cap exhausted.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "contcalc/bridge.hpp"
#include "contcalc/elaborator.hpp"
#include "contcalc/m_fixpoint.hpp"
#include "contcalc/machine.hpp"
#include "contcalc/suite.hpp"
#include "contcalc/text.hpp"
#include "contcalc/w_fixpoint.hpp"

using namespace contcalc;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_distinct = 1;
constexpr int exit_usage = 2;
constexpr int exit_partial = 3;

/// Usage-level failure: reported and mapped to exit 2.
struct UsageError : Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Decl> load_decls(const std::string& path) {
  try {
    return parse_decls(read_file(path));
  } catch (const ParseError& e) {
    throw UsageError(path + ":" + e.what());
  }
}

Decl find_decl(const std::string& path, const std::string& name) {
  for (auto& d : load_decls(path)) {
    if (d.name == name) return d;
  }
  throw UsageError("no declaration named '" + name + "' in " + path);
}

void load_machines(const std::string& path, MachineRegistry& reg) {
  std::vector<CoalgebraMachine> ms;
  try {
    ms = parse_machines(read_file(path));
  } catch (const ParseError& e) {
    throw UsageError(path + ":" + e.what());
  }
  for (auto& m : ms) reg.add(std::move(m));
}

/// `A=r,e,d` or `A=3` (atoms x0 x1 x2).
FamilyAssignment parse_atoms(const Decl& d, const std::vector<std::string>& specs) {
  std::map<std::string, std::vector<std::string>> given;
  for (const auto& spec : specs) {
    auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("malformed --atoms '" + spec + "', expected NAME=a,b,c");
    auto name = spec.substr(0, eq);
    auto rest = spec.substr(eq + 1);
    std::vector<std::string> syms;
    if (!rest.empty() && rest.find_first_not_of("0123456789") == std::string::npos) {
      auto n = std::stoul(rest);
      for (unsigned long k = 0; k < n; ++k) syms.push_back("x" + std::to_string(k));
    } else {
      std::stringstream ss(rest);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (item.empty()) throw UsageError("empty atom in --atoms '" + spec + "'");
        syms.push_back(item);
      }
    }
    if (!given.emplace(name, std::move(syms)).second) throw UsageError("atoms for " + name + " given twice");
  }
  FamilyAssignment x;
  for (const auto& p : d.params) {
    auto it = given.find(p);
    if (it == given.end()) throw UsageError("no --atoms for parameter " + p);
    try {
      x.domains.push_back(Domain::atoms(it->second));
    } catch (const Error& e) {
      throw UsageError(std::string(e.what()) + " (parameter " + p + ")");
    }
    given.erase(it);
  }
  if (!given.empty()) throw UsageError("--atoms names unknown parameter " + given.begin()->first);
  return x;
}

Value parse_seed(const std::string& text) {
  std::string body = text.rfind("seed:", 0) == 0 ? text.substr(5) : text;
  auto slash = body.find('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == body.size()) {
    throw UsageError("malformed seed '" + text + "', expected machine/state");
  }
  return Value::seed(body.substr(0, slash), body.substr(slash + 1));
}

std::string show(const Value& v) {
  if (v.is(Value::Kind::atom)) return v.symbol();
  if (v.is(Value::Kind::nat)) return std::to_string(v.number());
  return v.render();
}

struct Common {
  bool verbose = false;
  std::size_t height = 6;
  std::size_t paths = 16;
  std::size_t state_cap = default_state_cap;
  std::size_t max_count = 100000;

  void announce() const {
    if (!verbose) return;
    std::cerr << "budget: height " << height << ", paths " << paths << ", state cap " << state_cap
              << ", max count " << max_count << "\n";
  }
};

int cmd_elaborate(const Common& c, const std::string& file) {
  c.announce();
  auto decls = load_decls(file);
  bool first = true;
  for (const auto& d : decls) {
    Elaborated e;
    try {
      e = elaborate(d);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& err) {
      throw UsageError(file + ":" + std::to_string(d.line) + ":1: " + err.what());
    }
    if (!first) std::cout << "\n";
    first = false;
    std::cout << summarize(e);
  }
  return exit_ok;
}

int cmd_enumerate(const Common& c, const std::string& file, const std::string& name,
                  const std::vector<std::string>& atoms, bool count_only) {
  c.announce();
  auto d = find_decl(file, name);
  if (d.fixity != Fixity::mu) throw UsageError(name + " is a nu declaration; use unfold for coinductive elements");
  auto x = parse_atoms(d, atoms);
  auto e = elaborate(d);
  ExtEnumeration en;
  if (c.height > 0) en = ext_enumerate(e.fixed, x, Budget{c.height - 1, c.max_count});
  if (!count_only) {
    Budget all{c.height, c.max_count};
    for (const auto& el : en.elements) std::cout << render_element(e.fixed, el, all) << "\n";
  }
  std::cout << (count_only ? "" : "count: ") << en.elements.size() << "\n";
  if (en.exhausted) {
    std::cout << "partial: count cap " << c.max_count << " reached\n";
    return exit_partial;
  }
  return exit_ok;
}

/// Builds the list [a1, ..., an] for list-like bodies: one shape with no
/// positions (nil), one with a single parameter and a single recursive
/// position (cons).
ExtElement build_list(const Elaborated& e, const std::vector<std::string>& items) {
  const auto& f = e.body;
  std::optional<Value> nil;
  std::optional<Value> cons;
  for (const auto& s : f.base.shapes.enumerate(Budget{0, 64}).values) {
    auto qs = f.q(s).elements();
    std::size_t params = 0;
    for (std::size_t i = 0; i < f.base.indices.size(); ++i) params += f.base.positions(i, s).elements().size();
    if (qs.empty() && params == 0 && !nil) nil = s;
    if (qs.size() == 1 && params == 1 && f.base.positions(0, s).elements().size() == 1 && !cons) cons = s;
  }
  if (!nil || !cons) throw UsageError("--list needs a list-shaped declaration (nil and cons shapes)");
  ExtElement acc = into(f, MuLayer{*nil, empty_payload(), {}});
  Value p = f.base.positions(0, *cons).elements().front();
  Value q = f.q(*cons).elements().front();
  for (auto it = items.rbegin(); it != items.rend(); ++it) {
    PayloadTable t;
    t.emplace(std::make_pair(std::size_t{0}, p), Value::atom(*it));
    acc = into(f, MuLayer{*cons, table_payload(std::move(t)), {{q, acc}}});
  }
  return acc;
}

Algebra builtin_algebra(const SplitContainer& f, const std::string& name) {
  using Rec = std::function<Value(const Value&)>;
  if (name == "length") {
    return Algebra{Domain::nat(), [f](const Value& s, const Payload&, const Rec& rec) {
                     auto qs = f.q(s).elements();
                     if (qs.empty()) return Value::nat(0);
                     std::uint64_t n = 0;
                     for (const auto& q : qs) n = std::max(n, rec(q).number());
                     return Value::nat(n + 1);
                   }};
  }
  if (name == "size") {
    return Algebra{Domain::nat(), [f](const Value& s, const Payload&, const Rec& rec) {
                     std::uint64_t n = 1;
                     for (const auto& q : f.q(s).elements()) n += rec(q).number();
                     return Value::nat(n);
                   }};
  }
  if (name == "height") {
    return Algebra{Domain::nat(), [f](const Value& s, const Payload&, const Rec& rec) {
                     std::uint64_t n = 0;
                     for (const auto& q : f.q(s).elements()) n = std::max(n, rec(q).number());
                     return Value::nat(n + 1);
                   }};
  }
  if (name == "collect") {
    // Values are right-nested pairs ending in unit; fold never consults
    // the carrier domain.
    return Algebra{Domain::unit(), [f](const Value& s, const Payload& g, const Rec& rec) {
                     std::vector<Value> items;
                     for (std::size_t i = 0; i < f.base.indices.size(); ++i) {
                       for (const auto& p : f.base.positions(i, s).elements()) items.push_back(g(i, p));
                     }
                     for (const auto& q : f.q(s).elements()) {
                       for (Value v = rec(q); v.is(Value::Kind::pair); v = v.second()) items.push_back(v.first());
                     }
                     Value out = Value::unit();
                     for (auto it = items.rbegin(); it != items.rend(); ++it) out = Value::pair(*it, out);
                     return out;
                   }};
  }
  throw UsageError("unknown algebra '" + name + "' (length, size, height, collect)");
}

/// Lines `shape => weight`; act = weight(shape) + sum of recursive results.
Algebra file_algebra(const SplitContainer& f, const std::string& path) {
  auto text = read_file(path);
  auto weights = std::make_shared<std::map<Value, std::uint64_t>>();
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    start = end + 1;
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    try {
      TokenStream ts(line, lineno);
      if (ts.at_end()) continue;
      Value s = ts.read_value();
      ts.expect("=>");
      auto tok = ts.next();
      if (tok.text.empty() || tok.text.find_first_not_of("0123456789") != std::string::npos) {
        throw ParseError(tok.line, tok.column, "expected a natural number weight");
      }
      if (!ts.at_end()) ts.fail("unexpected text after weight");
      if (!f.base.shapes.contains(s)) throw ParseError(lineno, 1, s.render() + " is not a shape");
      weights->emplace(s, std::stoull(tok.text));
    } catch (const ParseError& e) {
      throw UsageError(path + ":" + e.what());
    }
  }
  return Algebra{Domain::nat(), [f, weights](const Value& s, const Payload&, const std::function<Value(const Value&)>& rec) {
                   auto it = weights->find(s);
                   if (it == weights->end()) throw Error("algebra has no weight for shape " + s.render());
                   std::uint64_t n = it->second;
                   for (const auto& q : f.q(s).elements()) n += rec(q).number();
                   return Value::nat(n);
                 }};
}

int cmd_fold(const Common& c, const std::string& file, const std::string& name, const std::vector<std::string>& atoms,
             const std::string& algebra, const std::string& algebra_file, const std::string& input,
             const std::string& list) {
  c.announce();
  auto d = find_decl(file, name);
  if (d.fixity != Fixity::mu) throw UsageError("fold needs a mu declaration");
  auto e = elaborate(d);
  if (algebra.empty() == algebra_file.empty()) throw UsageError("give exactly one of --algebra and --algebra-file");
  Algebra alg = algebra.empty() ? file_algebra(e.body, algebra_file) : builtin_algebra(e.body, algebra);
  ExtElement el;
  if (input.empty() == list.empty()) throw UsageError("give exactly one of --input and --list");
  if (!list.empty()) {
    std::vector<std::string> items;
    if (list != "[]") {
      std::stringstream ss(list);
      std::string item;
      while (std::getline(ss, item, ',')) items.push_back(item);
    }
    el = build_list(e, items);
  } else {
    try {
      el = parse_element(e.fixed.indices, input);
    } catch (const ParseError& err) {
      throw UsageError(std::string("--input:") + err.what());
    }
  }
  if (!atoms.empty()) {
    auto x = parse_atoms(d, atoms);
    auto m = ext_contains(e.fixed, x, el, Budget{w_height(el.shape), c.max_count});
    if (!m) throw UsageError("input is not an element: " + m.reason);
  } else if (!e.fixed.shapes.contains(el.shape)) {
    throw UsageError("input shape is not a tree of " + d.name);
  }
  Value v = fold(e.body, alg, el);
  if (algebra == "collect") {
    std::string out;
    for (Value it = v; it.is(Value::Kind::pair); it = it.second()) out += (out.empty() ? "" : " ") + show(it.first());
    std::cout << out << "\n";
  } else {
    std::cout << show(v) << "\n";
  }
  return exit_ok;
}

int cmd_unfold(const Common& c, const std::string& file, const std::string& name,
               const std::vector<std::string>& atoms, const std::string& mfile, const std::string& machine,
               const std::string& state) {
  c.announce();
  auto d = find_decl(file, name);
  auto reg = std::make_shared<MachineRegistry>();
  load_machines(mfile, *reg);
  auto e = elaborate(d, reg);
  auto x = parse_atoms(d, atoms);
  if (!reg->has(machine)) throw UsageError("unknown machine '" + machine + "'");
  auto m = reg->get(machine);
  if (!m->find(state)) throw UsageError("machine " + machine + " has no state '" + state + "'");
  if (auto why = conformance_error(e.body, *reg, machine)) throw UsageError("machine does not fit " + name + ": " + *why);
  const auto& f = e.body;
  Coalgebra co;
  co.name = "machine-" + machine;
  co.carrier = m_domain(f, reg);
  co.bs = [reg](const Value& y) { return reg->step(y).shape; };
  co.bh = [reg](const Value& y, const Value& q) {
    auto u = reg->step(y);
    if (auto* ch = u.child(q)) return *ch;
    throw Error("no child at " + q.render() + " of " + y.render());
  };
  co.bg = [m, f](const Value& y, std::size_t i, const Value& p) {
    auto it = m->payloads.find(std::make_tuple(y.state(), f.base.indices.name(i), p));
    if (it == m->payloads.end()) {
      throw Error("machine " + m->name + " has no payload for " + y.state() + " " + f.base.indices.name(i) + " " +
                  p.render());
    }
    return it->second;
  };
  auto el = unfold(f, reg, co, m->seed(state), c.state_cap);
  std::cout << "seed: " << el.shape.render() << "\n";
  std::vector<std::string> values;
  if (c.paths > 0) {
    auto nav = m_navigator(reg);
    for (std::size_t i = 0; i < f.base.indices.size(); ++i) {
      auto ps = pos_domain(Fixity::nu, f, i, el.shape, nav).enumerate(Budget{c.paths - 1, c.max_count});
      for (const auto& p : ps.values) {
        Value v = el.payload(i, p);
        if (!x[i].contains(v)) throw UsageError("payload " + v.render() + " at " + p.render() + " is outside " + x[i].describe());
        std::cout << p.render() << " => " << v.render() << "\n";
        values.push_back(show(v));
      }
      if (ps.exhausted) {
        std::cout << "partial: count cap " << c.max_count << " reached\n";
        return exit_partial;
      }
    }
  }
  std::cout << "values:";
  for (const auto& v : values) std::cout << " " << v;
  std::cout << "\n";
  return exit_ok;
}

int cmd_bisim(const Common& c, const std::string& mfile, const std::string& a, const std::string& b,
              std::optional<std::size_t> depth, bool exact) {
  c.announce();
  MachineRegistry reg;
  load_machines(mfile, reg);
  Value m0 = parse_seed(a);
  Value m1 = parse_seed(b);
  for (const auto& s : {m0, m1}) {
    if (!reg.valid_seed(s)) throw UsageError("unknown machine or state '" + s.machine() + "/" + s.state() + "'");
  }
  if (exact && depth) throw UsageError("give at most one of --depth and --exact");
  BisimResult r = exact ? bisim_exact(reg, m0, m1) : bisim_bounded(reg, m0, m1, depth.value_or(c.paths));
  switch (r.verdict) {
    case BisimVerdict::bisimilar:
      if (exact) {
        std::cout << "equal\n";
      } else {
        std::cout << "bisimilar to depth " << depth.value_or(c.paths) << "\n";
      }
      return exit_ok;
    case BisimVerdict::distinct: {
      const auto& w = *r.witness;
      std::cout << "distinct\nwitness: " << w.render() << " (length " << w.length() << ")\n";
      auto walk = [&](Value s) {
        for (const auto& q : w.steps) s = *reg.step(s).child(q);
        return reg.step(s).shape;
      };
      std::cout << "shapes: " << walk(m0).render() << " vs " << walk(m1).render() << "\n";
      return exit_distinct;
    }
    case BisimVerdict::exhausted:
      std::cout << "exhausted after " << r.pairs_visited << " pairs\n";
      return exit_partial;
  }
  return exit_usage;
}

int cmd_check_iso(const Common& c, const std::string& file, const std::string& name,
                  const std::vector<std::string>& atoms, SuiteOptions opt) {
  c.announce();
  auto d = find_decl(file, name);
  auto x = parse_atoms(d, atoms);
  auto e = elaborate(d);
  opt.count = c.max_count;
  auto rep = run_iso_suite(e, x, opt);
  std::cout << rep.render();
  return rep.passed() ? exit_ok : exit_distinct;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Container calculus engine"};
  app.require_subcommand(1);
  Common common;
  app.add_flag("--verbose", common.verbose, "Print the budgets in effect");
  app.add_option("--max-count", common.max_count, "Cap on enumerated values")->capture_default_str();
  app.add_option("--state-cap", common.state_cap, "Cap on states materialised by unfold")->capture_default_str();

  std::string file, decl, mfile, machine, state, algebra, algebra_file, input, list, seed_a, seed_b;
  std::vector<std::string> atoms;
  bool count_only = false;
  bool exact = false;
  std::optional<std::size_t> depth;
  SuiteOptions suite;

  auto* elab = app.add_subcommand("elaborate", "Summarise the containers of every declaration in FILE");
  elab->add_option("file", file, "Declaration file")->required();

  auto* en = app.add_subcommand("enumerate", "List the elements of a mu declaration");
  en->add_option("file", file)->required();
  en->add_option("decl", decl)->required();
  en->add_option("--atoms", atoms, "Parameter atoms, NAME=a,b,c or NAME=n");
  en->add_option("--height", common.height, "Maximal tree height")->capture_default_str();
  en->add_flag("--count-only", count_only, "Print only the count");

  auto* fo = app.add_subcommand("fold", "Fold an algebra over one element");
  fo->add_option("file", file)->required();
  fo->add_option("decl", decl)->required();
  fo->add_option("--algebra", algebra, "length, size, height or collect");
  fo->add_option("--algebra-file", algebra_file, "Lines `shape => weight`");
  fo->add_option("--input", input, "Element in canonical syntax");
  fo->add_option("--list", list, "List sugar: a,b,c (or [] for nil)");
  fo->add_option("--atoms", atoms, "Check the input against these parameter atoms");

  auto* un = app.add_subcommand("unfold", "Unfold a machine read as a coalgebra");
  un->add_option("file", file)->required();
  un->add_option("decl", decl)->required();
  un->add_option("--machines", mfile, "Machine file")->required();
  un->add_option("--machine", machine, "Machine name")->required();
  un->add_option("--state", state, "Start state")->required();
  un->add_option("--atoms", atoms, "Parameter atoms, NAME=a,b,c or NAME=n");
  un->add_option("--paths", common.paths, "Print payloads on paths with fewer nodes")->capture_default_str();

  auto* bi = app.add_subcommand("bisim", "Compare two machine seeds");
  bi->add_option("machines", mfile, "Machine file")->required();
  bi->add_option("left", seed_a, "machine/state")->required();
  bi->add_option("right", seed_b, "machine/state")->required();
  bi->add_option("--depth", depth, "Compare nodes at fewer than this many steps (default: --paths)");
  bi->add_flag("--exact", exact, "Exact bisimilarity by partition refinement");
  bi->add_option("--paths", common.paths, "Default depth")->capture_default_str();

  auto* ci = app.add_subcommand("check-iso", "Run the fixed-point invariant suite");
  ci->add_option("file", file)->required();
  ci->add_option("decl", decl)->required();
  ci->add_option("--atoms", atoms, "Parameter atoms, NAME=a,b,c or NAME=n");
  ci->add_option("--height", suite.height, "mu: tree height")->capture_default_str();
  ci->add_option("--paths", suite.paths, "nu: path budget in nodes")->capture_default_str();
  ci->add_option("--depth", suite.trunc_depth, "nu: truncation depth")->capture_default_str();
  ci->add_option("--coalgebras", suite.coalgebras, "nu: generated coalgebras")->capture_default_str();
  ci->add_option("--seed", suite.seed, "nu: generator seed")->capture_default_str();
  ci->add_flag("--corrupt", suite.corrupt, "Negative control: empty every position family");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    if (*elab) return cmd_elaborate(common, file);
    if (*en) return cmd_enumerate(common, file, decl, atoms, count_only);
    if (*fo) return cmd_fold(common, file, decl, atoms, algebra, algebra_file, input, list);
    if (*un) return cmd_unfold(common, file, decl, atoms, mfile, machine, state);
    if (*bi) return cmd_bisim(common, mfile, seed_a, seed_b, depth, exact);
    if (*ci) {
      if (common.verbose) {
        std::cerr << "suite: height " << suite.height << ", paths " << suite.paths << ", depth " << suite.trunc_depth
                  << ", coalgebras " << suite.coalgebras << ", seed " << suite.seed << "\n";
      }
      return cmd_check_iso(common, file, decl, atoms, suite);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const UnknownMachine& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}

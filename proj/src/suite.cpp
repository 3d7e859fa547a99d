#include "contcalc/suite.hpp"

#include <random>
#include <set>
#include <sstream>

#include "contcalc/bridge.hpp"
#include "contcalc/m_fixpoint.hpp"
#include "contcalc/oracle.hpp"
#include "contcalc/w_fixpoint.hpp"

namespace contcalc {

bool SuiteReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::string SuiteReport::render() const {
  std::ostringstream os;
  os << "check-iso " << decl << "\n";
  for (const auto& c : checks) {
    os << "  " << (c.passed ? "PASS" : "FAIL") << " " << c.name << " (" << c.cases << " cases)";
    if (!c.detail.empty()) os << ": " << c.detail;
    os << "\n";
  }
  os << "result: " << (passed() ? "pass" : "fail") << "\n";
  return os.str();
}

SplitContainer corrupted(const SplitContainer& f) {
  SplitContainer g = f;
  g.base.pos = [](std::size_t, const Value&) { return Domain::empty(); };
  g.q = [](const Value&) { return Domain::empty(); };
  return g;
}

namespace {

using oracle::SemValue;

/// Runs `body`, turning any library error into a failed check.
template <class F>
CheckResult guarded(const std::string& name, F&& body) {
  CheckResult r;
  r.name = name;
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("error: ") + e.what();
  }
  return r;
}

void fail(CheckResult& r, std::string detail) {
  if (!r.passed) return;
  r.passed = false;
  r.detail = std::move(detail);
}

void check_bijection(CheckResult& r, const std::vector<SemValue>& images, const std::vector<SemValue>& oracle) {
  std::set<SemValue> o(oracle.begin(), oracle.end());
  std::set<SemValue> seen;
  for (const auto& v : images) {
    if (!seen.insert(v).second) return fail(r, "two engine elements map to " + v.render());
    if (!o.count(v)) return fail(r, "engine element " + v.render() + " has no oracle counterpart");
  }
  for (const auto& v : oracle) {
    if (!seen.count(v)) return fail(r, "oracle element " + v.render() + " is not reached by the engine");
  }
  r.detail = std::to_string(images.size()) + " engine elements, " + std::to_string(oracle.size()) + " oracle elements";
}

bool payloads_agree(const Container& c, const FamilyAssignment& x, const Value& shape, const Payload& a,
                    const Payload& b, const Budget& budget, std::string& why) {
  for (std::size_t i = 0; i < c.indices.size(); ++i) {
    for (const auto& p : c.positions(i, shape).enumerate(budget).values) {
      Value va = a(i, p);
      Value vb = b(i, p);
      if (x[i].equal(va, vb, budget) == Equality::distinct) {
        why = "payloads differ at " + c.indices.name(i) + " : " + p.render();
        return false;
      }
    }
  }
  return true;
}

void body_adequacy(SuiteReport& rep, const Elaborated& d, const FamilyAssignment& x,
                   const oracle::SemAssignment& semx, const SuiteOptions& opt) {
  rep.checks.push_back(guarded("body-adequacy", [&](CheckResult& r) {
    Container body = reassemble(d.body);
    FamilyAssignment xr = x;
    xr.domains.push_back(Domain::atoms({"y0", "y1"}));
    auto en = ext_enumerate(body, xr, Budget{0, opt.count});
    if (en.exhausted) return fail(r, "body enumeration hit the count cap");
    std::vector<SemValue> images;
    for (const auto& e : en.elements) images.push_back(bridge::body_element(*d.decl.body, body.indices, e));
    r.cases = images.size();
    check_bijection(r, images,
                    oracle::semantic_enumerate(*d.decl.body, semx, {SemValue::atom("y0"), SemValue::atom("y1")}));
  }));
}

Algebra size_algebra(const SplitContainer& f) {
  return Algebra{Domain::nat(), [f](const Value& s, const Payload&, const std::function<Value(const Value&)>& rec) {
                   std::uint64_t n = 1;
                   for (const auto& q : f.q(s).elements()) n += rec(q).number();
                   return Value::nat(n);
                 }};
}

void mu_checks(SuiteReport& rep, const Elaborated& d, const FamilyAssignment& x, const oracle::SemAssignment& semx,
               const SuiteOptions& opt) {
  std::vector<ExtElement> elems;
  rep.checks.push_back(guarded("mu-adequacy", [&](CheckResult& r) {
    if (opt.height == 0) {
      r.cases = 0;
      return;
    }
    auto en = ext_enumerate(d.fixed, x, Budget{opt.height - 1, opt.count});
    if (en.exhausted) return fail(r, "enumeration hit the count cap");
    std::vector<SemValue> images;
    for (const auto& e : en.elements) images.push_back(bridge::mu_element(d, e));
    r.cases = images.size();
    check_bijection(r, images, oracle::mu_iterate(*d.decl.body, semx, opt.height));
    elems = std::move(en.elements);
    if (elems.size() > opt.samples) elems.resize(opt.samples);
  }));

  Budget all{opt.height + 1, opt.count};
  rep.checks.push_back(guarded("lambek-mu", [&](CheckResult& r) {
    for (const auto& e : elems) {
      ++r.cases;
      auto l = out_mu(d.body, e);
      auto back = into(d.body, l);
      auto cmp = ext_equal(d.fixed, x, e, back, all);
      if (cmp.verdict != Equality::equal) {
        return fail(r, "into(out e) differs from e at " + e.shape.render() + " (" + to_string(cmp.verdict) + ")");
      }
      auto l2 = out_mu(d.body, back);
      std::string why;
      if (!(l2.shape == l.shape) || !payloads_agree(d.body.base, x, l.shape, l.params, l2.params, all, why) ||
          l2.children.size() != l.children.size()) {
        return fail(r, "out(into l) differs from l at " + e.shape.render() + " " + why);
      }
      for (std::size_t k = 0; k < l.children.size(); ++k) {
        if (!(l.children[k].first == l2.children[k].first) ||
            ext_equal(d.fixed, x, l.children[k].second, l2.children[k].second, all).verdict != Equality::equal) {
          return fail(r, "out(into l) changes child " + l.children[k].first.render() + " at " + e.shape.render());
        }
      }
    }
  }));

  auto alg = size_algebra(d.body);
  rep.checks.push_back(guarded("fold-square", [&](CheckResult& r) {
    for (const auto& e : elems) {
      ++r.cases;
      auto l = out_mu(d.body, e);
      Value lhs = fold(d.body, alg, into(d.body, l));
      Value rhs = alg.act(l.shape, l.params, [&](const Value& q) { return fold(d.body, alg, *l.child(q)); });
      if (!(lhs == rhs)) return fail(r, "fold square fails at " + e.shape.render());
      if (!(lhs == Value::nat(w_size(e.shape)))) return fail(r, "size fold disagrees with node count");
    }
  }));

  rep.checks.push_back(guarded("fold-uniqueness", [&](CheckResult& r) {
    r.cases = elems.size();
    Candidate exact = [&](const ExtElement& e) { return fold(d.body, alg, e); };
    auto ok = uniqueness_probe(d.body, alg, exact, elems);
    if (!ok.consistent) return fail(r, "fold itself rejected: " + ok.detail);
    if (elems.empty()) return;
    Value target = elems.back().shape;
    Candidate bent = [&](const ExtElement& e) {
      Value v = fold(d.body, alg, e);
      return e.shape == target ? Value::nat(v.number() + 1) : v;
    };
    auto bad = uniqueness_probe(d.body, alg, bent, elems);
    if (bad.consistent) return fail(r, "perturbation at " + target.render() + " not detected");
    if (!bad.witness || !(bad.witness->shape == target)) {
      return fail(r, "perturbation detected at the wrong tree");
    }
    r.detail = "perturbation at " + target.render() + " detected";
  }));

  rep.checks.push_back(guarded("path-count", [&](CheckResult& r) {
    std::set<Value> trees;
    for (const auto& e : elems) trees.insert(e.shape);
    for (const auto& t : trees) {
      for (std::size_t i = 0; i < d.body.base.indices.size(); ++i) {
        ++r.cases;
        std::size_t expect = 0;
        std::vector<Value> stack{t};
        while (!stack.empty()) {
          Value n = stack.back();
          stack.pop_back();
          expect += d.body.base.positions(i, n.shape()).elements().size();
          for (const auto& b : n.children()) stack.push_back(b.subtree);
        }
        auto got = pos_enumerate_w(t, i, d.body).size();
        if (got != expect) {
          return fail(r, t.render() + " has " + std::to_string(got) + " paths at " + d.body.base.indices.name(i) +
                             ", node sum is " + std::to_string(expect));
        }
      }
    }
  }));
}

struct Generated {
  Coalgebra co;
  std::vector<Value> ys;
};

/// Random finite coalgebras over the body's shapes. With `flat`, every
/// parameter payload is the first atom of its domain.
std::vector<Generated> generate(const Elaborated& d, const FamilyAssignment& x, const SuiteOptions& opt, bool flat) {
  const auto& f = d.body;
  std::vector<Value> shapes;
  for (const auto& s : f.base.shapes.enumerate(Budget{2, 64}).values) {
    if (!f.q(s).finite()) continue;
    bool ok = true;
    for (std::size_t i = 0; i < f.base.indices.size() && ok; ++i) {
      auto p = f.base.positions(i, s);
      ok = p.finite() && (p.elements().empty() || !x[i].elements().empty());
    }
    if (ok) shapes.push_back(s);
  }
  if (shapes.empty()) throw Error("no shape admits a finite coalgebra step");
  std::mt19937_64 rng(opt.seed);
  std::vector<Generated> out;
  for (std::size_t c = 0; c < opt.coalgebras; ++c) {
    std::size_t n = 1 + rng() % std::max<std::size_t>(opt.max_states, 1);
    auto table = std::make_shared<std::map<Value, std::tuple<Value, std::map<Value, Value>, std::map<std::pair<std::size_t, Value>, Value>>>>();
    std::vector<Value> ys;
    for (std::size_t k = 0; k < n; ++k) ys.push_back(Value::fin(k, n));
    for (const auto& y : ys) {
      Value s = shapes[rng() % shapes.size()];
      std::map<Value, Value> kids;
      for (const auto& q : f.q(s).elements()) kids.emplace(q, ys[rng() % n]);
      std::map<std::pair<std::size_t, Value>, Value> pay;
      for (std::size_t i = 0; i < f.base.indices.size(); ++i) {
        auto atoms = x[i].elements();
        for (const auto& p : f.base.positions(i, s).elements()) {
          std::size_t pick = rng() % atoms.size();
          pay.emplace(std::make_pair(i, p), atoms[flat ? 0 : pick]);
        }
      }
      table->emplace(y, std::make_tuple(s, std::move(kids), std::move(pay)));
    }
    Coalgebra co;
    co.name = "gen" + std::to_string(opt.seed) + "-" + std::to_string(c) + (flat ? "-flat" : "") +
              (opt.corrupt ? "-corrupt" : "");
    co.carrier = Domain::fin(n);
    co.bs = [table](const Value& y) { return std::get<0>(table->at(y)); };
    co.bh = [table](const Value& y, const Value& q) { return std::get<1>(table->at(y)).at(q); };
    co.bg = [table](const Value& y, std::size_t i, const Value& p) {
      return std::get<2>(table->at(y)).at({i, p});
    };
    out.push_back(Generated{std::move(co), std::move(ys)});
  }
  return out;
}

void nu_checks(SuiteReport& rep, const Elaborated& d, const FamilyAssignment& x, const oracle::SemAssignment& semx,
               const SuiteOptions& opt) {
  const auto& f = d.body;
  auto reg = d.registry;
  std::vector<Generated> gens;
  std::vector<Generated> flats;
  rep.checks.push_back(guarded("generate", [&](CheckResult& r) {
    gens = generate(d, x, opt, false);
    flats = generate(d, x, opt, true);
    for (const auto& g : gens) r.cases += g.ys.size();
  }));
  if (gens.empty()) return;
  Budget budget{opt.paths == 0 ? 0 : opt.paths - 1, opt.count};

  rep.checks.push_back(guarded("unfold-child-law", [&](CheckResult& r) {
    for (const auto& g : gens) {
      for (const auto& y : g.ys) {
        Value seed = unfold_seed(f, reg, g.co, y);
        auto u = reg->step(seed);
        for (const auto& q : f.q(g.co.bs(y)).elements()) {
          ++r.cases;
          const Value* child = u.child(q);
          Value direct = unfold_seed(f, reg, g.co, g.co.bh(y, q));
          if (!child || !(*child == direct)) {
            return fail(r, g.co.name + " at " + y.render() + ", " + q.render() + ": child " +
                               (child ? child->render() : "missing") + " vs " + direct.render());
          }
        }
      }
    }
  }));

  Container nu = d.fixed;
  rep.checks.push_back(guarded("lambek-nu", [&](CheckResult& r) {
    for (const auto& g : gens) {
      for (const auto& y : g.ys) {
        ++r.cases;
        auto e = unfold(f, reg, g.co, y);
        auto l = out(f, reg, e);
        auto back = into_nu(f, reg, l);
        auto cmp = ext_equal(nu, x, e, back, budget);
        if (!cmp.agrees_to_budget()) {
          return fail(r, "into(out e) differs from e for " + g.co.name + " at " + y.render());
        }
        auto l2 = out(f, reg, back);
        std::string why;
        if (!(l2.shape == l.shape) || !payloads_agree(f.base, x, l.shape, l.params, l2.params, budget, why)) {
          return fail(r, "out(into l) differs from l for " + g.co.name + " at " + y.render() + " " + why);
        }
        for (std::size_t k = 0; k < l.children.size(); ++k) {
          if (!ext_equal(nu, x, l.children[k].second, l2.children[k].second, budget).agrees_to_budget()) {
            return fail(r, "out(into l) changes child " + l.children[k].first.render());
          }
        }
      }
    }
  }));

  rep.checks.push_back(guarded("coalgebra-morphism", [&](CheckResult& r) {
    for (const auto& g : gens) {
      ++r.cases;
      auto co = g.co;
      CoalgebraCandidate cand = [&f, reg, co](const Value& y) { return unfold(f, reg, co, y); };
      auto v = coalg_morphism_check(f, reg, x, co, cand, g.ys.front(), budget);
      if (!v.consistent) return fail(r, g.co.name + ": " + v.component + " " + v.detail);
    }
  }));

  rep.checks.push_back(guarded("bisim-exact-vs-bounded", [&](CheckResult& r) {
    std::vector<Value> seeds;
    for (const auto& g : gens) {
      for (const auto& y : g.ys) seeds.push_back(unfold_seed(f, reg, g.co, y));
    }
    auto all = reg->reachable(seeds);
    std::size_t n = all.size();
    for (std::size_t a = 0; a < seeds.size(); ++a) {
      for (std::size_t b = a; b < seeds.size(); ++b) {
        ++r.cases;
        auto ex = bisim_exact(*reg, seeds[a], seeds[b]);
        auto bd = bisim_bounded(*reg, seeds[a], seeds[b], n);
        if ((ex.verdict == BisimVerdict::distinct) != (bd.verdict == BisimVerdict::distinct)) {
          return fail(r, seeds[a].render() + " vs " + seeds[b].render() + ": exact " + to_string(ex.verdict) +
                             ", bounded(" + std::to_string(n) + ") " + to_string(bd.verdict));
        }
        if (ex.witness && bd.witness && ex.witness->length() != bd.witness->length()) {
          return fail(r, "witness lengths differ for " + seeds[a].render() + " vs " + seeds[b].render());
        }
      }
    }
  }));

  rep.checks.push_back(guarded("truncation-vs-oracle", [&](CheckResult& r) {
    oracle::SemAssignment flat;
    for (const auto& [k, atoms] : semx) flat[k] = atoms.empty() ? atoms : std::vector<std::string>{atoms.front()};
    std::vector<std::pair<Value, ExtElement>> elems;
    for (const auto& g : flats) {
      for (const auto& y : g.ys) {
        auto e = unfold(f, reg, g.co, y);
        elems.emplace_back(e.shape, e);
      }
    }
    for (std::size_t k = 0; k <= opt.trunc_depth; ++k) {
      auto truths = oracle::nu_truncate(*d.decl.body, flat, k);
      std::set<SemValue> allowed(truths.begin(), truths.end());
      std::vector<SemValue> sems;
      for (const auto& [s, e] : elems) {
        auto v = bridge::nu_element(d, e, k);
        if (!allowed.count(v)) return fail(r, "depth " + std::to_string(k) + " unrolling " + v.render() + " of " +
                                                  s.render() + " is not an oracle class");
        sems.push_back(std::move(v));
      }
      for (std::size_t a = 0; a < elems.size(); ++a) {
        for (std::size_t b = a + 1; b < elems.size(); ++b) {
          ++r.cases;
          bool same = sems[a] == sems[b];
          bool bis = bisim_bounded(*reg, elems[a].first, elems[b].first, k).verdict == BisimVerdict::bisimilar;
          if (same != bis) {
            return fail(r, elems[a].first.render() + " vs " + elems[b].first.render() + " at depth " +
                               std::to_string(k) + ": oracle " + (same ? "equal" : "distinct") + ", bisim " +
                               (bis ? "equal" : "distinct"));
          }
        }
      }
    }
  }));
}

}  // namespace

SuiteReport run_iso_suite(const Elaborated& original, const FamilyAssignment& x, const SuiteOptions& opt) {
  Elaborated d = original;
  if (opt.corrupt) {
    d.body = corrupted(d.body);
    d.fixed = d.decl.fixity == Fixity::mu ? mu_container(d.body) : nu_container(d.body, d.registry);
  }
  SuiteReport rep;
  rep.decl = render(d.decl);
  if (x.size() != d.body.base.indices.size()) {
    rep.checks.push_back(CheckResult{"assignment", false, 0,
                                     "expected " + std::to_string(d.body.base.indices.size()) + " parameter domains"});
    return rep;
  }
  oracle::SemAssignment semx;
  rep.checks.push_back(guarded("assignment", [&](CheckResult& r) {
    semx = bridge::sem_assignment(d.body.base.indices, x);
    r.cases = x.size();
  }));
  if (!rep.passed()) return rep;
  body_adequacy(rep, d, x, semx, opt);
  if (d.decl.fixity == Fixity::mu) {
    mu_checks(rep, d, x, semx, opt);
  } else {
    nu_checks(rep, d, x, semx, opt);
  }
  return rep;
}

}  // namespace contcalc

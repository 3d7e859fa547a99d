#include "contcalc/machine.hpp"

#include <deque>
#include <set>
#include <sstream>

#include "contcalc/text.hpp"

namespace contcalc {

const MachineState* CoalgebraMachine::find(const std::string& state) const {
  for (const auto& s : states) {
    if (s.name == state) return &s;
  }
  return nullptr;
}

const MachineState& CoalgebraMachine::at(const std::string& state) const {
  if (auto* s = find(state)) return *s;
  throw UnknownMachine("machine " + name + " has no state '" + state + "'");
}

namespace {

Value read_target(TokenStream& ts, const std::string& machine) {
  auto tok = ts.next();
  auto slash = tok.text.find('/');
  if (slash == std::string::npos) return Value::seed(machine, tok.text);
  if (slash == 0 || slash + 1 == tok.text.size()) {
    throw ParseError(tok.line, tok.column, "malformed target '" + tok.text + "'");
  }
  return Value::seed(tok.text.substr(0, slash), tok.text.substr(slash + 1));
}

}  // namespace

std::vector<CoalgebraMachine> parse_machines(std::string_view text) {
  std::vector<CoalgebraMachine> out;
  std::vector<std::size_t> header_lines;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    TokenStream ts(line, lineno);
    if (ts.at_end()) continue;
    if (ts.accept("machine")) {
      if (ts.at_end()) ts.fail("expected a machine name");
      CoalgebraMachine m;
      m.name = ts.next().text;
      if (m.name.find('/') != std::string::npos) ts.fail("machine names cannot contain '/'");
      if (!ts.at_end()) ts.fail("unexpected text after machine name");
      out.push_back(std::move(m));
      header_lines.push_back(lineno);
      continue;
    }
    if (out.empty()) ts.fail("expected 'machine <name>' before states");
    auto& m = out.back();
    if (ts.accept("payload")) {
      auto state = ts.next().text;
      auto index = ts.next().text;
      Value p = ts.read_value();
      ts.expect("=");
      Value v = ts.read_value();
      if (!ts.at_end()) ts.fail("unexpected text after payload value");
      if (!m.payloads.emplace(std::make_tuple(state, index, p), v).second) {
        ts.fail("duplicate payload for " + state + " at " + index + " : " + p.render());
      }
      continue;
    }
    MachineState st;
    auto name_tok = ts.next();
    st.name = name_tok.text;
    if (m.find(st.name)) {
      throw ParseError(name_tok.line, name_tok.column, "duplicate state '" + st.name + "'");
    }
    ts.expect(":");
    ts.expect("shape");
    st.shape = ts.read_value();
    while (ts.accept(";")) {
      if (ts.at_end()) break;
      Value q = ts.read_value();
      ts.expect("->");
      Value target = read_target(ts, m.name);
      for (const auto& [k, v] : st.children) {
        if (k == q) ts.fail("duplicate position " + q.render());
      }
      st.children.emplace_back(std::move(q), std::move(target));
    }
    if (!ts.at_end()) ts.fail("expected ';'");
    m.states.push_back(std::move(st));
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto& m = out[k];
    if (m.states.empty()) throw ParseError(header_lines[k], 1, "machine " + m.name + " has no states");
    for (const auto& s : m.states) {
      for (const auto& [q, t] : s.children) {
        if (t.machine() == m.name && !m.find(t.state())) {
          throw ParseError(header_lines[k], 1,
                           "machine " + m.name + ": state " + s.name + " points to unknown state '" + t.state() + "'");
        }
      }
    }
    for (const auto& [key, v] : m.payloads) {
      if (!m.find(std::get<0>(key))) {
        throw ParseError(header_lines[k], 1,
                         "machine " + m.name + ": payload for unknown state '" + std::get<0>(key) + "'");
      }
    }
  }
  return out;
}

std::string render_machine(const CoalgebraMachine& m) {
  std::ostringstream os;
  os << "machine " << m.name << "\n";
  for (const auto& s : m.states) {
    os << s.name << " : shape " << s.shape.render();
    for (const auto& [q, t] : s.children) {
      os << " ; " << q.render() << " -> ";
      if (t.machine() == m.name) {
        os << t.state();
      } else {
        os << t.machine() << "/" << t.state();
      }
    }
    os << "\n";
  }
  for (const auto& [key, v] : m.payloads) {
    os << "payload " << std::get<0>(key) << " " << std::get<1>(key) << " " << std::get<2>(key).render() << " = "
       << v.render() << "\n";
  }
  return os.str();
}

void MachineRegistry::add(CoalgebraMachine m) {
  std::lock_guard lock(mutex_);
  if (machines_.count(m.name)) throw Error("machine " + m.name + " is already registered");
  for (const auto& s : m.states) {
    for (const auto& [q, t] : s.children) {
      if (t.machine() == m.name) {
        if (!m.find(t.state())) throw Error("machine " + m.name + ": dangling target " + t.state());
        continue;
      }
      auto it = machines_.find(t.machine());
      if (it == machines_.end() || !it->second->find(t.state())) {
        throw UnknownMachine("machine " + m.name + ": target " + t.render() + " is not registered");
      }
    }
  }
  auto name = m.name;
  machines_.emplace(name, std::make_shared<const CoalgebraMachine>(std::move(m)));
  order_.push_back(name);
}

bool MachineRegistry::has(const std::string& name) const {
  std::lock_guard lock(mutex_);
  return machines_.count(name) > 0;
}

std::shared_ptr<const CoalgebraMachine> MachineRegistry::get(const std::string& name) const {
  std::lock_guard lock(mutex_);
  auto it = machines_.find(name);
  if (it == machines_.end()) throw UnknownMachine("unknown machine '" + name + "'");
  return it->second;
}

std::vector<std::string> MachineRegistry::names() const {
  std::lock_guard lock(mutex_);
  return order_;
}

bool MachineRegistry::valid_seed(const Value& seed) const {
  if (!seed.is(Value::Kind::seed)) return false;
  std::lock_guard lock(mutex_);
  auto it = machines_.find(seed.machine());
  return it != machines_.end() && it->second->find(seed.state()) != nullptr;
}

Unfolding MachineRegistry::step(const Value& seed) const {
  if (!seed.is(Value::Kind::seed)) throw Error("not a machine seed: " + seed.render());
  auto m = get(seed.machine());
  const auto& st = m->at(seed.state());
  Unfolding u;
  u.shape = st.shape;
  u.children = st.children;
  return u;
}

std::vector<Value> MachineRegistry::reachable(const std::vector<Value>& start) const {
  std::vector<Value> out;
  std::set<Value> seen;
  std::deque<Value> queue;
  for (const auto& s : start) {
    if (seen.insert(s).second) {
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    Value s = queue.front();
    queue.pop_front();
    out.push_back(s);
    for (const auto& [q, c] : step(s).children) {
      if (seen.insert(c).second) queue.push_back(c);
    }
  }
  return out;
}

std::string MachineRegistry::fresh_name(const std::string& prefix) const {
  std::lock_guard lock(mutex_);
  for (std::size_t k = machines_.size();; ++k) {
    auto name = prefix + "." + std::to_string(k);
    if (!machines_.count(name)) return name;
  }
}

std::optional<Value> MachineRegistry::memo(const std::string& key) const {
  std::lock_guard lock(mutex_);
  auto it = memo_.find(key);
  if (it == memo_.end()) return std::nullopt;
  return it->second;
}

void MachineRegistry::remember(const std::string& key, const Value& seed) {
  std::lock_guard lock(mutex_);
  memo_.emplace(key, seed);
}

std::optional<std::string> conformance_error(const SplitContainer& f, const MachineRegistry& reg,
                                             const std::string& machine) {
  auto m = reg.get(machine);
  std::vector<Value> start;
  for (const auto& s : m->states) start.push_back(m->seed(s.name));
  for (const auto& seed : reg.reachable(start)) {
    auto u = reg.step(seed);
    if (!f.base.shapes.contains(u.shape)) {
      return seed.render() + ": shape " + u.shape.render() + " is not in " + f.base.shapes.describe();
    }
    auto qd = f.q(u.shape);
    if (!qd.finite()) return seed.render() + ": shape " + u.shape.render() + " has infinitely many children";
    auto qs = qd.elements();
    if (qs.size() != u.children.size()) {
      return seed.render() + ": shape " + u.shape.render() + " needs " + std::to_string(qs.size()) +
             " children, has " + std::to_string(u.children.size());
    }
    for (std::size_t k = 0; k < qs.size(); ++k) {
      if (!(u.children[k].first == qs[k])) {
        return seed.render() + ": child " + std::to_string(k) + " is at " + u.children[k].first.render() +
               ", expected " + qs[k].render();
      }
    }
  }
  return std::nullopt;
}

}  // namespace contcalc

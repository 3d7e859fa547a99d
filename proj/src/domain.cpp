#include "contcalc/domain.hpp"

#include <algorithm>
#include <sstream>

namespace contcalc {

const char* to_string(Equality e) {
  switch (e) {
    case Equality::equal:
      return "equal";
    case Equality::distinct:
      return "distinct";
    case Equality::unknown:
      return "unknown-at-budget";
  }
  return "?";
}

Equality DomainImpl::equal(const Value& a, const Value& b, const Budget&) const {
  return a == b ? Equality::equal : Equality::distinct;
}

Enumeration DomainImpl::enumerate(const Budget& budget) const {
  Enumeration out;
  for (std::size_t r = 0; r <= budget.size; ++r) {
    bool truncated = false;
    std::size_t room = budget.count - out.values.size();
    auto lvl = level(r, plus_one(room), truncated);
    for (auto& v : lvl) {
      if (out.values.size() == budget.count) {
        out.exhausted = true;
        break;
      }
      out.values.push_back(std::move(v));
    }
    if (out.exhausted || truncated) {
      out.exhausted = true;
      break;
    }
  }
  out.bounded = has_beyond(budget.size);
  return out;
}

namespace {

std::vector<Value> upto(const DomainImpl& d, std::size_t rank, std::size_t cap, bool& truncated) {
  std::vector<Value> out;
  for (std::size_t r = 0; r <= rank; ++r) {
    auto lvl = d.level(r, cap - out.size(), truncated);
    out.insert(out.end(), lvl.begin(), lvl.end());
    if (truncated) break;
  }
  return out;
}

class FlatDomain : public DomainImpl {
 public:
  bool has_beyond(std::size_t) const override { return false; }
  bool finite() const override { return true; }
  std::vector<Value> level(std::size_t rank, std::size_t cap, bool& truncated) const override {
    if (rank != 0) return {};
    auto all = items();
    if (all.size() > cap) {
      all.resize(cap);
      truncated = true;
    }
    return all;
  }
  virtual std::vector<Value> items() const = 0;
};

class EmptyDomain final : public FlatDomain {
 public:
  DomainKind kind() const override { return DomainKind::empty; }
  bool contains(const Value&) const override { return false; }
  std::vector<Value> items() const override { return {}; }
  std::string describe() const override { return "Empty"; }
};

class UnitDomain final : public FlatDomain {
 public:
  DomainKind kind() const override { return DomainKind::unit; }
  bool contains(const Value& v) const override { return v.is(Value::Kind::unit); }
  std::vector<Value> items() const override { return {Value::unit()}; }
  std::string describe() const override { return "Unit"; }
};

class FinDomain final : public FlatDomain {
 public:
  explicit FinDomain(std::uint64_t n) : n_(n) {}
  DomainKind kind() const override { return DomainKind::fin; }
  bool contains(const Value& v) const override {
    return v.is(Value::Kind::fin) && v.bound() == n_;
  }
  std::vector<Value> items() const override {
    std::vector<Value> out;
    out.reserve(n_);
    for (std::uint64_t k = 0; k < n_; ++k) out.push_back(Value::fin(k, n_));
    return out;
  }
  std::string describe() const override { return "Fin(" + std::to_string(n_) + ")"; }

 private:
  std::uint64_t n_;
};

class AtomsDomain final : public FlatDomain {
 public:
  explicit AtomsDomain(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    auto sorted = symbols_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error("atom domain has duplicate symbols");
    }
  }
  DomainKind kind() const override { return DomainKind::atoms; }
  bool contains(const Value& v) const override {
    return v.is(Value::Kind::atom) &&
           std::find(symbols_.begin(), symbols_.end(), v.symbol()) != symbols_.end();
  }
  std::vector<Value> items() const override {
    std::vector<Value> out;
    for (const auto& s : symbols_) out.push_back(Value::atom(s));
    return out;
  }
  std::string describe() const override {
    std::string out = "Atoms{";
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (i) out += ",";
      out += symbols_[i];
    }
    return out + "}";
  }

 private:
  std::vector<std::string> symbols_;
};

class NatDomain final : public DomainImpl {
 public:
  DomainKind kind() const override { return DomainKind::nat; }
  bool contains(const Value& v) const override { return v.is(Value::Kind::nat); }
  std::vector<Value> level(std::size_t rank, std::size_t cap, bool& truncated) const override {
    if (cap == 0) {
      truncated = true;
      return {};
    }
    return {Value::nat(rank)};
  }
  bool has_beyond(std::size_t) const override { return true; }
  bool finite() const override { return false; }
  std::string describe() const override { return "Nat"; }
};

class SumDomain final : public DomainImpl {
 public:
  SumDomain(Domain l, Domain r) : l_(std::move(l)), r_(std::move(r)) {}
  DomainKind kind() const override { return DomainKind::sum; }
  bool contains(const Value& v) const override {
    if (v.is(Value::Kind::inl)) return l_.contains(v.inner());
    if (v.is(Value::Kind::inr)) return r_.contains(v.inner());
    return false;
  }
  std::vector<Value> level(std::size_t rank, std::size_t cap, bool& truncated) const override {
    std::vector<Value> out;
    for (auto& v : l_.impl().level(rank, cap, truncated)) out.push_back(Value::inl(std::move(v)));
    if (truncated) return out;
    for (auto& v : r_.impl().level(rank, cap - out.size(), truncated)) {
      out.push_back(Value::inr(std::move(v)));
    }
    return out;
  }
  bool has_beyond(std::size_t rank) const override {
    return l_.impl().has_beyond(rank) || r_.impl().has_beyond(rank);
  }
  Equality equal(const Value& a, const Value& b, const Budget& budget) const override {
    if (a.kind() != b.kind()) return Equality::distinct;
    return a.is(Value::Kind::inl) ? l_.equal(a.inner(), b.inner(), budget)
                                  : r_.equal(a.inner(), b.inner(), budget);
  }
  bool finite() const override { return l_.finite() && r_.finite(); }
  std::string describe() const override {
    return "Sum(" + l_.describe() + ", " + r_.describe() + ")";
  }

  Domain l_, r_;
};

class ProdDomain final : public DomainImpl {
 public:
  ProdDomain(Domain l, Domain r) : l_(std::move(l)), r_(std::move(r)) {}
  DomainKind kind() const override { return DomainKind::prod; }
  bool contains(const Value& v) const override {
    return v.is(Value::Kind::pair) && l_.contains(v.first()) && r_.contains(v.second());
  }
  std::vector<Value> level(std::size_t rank, std::size_t cap, bool& truncated) const override {
    // Pairs whose larger component rank is exactly `rank`, lexicographic in
    // the graded orders of the components.
    std::vector<Value> out;
    bool lt = false;
    bool rt = false;
    std::vector<std::pair<Value, std::size_t>> ls;
    for (std::size_t r = 0; r <= rank; ++r) {
      for (auto& v : l_.impl().level(r, plus_one(cap), lt)) ls.emplace_back(std::move(v), r);
    }
    std::vector<std::pair<Value, std::size_t>> rs;
    for (std::size_t r = 0; r <= rank; ++r) {
      for (auto& v : r_.impl().level(r, plus_one(cap), rt)) rs.emplace_back(std::move(v), r);
    }
    for (const auto& [a, ra] : ls) {
      for (const auto& [b, rb] : rs) {
        if (std::max(ra, rb) != rank) continue;
        if (out.size() == cap) {
          truncated = true;
          return out;
        }
        out.push_back(Value::pair(a, b));
      }
    }
    if (lt || rt) truncated = true;
    return out;
  }
  bool has_beyond(std::size_t rank) const override {
    auto nonempty = [](const Domain& d) {
      bool t = false;
      if (!upto(d.impl(), 0, 1, t).empty()) return true;
      return d.impl().has_beyond(0);
    };
    return (l_.impl().has_beyond(rank) && nonempty(r_)) ||
           (r_.impl().has_beyond(rank) && nonempty(l_));
  }
  Equality equal(const Value& a, const Value& b, const Budget& budget) const override {
    auto x = l_.equal(a.first(), b.first(), budget);
    if (x == Equality::distinct) return x;
    auto y = r_.equal(a.second(), b.second(), budget);
    if (y == Equality::distinct) return y;
    return (x == Equality::equal && y == Equality::equal) ? Equality::equal : Equality::unknown;
  }
  bool finite() const override { return l_.finite() && r_.finite(); }
  std::string describe() const override {
    return "Prod(" + l_.describe() + ", " + r_.describe() + ")";
  }

  Domain l_, r_;
};

}  // namespace

Domain::Domain() : Domain(empty()) {}

Domain::Domain(std::shared_ptr<const DomainImpl> impl) : impl_(std::move(impl)) {}

Domain Domain::empty() {
  static const auto impl = std::make_shared<const EmptyDomain>();
  return Domain(impl);
}

Domain Domain::unit() {
  static const auto impl = std::make_shared<const UnitDomain>();
  return Domain(impl);
}

Domain Domain::fin(std::uint64_t n) { return Domain(std::make_shared<const FinDomain>(n)); }

Domain Domain::nat() {
  static const auto impl = std::make_shared<const NatDomain>();
  return Domain(impl);
}

Domain Domain::sum(Domain left, Domain right) {
  return Domain(std::make_shared<const SumDomain>(std::move(left), std::move(right)));
}

Domain Domain::prod(Domain left, Domain right) {
  return Domain(std::make_shared<const ProdDomain>(std::move(left), std::move(right)));
}

Domain Domain::atoms(std::vector<std::string> symbols) {
  return Domain(std::make_shared<const AtomsDomain>(std::move(symbols)));
}

std::vector<Value> Domain::elements(std::size_t cap) const {
  if (!finite()) throw Error("domain " + describe() + " is not finite");
  std::vector<Value> out;
  for (std::size_t r = 0;; ++r) {
    bool truncated = false;
    auto lvl = impl_->level(r, plus_one(cap) - out.size(), truncated);
    out.insert(out.end(), lvl.begin(), lvl.end());
    if (truncated || out.size() > cap) throw Error("domain " + describe() + " too large to list");
    if (!impl_->has_beyond(r)) break;
  }
  return out;
}

const Domain& left_of(const Domain& d) {
  if (auto* s = dynamic_cast<const SumDomain*>(&d.impl())) return s->l_;
  if (auto* p = dynamic_cast<const ProdDomain*>(&d.impl())) return p->l_;
  throw Error("left_of: " + d.describe() + " is not a sum or product");
}

const Domain& right_of(const Domain& d) {
  if (auto* s = dynamic_cast<const SumDomain*>(&d.impl())) return s->r_;
  if (auto* p = dynamic_cast<const ProdDomain*>(&d.impl())) return p->r_;
  throw Error("right_of: " + d.describe() + " is not a sum or product");
}

}  // namespace contcalc

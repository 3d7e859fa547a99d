#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace contcalc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the textual readers; carries a 1-based line and column.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class Value;

struct Branch;

/// Immutable term shared by shapes, positions, payloads, W-trees, machine
/// seeds and position paths. Copies share structure.
///
/// Canonical rendering:
///   unit | inl v | inr v | (v , w) | nat:k | fin:k/n | atom:x
///   sup s [q0 -> t0, q1 -> t1] | seed:machine/state
///   below q1 . below q2 . here(i, p)
/// Arguments of inl/inr/sup/below are parenthesised when they are themselves
/// inl/inr/sup/path terms.
class Value {
 public:
  enum class Kind { unit, inl, inr, pair, nat, fin, atom, sup, seed, path };

  Value();  // unit

  static Value unit();
  static Value inl(Value v);
  static Value inr(Value v);
  static Value pair(Value first, Value second);
  static Value nat(std::uint64_t k);
  static Value fin(std::uint64_t k, std::uint64_t bound);
  static Value atom(std::string symbol);
  static Value sup(Value shape, std::vector<Branch> children);
  static Value seed(std::string machine, std::string state);
  static Value path(std::vector<Value> steps, std::string index, Value final_position);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }

  /// Argument of inl/inr.
  const Value& inner() const;
  const Value& first() const;
  const Value& second() const;
  /// nat:k and fin:k/n both answer k.
  std::uint64_t number() const;
  std::uint64_t bound() const;
  const std::string& symbol() const;

  const Value& shape() const;
  const std::vector<Branch>& children() const;
  /// Subtree of a sup node at a position; nullptr when absent.
  const Value* child(const Value& position) const;

  const std::string& machine() const;
  const std::string& state() const;

  const std::vector<Value>& steps() const;
  const std::string& index_name() const;
  const Value& final_position() const;
  /// Path with the first step removed.
  Value path_tail() const;
  /// Path with `step` prepended.
  Value path_below(const Value& step) const;

  std::string render() const;

  friend bool operator==(const Value& a, const Value& b);
  friend std::strong_ordering operator<=>(const Value& a, const Value& b);

 private:
  struct Node;
  explicit Value(std::shared_ptr<const Node> node);
  const Node& node() const { return *node_; }

  std::shared_ptr<const Node> node_;
};

struct Branch {
  Value position;
  Value subtree;

  friend bool operator==(const Branch&, const Branch&) = default;
};

/// Here-path with no below steps.
Value here(std::string index, Value position);

/// Reads the canonical rendering back. Throws ParseError.
Value parse_value(std::string_view text);

std::ostream& operator<<(std::ostream& os, const Value& v);

}  // namespace contcalc

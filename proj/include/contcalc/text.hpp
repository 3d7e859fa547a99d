#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "contcalc/value.hpp"

namespace contcalc {

/// Token stream shared by the value, element and machine readers.
/// Punctuation `( ) [ ] { } , ;` is split out; everything else between
/// whitespace is a word (so `->`, `=>`, `.` and `nat:3` are words).
class TokenStream {
 public:
  struct Token {
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;
  };

  explicit TokenStream(std::string_view text, std::size_t first_line = 1);

  bool at_end() const { return pos_ >= tokens_.size(); }
  const Token& peek() const;
  bool peek_is(std::string_view text) const;
  Token next();
  void expect(std::string_view text);
  bool accept(std::string_view text);

  [[noreturn]] void fail(const std::string& message) const;

  /// Reads one value in canonical syntax.
  Value read_value();

 private:
  Value read_operand();
  Value read_word_value(const Token& tok);
  Value read_path_from(const Token& first);

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t end_line_ = 1;
  std::size_t end_column_ = 1;
};

}  // namespace contcalc

#ifndef NEGDETECT_UNICODE_H_
#define NEGDETECT_UNICODE_H_

// UTF-8 helpers and a thin ICU regex wrapper. All public offsets in this
// project are code point offsets; byte offsets only appear here.

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <unicode/uversion.h>

U_NAMESPACE_BEGIN
class RegexPattern;
U_NAMESPACE_END

namespace negdetect::unicode {

std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view text);
std::string encode(char32_t c);

std::size_t length(std::string_view utf8);

// Per-code-point simple lowercase mapping. Never changes the number of code
// points, so spans computed on the original text stay valid.
std::string to_lower(std::string_view utf8);
char32_t to_lower(char32_t c);

bool is_space(char32_t c);

// Lowercases and collapses internal whitespace runs to a single space,
// trimming both ends.
std::string normalize_phrase(std::string_view utf8);

// Maps between byte offsets and code point offsets of one UTF-8 string.
class OffsetMap {
 public:
  explicit OffsetMap(std::string_view utf8);

  std::size_t size() const { return byte_of_.size() - 1; }
  std::size_t byte_at(std::size_t cp) const { return byte_of_[cp]; }
  // `byte` must lie on a code point boundary.
  std::size_t cp_at(std::size_t byte) const;

 private:
  std::vector<std::size_t> byte_of_;
};

// Substring by code point range [begin, end).
std::string slice(std::string_view utf8, std::size_t begin, std::size_t end);

// Compiled ICU regular expression. Immutable and safe to share between
// threads; every match call creates its own matcher.
class Regex {
 public:
  Regex() = default;
  // Throws ConfigError with the ICU message when the pattern does not compile.
  explicit Regex(std::string_view pattern, bool case_insensitive = false);

  const std::string& pattern() const { return source_; }
  bool valid() const { return compiled_ != nullptr; }

  bool full_match(std::string_view utf8) const;
  // Non-overlapping matches, as byte ranges [first, second).
  std::vector<std::pair<std::size_t, std::size_t>> find_all(
      std::string_view utf8) const;

  // Escapes a literal string so that it matches only itself.
  static std::string quote(std::string_view literal);

 private:
  std::string source_;
  std::shared_ptr<const icu::RegexPattern> compiled_;
};

}  // namespace negdetect::unicode

#endif  // NEGDETECT_UNICODE_H_

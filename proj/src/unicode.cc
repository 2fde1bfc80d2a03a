#include "negdetect/unicode.h"

#include <unicode/regex.h>
#include <unicode/uchar.h>
#include <unicode/utext.h>
#include <unicode/utf8.h>

#include <algorithm>

#include "negdetect/error.h"

namespace negdetect::unicode {

namespace {

// Invalid sequences decode as U+FFFD and still advance by at least one byte.
char32_t next_code_point(std::string_view s, std::size_t& i) {
  UChar32 c;
  int32_t pos = static_cast<int32_t>(i);
  U8_NEXT(s.data(), pos, static_cast<int32_t>(s.size()), c);
  i = static_cast<std::size_t>(pos);
  return c < 0 ? U'\uFFFD' : static_cast<char32_t>(c);
}

struct UTextCloser {
  void operator()(UText* t) const { utext_close(t); }
};
using UTextPtr = std::unique_ptr<UText, UTextCloser>;

UTextPtr open_utf8(std::string_view s) {
  UErrorCode status = U_ZERO_ERROR;
  UText* t = utext_openUTF8(nullptr, s.data(), static_cast<int64_t>(s.size()),
                            &status);
  if (U_FAILURE(status)) throw Error("cannot open UTF-8 text for matching");
  return UTextPtr(t);
}

}  // namespace

std::u32string decode(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  for (std::size_t i = 0; i < utf8.size();) out.push_back(next_code_point(utf8, i));
  return out;
}

std::string encode(char32_t c) {
  char buf[U8_MAX_LENGTH];
  int32_t len = 0;
  UBool error = false;
  U8_APPEND(reinterpret_cast<uint8_t*>(buf), len, U8_MAX_LENGTH,
            static_cast<UChar32>(c), error);
  if (error) return "\xEF\xBF\xBD";
  return std::string(buf, static_cast<std::size_t>(len));
}

std::string encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) out += encode(c);
  return out;
}

std::size_t length(std::string_view utf8) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < utf8.size(); ++n) next_code_point(utf8, i);
  return n;
}

char32_t to_lower(char32_t c) {
  return static_cast<char32_t>(u_tolower(static_cast<UChar32>(c)));
}

std::string to_lower(std::string_view utf8) {
  std::string out;
  out.reserve(utf8.size());
  for (std::size_t i = 0; i < utf8.size();) out += encode(to_lower(next_code_point(utf8, i)));
  return out;
}

bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

std::string normalize_phrase(std::string_view utf8) {
  std::u32string out;
  bool pending_space = false;
  for (char32_t c : decode(utf8)) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(U' ');
    pending_space = false;
    out.push_back(to_lower(c));
  }
  return encode(out);
}

OffsetMap::OffsetMap(std::string_view utf8) {
  byte_of_.reserve(utf8.size() + 1);
  for (std::size_t i = 0; i < utf8.size();) {
    byte_of_.push_back(i);
    next_code_point(utf8, i);
  }
  byte_of_.push_back(utf8.size());
}

std::size_t OffsetMap::cp_at(std::size_t byte) const {
  auto it = std::lower_bound(byte_of_.begin(), byte_of_.end(), byte);
  return static_cast<std::size_t>(it - byte_of_.begin());
}

std::string slice(std::string_view utf8, std::size_t begin, std::size_t end) {
  std::size_t i = 0, cp = 0, b = utf8.size(), e = utf8.size();
  while (i < utf8.size()) {
    if (cp == begin) b = i;
    if (cp == end) {
      e = i;
      break;
    }
    next_code_point(utf8, i);
    ++cp;
  }
  if (b > e) return {};
  return std::string(utf8.substr(b, e - b));
}

Regex::Regex(std::string_view pattern, bool case_insensitive)
    : source_(pattern) {
  UErrorCode status = U_ZERO_ERROR;
  UParseError perr;
  uint32_t flags = case_insensitive ? UREGEX_CASE_INSENSITIVE : 0;
  icu::UnicodeString upattern = icu::UnicodeString::fromUTF8(
      icu::StringPiece(pattern.data(), static_cast<int32_t>(pattern.size())));
  std::unique_ptr<icu::RegexPattern> p(
      icu::RegexPattern::compile(upattern, flags, perr, status));
  if (U_FAILURE(status)) {
    throw ConfigError("invalid regular expression '" + source_ +
                      "': " + u_errorName(status));
  }
  compiled_ = std::move(p);
}

bool Regex::full_match(std::string_view utf8) const {
  if (!compiled_) return false;
  UErrorCode status = U_ZERO_ERROR;
  std::unique_ptr<icu::RegexMatcher> m(compiled_->matcher(status));
  UTextPtr text = open_utf8(utf8);
  m->reset(text.get());
  bool ok = m->matches(status);
  return U_SUCCESS(status) && ok;
}

std::vector<std::pair<std::size_t, std::size_t>> Regex::find_all(
    std::string_view utf8) const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (!compiled_) return out;
  UErrorCode status = U_ZERO_ERROR;
  std::unique_ptr<icu::RegexMatcher> m(compiled_->matcher(status));
  UTextPtr text = open_utf8(utf8);
  m->reset(text.get());
  while (m->find(status) && U_SUCCESS(status)) {
    auto b = static_cast<std::size_t>(m->start64(status));
    auto e = static_cast<std::size_t>(m->end64(status));
    out.emplace_back(b, e);
  }
  return out;
}

std::string Regex::quote(std::string_view literal) {
  static constexpr std::string_view kMeta = "\\^$.|?*+()[]{}/";
  std::string out;
  for (char c : literal) {
    if (kMeta.find(c) != std::string_view::npos) out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace negdetect::unicode

#ifndef NEGDETECT_TEXTMODEL_H_
#define NEGDETECT_TEXTMODEL_H_

// Span-based document model shared by all stages. Offsets count Unicode
// code points of the original document text.

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace negdetect {

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return begin == end; }
  bool contains(const Span& o) const { return begin <= o.begin && o.end <= end; }

  friend auto operator<=>(const Span&, const Span&) = default;
};

bool span_overlaps(const Span& a, const Span& b);

struct Token {
  Span span;
  std::string text;
  std::string lowercased;
  bool is_stopword = false;
  std::vector<std::string> compound_parts;

  friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
  Span span;
  std::string text;  // document text at `span`
  std::vector<Token> tokens;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

enum class Assertion { kAffirmed, kNegated };

enum class Source {
  kNegexPre,
  kNegexPost,
  kDepPatternNeg,
  kDepPatternPosCorrection,
  kDefault,
};

std::string_view to_string(Assertion a);
std::string_view to_string(Source s);

struct ConceptAnnotation {
  Span span;
  std::string category;
  std::string matched_text;
  std::string dictionary_entry;
  std::size_t sentence = 0;  // index into Document::sentences

  friend bool operator==(const ConceptAnnotation&,
                         const ConceptAnnotation&) = default;
};

struct NegationAnnotation {
  std::size_t concept_index = 0;
  Assertion assertion = Assertion::kAffirmed;
  Source source = Source::kDefault;
  std::optional<Span> trigger_span;
  std::optional<std::string> trigger_text;
  // Trigger id or pattern source that produced this annotation.
  std::string rule;

  static NegationAnnotation affirmed(std::size_t concept_index) {
    NegationAnnotation a;
    a.concept_index = concept_index;
    return a;
  }

  friend bool operator==(const NegationAnnotation&,
                         const NegationAnnotation&) = default;
};

struct Document {
  std::string text;
  std::vector<Sentence> sentences;
  std::vector<ConceptAnnotation> concepts;
  // One entry per concept, same order, once the pipeline has run.
  std::vector<NegationAnnotation> negations;
};

// Document text covered by `span`.
std::string span_text(std::string_view text, const Span& span);

// Indices of the first and last token of `sentence` overlapping `span`.
std::optional<std::pair<std::size_t, std::size_t>> token_range(
    const Sentence& sentence, const Span& span);

nlohmann::json to_json(const Span& span);
Span span_from_json(const nlohmann::json& j);

// {text, sentences:[{span, tokens}], concepts:[{span, category, assertion,
// trigger}]}
nlohmann::json to_json(const Document& doc);

}  // namespace negdetect

#endif  // NEGDETECT_TEXTMODEL_H_

#ifndef NEGDETECT_NEGEX_H_
#define NEGDETECT_NEGEX_H_

// NegEx-style trigger engine: token-aligned regex triggers, pseudo-negation
// blocking, windowed scopes bounded by sentence edges and other triggers,
// and the pre/post interference check.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "negdetect/textmodel.h"
#include "negdetect/unicode.h"

namespace negdetect {

enum class TriggerType { kPre, kPost, kPseudo, kConj };

inline constexpr std::array<TriggerType, 4> kTriggerTypes = {
    TriggerType::kPre, TriggerType::kPost, TriggerType::kConj, TriggerType::kPseudo};

// "PRE", "POST", "PSEU", "CONJ".
std::string_view to_string(TriggerType t);
std::optional<TriggerType> parse_trigger_type(std::string_view tag);

struct Trigger {
  std::string id;
  std::string pattern;
  TriggerType type = TriggerType::kPre;
  unicode::Regex regex;  // case-insensitive, full match over a token window
};

struct TriggerSet {
  std::string name;
  std::vector<Trigger> triggers;
  // Longest token window a trigger is tried against.
  std::size_t max_tokens = 8;

  std::size_t count(TriggerType t) const;
  std::size_t size() const { return triggers.size(); }
};

// Lines "regex TAB TYPE [TAB id]"; "#" comment lines and blank lines are
// skipped; LF or CRLF. Without an explicit id the pattern text is the id.
// Throws ConfigError naming the line for unknown types, bad regexes,
// missing columns and duplicate ids.
TriggerSet parse_trigger_file(std::string_view content, std::string name = {});

struct TriggerMatch {
  const Trigger* trigger = nullptr;
  Span span;
  std::size_t first = 0;  // token indices, inclusive
  std::size_t last = 0;

  TriggerType type() const { return trigger->type; }
};

// Maximal token-aligned matches of every trigger, ordered by first token.
// A pseudo-negation suppresses every other match it overlaps (this includes
// a PRE match starting at the same token); of two overlapping matches of
// the same type the longer survives.
std::vector<TriggerMatch> find_trigger_matches(const Sentence& sentence,
                                               const TriggerSet& set);

struct NegexConfig {
  static constexpr std::size_t kMaxWindow = 100;

  // Scope length in tokens; nullopt = unlimited.
  std::optional<std::size_t> window;
  // Extra post-check for a PRE trigger that is a prefix of a POST trigger.
  bool interference_fix = true;

  static NegexConfig unlimited() { return {}; }
  static NegexConfig with_window(std::size_t w);  // throws ConfigError
};

// Parses "inf"/"unlimited"/"∞" or an integer in [1, 100].
NegexConfig parse_window(std::string_view text);
std::string window_label(const NegexConfig& cfg);

// One annotation per concept, same order; concept_index is the position in
// `concepts` plus `concept_offset`.
std::vector<NegationAnnotation> apply_negex(const Sentence& sentence,
                                            std::span<const ConceptAnnotation> concepts,
                                            const TriggerSet& set,
                                            const NegexConfig& cfg,
                                            std::size_t concept_offset = 0);

// Runs apply_negex per sentence. Concepts must be grouped by sentence in
// document order, as preprocess() produces them.
std::vector<NegationAnnotation> classify_document(
    const std::vector<Sentence>& sentences,
    const std::vector<ConceptAnnotation>& concepts, const TriggerSet& set,
    const NegexConfig& cfg);

}  // namespace negdetect

#endif  // NEGDETECT_NEGEX_H_

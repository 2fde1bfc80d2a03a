#ifndef NEGDETECT_PREPROCESS_H_
#define NEGDETECT_PREPROCESS_H_

// Leading block of the pipeline: sentence segmentation, tokenization,
// stopword marking, compound splitting and dictionary concept annotation.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "negdetect/textmodel.h"
#include "negdetect/unicode.h"

namespace negdetect {

// Regex patterns for sentence and token splitting plus the abbreviation list
// that protects tokens like "V.a." from both. Patterns are compiled on
// construction; a bad pattern throws ConfigError there, never later.
class SegmenterConfig {
 public:
  SegmenterConfig(std::vector<std::string> sentence_split_patterns,
                  std::vector<std::string> token_split_patterns,
                  std::vector<std::string> abbreviations = {});

  static SegmenterConfig defaults();

  // Key/value file: "sentence_split = <regex>", "token_split = <regex>",
  // "abbreviation = <text>". Keys may repeat; "#" starts a comment line. A
  // file without sentence_split or token_split keys keeps the defaults for
  // that list.
  static SegmenterConfig parse(std::string_view content,
                               std::vector<std::string> abbreviations = {});

  const std::vector<std::string>& sentence_split_patterns() const { return sentence_src_; }
  const std::vector<std::string>& token_split_patterns() const { return token_src_; }
  const std::set<std::string>& abbreviations() const { return abbreviations_; }
  bool is_abbreviation(std::string_view word) const;

  const std::vector<unicode::Regex>& sentence_regexes() const { return sentence_re_; }
  const std::vector<unicode::Regex>& token_regexes() const { return token_re_; }

 private:
  std::vector<std::string> sentence_src_;
  std::vector<std::string> token_src_;
  std::set<std::string> abbreviations_;  // lowercased
  std::vector<unicode::Regex> sentence_re_;
  std::vector<unicode::Regex> token_re_;
};

// One entry per line, "#" comments, blank lines ignored.
std::vector<std::string> parse_word_list(std::string_view content);

class StopwordList {
 public:
  explicit StopwordList(const std::vector<std::string>& words);
  static StopwordList parse(std::string_view content);

  bool contains(std::string_view word) const;
  const std::set<std::string>& entries() const { return entries_; }

 private:
  std::set<std::string> entries_;
};

class CompoundLexicon {
 public:
  static const std::vector<std::string>& default_linking_morphemes();

  explicit CompoundLexicon(const std::vector<std::string>& stems,
                           std::vector<std::string> linking_morphemes =
                               default_linking_morphemes());
  static CompoundLexicon parse(std::string_view content);

  bool contains(std::string_view lowercase_stem) const;
  const std::set<std::string>& entries() const { return entries_; }
  const std::vector<std::string>& linking_morphemes() const { return linking_; }

 private:
  std::set<std::string> entries_;
  std::vector<std::string> linking_;
};

// Phrase dictionary for the concept annotator. Keys are the lowercased token
// sequence of the phrase, so matching is independent of spacing around
// punctuation.
class ConceptDictionary {
 public:
  struct Entry {
    std::string phrase;  // lowercase, whitespace-collapsed
    std::string category;
  };

  ConceptDictionary() = default;

  void insert(std::string_view phrase, std::string category,
              const SegmenterConfig& seg);

  // "phrase TAB category" per line; category defaults to "med_concept".
  static ConceptDictionary parse(std::string_view content,
                                 const SegmenterConfig& seg);

  const Entry* find(const std::string& token_key) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t max_phrase_tokens() const { return max_tokens_; }
  const std::map<std::string, Entry>& entries() const { return entries_; }

 private:
  std::map<std::string, Entry> entries_;
  std::size_t max_tokens_ = 0;
};

inline constexpr std::string_view kDefaultCategory = "med_concept";

// Sentences carry span and text; tokens are filled by tokenize().
std::vector<Sentence> segment_sentences(std::string_view text,
                                        const SegmenterConfig& cfg);

// Token spans are offset by `base` (the sentence's begin in the document).
std::vector<Token> tokenize(std::string_view sentence_text,
                            const SegmenterConfig& cfg, std::size_t base = 0);

void mark_stopwords(std::vector<Token>& tokens, const StopwordList& stops);

std::vector<std::string> split_compound(std::string_view word,
                                        const CompoundLexicon& lex);

// Lowercased token texts joined by single spaces.
std::string token_key(const std::vector<Token>& tokens, std::size_t first,
                      std::size_t count);

// Greedy longest match over token n-grams. A token without a phrase match
// falls back to its compound parts (head part first); a hit then covers the
// whole token.
std::vector<ConceptAnnotation> annotate_concepts(const Sentence& sentence,
                                                 const ConceptDictionary& dict,
                                                 const CompoundLexicon& lex,
                                                 std::size_t sentence_index = 0);

struct PreprocessResources {
  SegmenterConfig segmenter = SegmenterConfig::defaults();
  StopwordList stopwords{std::vector<std::string>{"und"}};
  CompoundLexicon compounds{std::vector<std::string>{}};
  ConceptDictionary concepts;
};

// Runs the full leading block; the returned document has no negations yet.
Document preprocess(std::string text, const PreprocessResources& res);
// Same, with a dictionary other than res.concepts.
Document preprocess(std::string text, const PreprocessResources& res,
                    const ConceptDictionary& dict);

}  // namespace negdetect

#endif  // NEGDETECT_PREPROCESS_H_

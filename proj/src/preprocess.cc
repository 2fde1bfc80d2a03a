#include "negdetect/preprocess.h"

#include <algorithm>
#include <limits>
#include <optional>

#include "negdetect/error.h"

namespace negdetect {

namespace {

std::string_view trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_lines(std::string_view content) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= content.size()) {
    std::size_t nl = content.find('\n', start);
    std::string_view line = content.substr(
        start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

std::vector<unicode::Regex> compile_all(const std::vector<std::string>& src,
                                        std::string_view what) {
  std::vector<unicode::Regex> out;
  out.reserve(src.size());
  for (const std::string& p : src) {
    try {
      out.emplace_back(p);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(what) + ": " + e.what());
    }
  }
  return out;
}

const std::vector<std::string>& default_sentence_patterns() {
  static const std::vector<std::string> p = {
      R"([.!?](?=\s|$))",
      R"(\n[ \t\r]*\n)",
  };
  return p;
}

const std::vector<std::string>& default_token_patterns() {
  static const std::vector<std::string> p = {
      R"([,;:!?()\[\]{}"„“”‚‘'«»/+=<>])",
      R"(\.$)",
  };
  return p;
}

}  // namespace

std::vector<std::string> parse_word_list(std::string_view content) {
  std::vector<std::string> out;
  for (std::string_view line : split_lines(content)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    out.emplace_back(line);
  }
  return out;
}

// --- SegmenterConfig --------------------------------------------------------

SegmenterConfig::SegmenterConfig(std::vector<std::string> sentence_split_patterns,
                                 std::vector<std::string> token_split_patterns,
                                 std::vector<std::string> abbreviations)
    : sentence_src_(std::move(sentence_split_patterns)),
      token_src_(std::move(token_split_patterns)) {
  for (const std::string& a : abbreviations) abbreviations_.insert(unicode::to_lower(a));
  sentence_re_ = compile_all(sentence_src_, "sentence_split");
  token_re_ = compile_all(token_src_, "token_split");
}

SegmenterConfig SegmenterConfig::defaults() {
  return SegmenterConfig(default_sentence_patterns(), default_token_patterns());
}

SegmenterConfig SegmenterConfig::parse(std::string_view content,
                                       std::vector<std::string> abbreviations) {
  std::vector<std::string> sentence, token;
  std::size_t lineno = 0;
  for (std::string_view raw : split_lines(content)) {
    ++lineno;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("segmenter config: expected 'key = value' at line " +
                            std::to_string(lineno), lineno);
    }
    std::string_view key = trim(line.substr(0, eq));
    std::string value(trim(line.substr(eq + 1)));
    if (key == "sentence_split") {
      sentence.push_back(std::move(value));
    } else if (key == "token_split") {
      token.push_back(std::move(value));
    } else if (key == "abbreviation") {
      abbreviations.push_back(std::move(value));
    } else {
      throw ConfigError("segmenter config: unknown key '" + std::string(key) +
                            "' at line " + std::to_string(lineno), lineno);
    }
  }
  if (sentence.empty()) sentence = default_sentence_patterns();
  if (token.empty()) token = default_token_patterns();
  return SegmenterConfig(std::move(sentence), std::move(token),
                         std::move(abbreviations));
}

bool SegmenterConfig::is_abbreviation(std::string_view word) const {
  return !abbreviations_.empty() && abbreviations_.count(unicode::to_lower(word)) > 0;
}

// --- word lists ----------------------------------------------------------------

StopwordList::StopwordList(const std::vector<std::string>& words) {
  for (const std::string& w : words) entries_.insert(unicode::to_lower(w));
  if (entries_.empty()) throw ConfigError("stopword list is empty");
}

StopwordList StopwordList::parse(std::string_view content) {
  return StopwordList(parse_word_list(content));
}

bool StopwordList::contains(std::string_view word) const {
  return entries_.count(unicode::to_lower(word)) > 0;
}

const std::vector<std::string>& CompoundLexicon::default_linking_morphemes() {
  static const std::vector<std::string> m = {"s", "es", "n", "en", "e", "er", "nen"};
  return m;
}

CompoundLexicon::CompoundLexicon(const std::vector<std::string>& stems,
                                 std::vector<std::string> linking_morphemes)
    : linking_(std::move(linking_morphemes)) {
  for (const std::string& s : stems) {
    if (unicode::length(s) < 3) {
      throw ConfigError("compound lexicon entry '" + s + "' is shorter than 3");
    }
    entries_.insert(unicode::to_lower(s));
  }
}

CompoundLexicon CompoundLexicon::parse(std::string_view content) {
  std::vector<std::string> stems;
  std::size_t lineno = 0;
  for (std::string_view raw : split_lines(content)) {
    ++lineno;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (unicode::length(line) < 3) {
      throw ConfigError("compound lexicon entry shorter than 3 at line " +
                            std::to_string(lineno), lineno);
    }
    stems.emplace_back(line);
  }
  return CompoundLexicon(stems);
}

bool CompoundLexicon::contains(std::string_view lowercase_stem) const {
  return entries_.count(std::string(lowercase_stem)) > 0;
}

// --- ConceptDictionary ---------------------------------------------------------

void ConceptDictionary::insert(std::string_view phrase, std::string category,
                               const SegmenterConfig& seg) {
  std::string normalized = unicode::normalize_phrase(phrase);
  if (normalized.empty()) throw ConfigError("empty concept phrase");
  std::vector<Token> tokens = tokenize(normalized, seg);
  std::string key = token_key(tokens, 0, tokens.size());
  if (category.empty()) category = std::string(kDefaultCategory);
  entries_.insert_or_assign(key, Entry{std::move(normalized), std::move(category)});
  max_tokens_ = std::max(max_tokens_, tokens.size());
}

ConceptDictionary ConceptDictionary::parse(std::string_view content,
                                           const SegmenterConfig& seg) {
  ConceptDictionary dict;
  std::size_t lineno = 0;
  for (std::string_view raw : split_lines(content)) {
    ++lineno;
    if (trim(raw).empty() || trim(raw).front() == '#') continue;
    std::size_t tab = raw.find('\t');
    std::string_view phrase = trim(raw.substr(0, tab));
    std::string_view category =
        tab == std::string_view::npos ? kDefaultCategory : trim(raw.substr(tab + 1));
    if (phrase.empty()) {
      throw ConfigError("empty concept phrase at line " + std::to_string(lineno), lineno);
    }
    dict.insert(phrase, std::string(category), seg);
  }
  return dict;
}

const ConceptDictionary::Entry* ConceptDictionary::find(const std::string& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

// --- segmentation and tokenization -------------------------------------------

namespace {

// Whitespace-delimited word of `text` that contains byte `pos`.
std::string_view word_around(std::string_view text, std::size_t pos) {
  auto is_ws = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  std::size_t b = pos;
  while (b > 0 && !is_ws(text[b - 1])) --b;
  std::size_t e = pos;
  while (e < text.size() && !is_ws(text[e])) ++e;
  return text.substr(b, e - b);
}

}  // namespace

std::vector<Sentence> segment_sentences(std::string_view text,
                                        const SegmenterConfig& cfg) {
  std::vector<std::size_t> cuts;  // byte offsets where a sentence ends
  for (const unicode::Regex& re : cfg.sentence_regexes()) {
    for (auto [b, e] : re.find_all(text)) {
      if (b < e && cfg.is_abbreviation(word_around(text, b))) continue;
      cuts.push_back(e);
    }
  }
  cuts.push_back(text.size());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  unicode::OffsetMap offsets(text);
  std::vector<Sentence> out;
  std::size_t start = 0;
  for (std::size_t cut : cuts) {
    std::size_t b = offsets.cp_at(start);
    std::u32string piece = unicode::decode(text.substr(start, cut - start));
    std::size_t lead = 0, trail = piece.size();
    while (lead < trail && unicode::is_space(piece[lead])) ++lead;
    while (trail > lead && unicode::is_space(piece[trail - 1])) --trail;
    if (lead < trail) {
      Sentence s;
      s.span = Span{b + lead, b + trail};
      s.text = unicode::encode(std::u32string_view(piece).substr(lead, trail - lead));
      out.push_back(std::move(s));
    }
    start = cut;
  }
  return out;
}

std::vector<Token> tokenize(std::string_view sentence_text,
                            const SegmenterConfig& cfg, std::size_t base) {
  std::vector<Token> tokens;
  std::u32string chars = unicode::decode(sentence_text);

  auto emit = [&](std::size_t b, std::size_t e) {
    if (b >= e) return;
    Token t;
    t.span = Span{base + b, base + e};
    t.text = unicode::encode(std::u32string_view(chars).substr(b, e - b));
    t.lowercased = unicode::to_lower(t.text);
    t.compound_parts = {t.text};
    tokens.push_back(std::move(t));
  };

  std::size_t i = 0;
  while (i < chars.size()) {
    if (unicode::is_space(chars[i])) {
      ++i;
      continue;
    }
    std::size_t chunk_begin = i;
    while (i < chars.size() && !unicode::is_space(chars[i])) ++i;
    std::string chunk = unicode::encode(
        std::u32string_view(chars).substr(chunk_begin, i - chunk_begin));
    if (cfg.is_abbreviation(chunk)) {
      emit(chunk_begin, i);
      continue;
    }

    // Split points inside the chunk, as code point ranges relative to it.
    unicode::OffsetMap offsets(chunk);
    std::vector<std::pair<std::size_t, std::size_t>> cuts;
    for (const unicode::Regex& re : cfg.token_regexes()) {
      for (auto [b, e] : re.find_all(chunk)) {
        if (b < e) cuts.emplace_back(offsets.cp_at(b), offsets.cp_at(e));
      }
    }
    std::sort(cuts.begin(), cuts.end());
    std::size_t pos = 0;
    for (auto [b, e] : cuts) {
      if (b < pos) continue;  // overlaps an earlier split
      emit(chunk_begin + pos, chunk_begin + b);
      emit(chunk_begin + b, chunk_begin + e);
      pos = e;
    }
    emit(chunk_begin + pos, i);
  }
  return tokens;
}

void mark_stopwords(std::vector<Token>& tokens, const StopwordList& stops) {
  for (Token& t : tokens) t.is_stopword = stops.contains(t.lowercased);
}

// --- compound splitting --------------------------------------------------------

std::vector<std::string> split_compound(std::string_view word,
                                        const CompoundLexicon& lex) {
  std::u32string original = unicode::decode(word);
  std::u32string lower;
  lower.reserve(original.size());
  for (char32_t c : original) lower.push_back(unicode::to_lower(c));
  const std::size_t n = lower.size();
  if (n < 6 || lex.entries().empty()) return {std::string(word)};

  auto in_lex = [&](std::size_t b, std::size_t e) {
    return lex.contains(unicode::encode(std::u32string_view(lower).substr(b, e - b)));
  };
  // A non-final part is a lexicon entry optionally followed by a linking
  // morpheme.
  auto is_inner_part = [&](std::size_t b, std::size_t e) {
    if (in_lex(b, e)) return true;
    for (const std::string& m : lex.linking_morphemes()) {
      std::size_t ml = unicode::length(m);
      if (e - b <= ml) continue;
      if (unicode::encode(std::u32string_view(lower).substr(e - ml, ml)) == m &&
          in_lex(b, e - ml)) {
        return true;
      }
    }
    return false;
  };

  // best[e]: end offsets of the parts of the preferred split of lower[0, e)
  // into inner parts. Preferred = fewest parts, then lexicographically
  // largest end offsets (longer parts first).
  std::vector<std::optional<std::vector<std::size_t>>> best(n + 1);
  best[0].emplace();
  for (std::size_t e = 1; e <= n; ++e) {
    for (std::size_t b = 0; b < e; ++b) {
      if (!best[b] || !is_inner_part(b, e)) continue;
      std::vector<std::size_t> cand = *best[b];
      cand.push_back(e);
      if (!best[e] || cand.size() < best[e]->size() ||
          (cand.size() == best[e]->size() && cand > *best[e])) {
        best[e] = std::move(cand);
      }
    }
  }

  // The last part is a plain lexicon entry; scanning k upwards keeps the
  // longest last part among splits with the fewest parts.
  std::optional<std::vector<std::size_t>> chosen;
  for (std::size_t k = 1; k < n; ++k) {
    if (!best[k] || !in_lex(k, n)) continue;
    if (!chosen || best[k]->size() + 1 < chosen->size()) {
      chosen = *best[k];
      chosen->push_back(n);
    }
  }
  if (!chosen) return {std::string(word)};

  std::vector<std::string> out;
  std::size_t b = 0;
  for (std::size_t e : *chosen) {
    out.push_back(unicode::encode(std::u32string_view(original).substr(b, e - b)));
    b = e;
  }
  return out;
}

// --- concept annotation --------------------------------------------------------

std::string token_key(const std::vector<Token>& tokens, std::size_t first,
                      std::size_t count) {
  std::string key;
  for (std::size_t i = first; i < first + count && i < tokens.size(); ++i) {
    if (i > first) key.push_back(' ');
    key += tokens[i].lowercased;
  }
  return key;
}

namespace {

const ConceptDictionary::Entry* find_part(const std::string& part,
                                          const ConceptDictionary& dict,
                                          const CompoundLexicon& lex) {
  std::string lower = unicode::to_lower(part);
  if (const auto* e = dict.find(lower)) return e;
  for (const std::string& m : lex.linking_morphemes()) {
    if (lower.size() > m.size() && lower.ends_with(m)) {
      if (const auto* e = dict.find(lower.substr(0, lower.size() - m.size()))) return e;
    }
  }
  return nullptr;
}

}  // namespace

std::vector<ConceptAnnotation> annotate_concepts(const Sentence& sentence,
                                                 const ConceptDictionary& dict,
                                                 const CompoundLexicon& lex,
                                                 std::size_t sentence_index) {
  std::vector<ConceptAnnotation> out;
  const auto& tokens = sentence.tokens;
  auto annotate = [&](std::size_t first, std::size_t last,
                      const ConceptDictionary::Entry& entry) {
    ConceptAnnotation c;
    c.span = Span{tokens[first].span.begin, tokens[last].span.end};
    c.category = entry.category;
    c.matched_text = unicode::slice(sentence.text, c.span.begin - sentence.span.begin,
                                    c.span.end - sentence.span.begin);
    c.dictionary_entry = entry.phrase;
    c.sentence = sentence_index;
    out.push_back(std::move(c));
  };

  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t longest = std::min(dict.max_phrase_tokens(), tokens.size() - i);
    std::size_t matched = 0;
    for (std::size_t n = longest; n >= 1; --n) {
      if (const auto* entry = dict.find(token_key(tokens, i, n))) {
        annotate(i, i + n - 1, *entry);
        matched = n;
        break;
      }
    }
    if (matched > 0) {
      i += matched;
      continue;
    }
    const auto& parts = tokens[i].compound_parts;
    if (parts.size() > 1) {
      for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
        if (const auto* entry = find_part(*it, dict, lex)) {
          annotate(i, i, *entry);
          break;
        }
      }
    }
    ++i;
  }
  return out;
}

Document preprocess(std::string text, const PreprocessResources& res) {
  return preprocess(std::move(text), res, res.concepts);
}

Document preprocess(std::string text, const PreprocessResources& res,
                    const ConceptDictionary& dict) {
  Document doc;
  doc.text = std::move(text);
  doc.sentences = segment_sentences(doc.text, res.segmenter);
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    Sentence& sentence = doc.sentences[s];
    sentence.tokens = tokenize(sentence.text, res.segmenter, sentence.span.begin);
    mark_stopwords(sentence.tokens, res.stopwords);
    for (Token& t : sentence.tokens) t.compound_parts = split_compound(t.text, res.compounds);
    for (ConceptAnnotation& c : annotate_concepts(sentence, dict, res.compounds, s)) {
      doc.concepts.push_back(std::move(c));
    }
  }
  return doc;
}

}  // namespace negdetect

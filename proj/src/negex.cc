#include "negdetect/negex.h"

#include <algorithm>
#include <charconv>
#include <set>

#include "negdetect/error.h"

namespace negdetect {

std::string_view to_string(TriggerType t) {
  switch (t) {
    case TriggerType::kPre: return "PRE";
    case TriggerType::kPost: return "POST";
    case TriggerType::kPseudo: return "PSEU";
    case TriggerType::kConj: return "CONJ";
  }
  return "PRE";
}

std::optional<TriggerType> parse_trigger_type(std::string_view tag) {
  for (TriggerType t : kTriggerTypes) {
    if (tag == to_string(t)) return t;
  }
  return std::nullopt;
}

std::size_t TriggerSet::count(TriggerType t) const {
  return static_cast<std::size_t>(std::count_if(
      triggers.begin(), triggers.end(), [t](const Trigger& tr) { return tr.type == t; }));
}

TriggerSet parse_trigger_file(std::string_view content, std::string name) {
  TriggerSet set;
  set.name = std::move(name);
  std::set<std::string> ids;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t nl = content.find('\n', start);
    std::string_view line = content.substr(
        start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? content.size() : nl + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    const std::string at = " at line " + std::to_string(lineno);
    std::vector<std::string_view> cols;
    for (std::size_t b = 0;;) {
      std::size_t tab = line.find('\t', b);
      cols.push_back(line.substr(b, tab == std::string_view::npos ? std::string_view::npos : tab - b));
      if (tab == std::string_view::npos) break;
      b = tab + 1;
    }
    if (cols.size() < 2 || cols[0].empty()) {
      throw ConfigError("expected 'pattern<TAB>TYPE'" + at, lineno);
    }
    auto type = parse_trigger_type(cols[1]);
    if (!type) {
      throw ConfigError("unknown trigger type " + std::string(cols[1]) + at, lineno);
    }
    Trigger t;
    t.pattern = std::string(cols[0]);
    t.type = *type;
    t.id = cols.size() > 2 && !cols[2].empty() ? std::string(cols[2]) : t.pattern;
    try {
      t.regex = unicode::Regex(t.pattern, /*case_insensitive=*/true);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(e.what()) + at, lineno);
    }
    if (!ids.insert(t.id).second) {
      throw ConfigError("duplicate trigger id '" + t.id + "'" + at, lineno);
    }
    set.triggers.push_back(std::move(t));
  }
  return set;
}

NegexConfig NegexConfig::with_window(std::size_t w) {
  if (w < 1 || w > kMaxWindow) {
    throw ConfigError("window must be in [1, 100] or unlimited, got " + std::to_string(w));
  }
  NegexConfig cfg;
  cfg.window = w;
  return cfg;
}

NegexConfig parse_window(std::string_view text) {
  if (text == "inf" || text == "unlimited" || text == "∞" || text == "none") {
    return NegexConfig::unlimited();
  }
  std::size_t w = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), w);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("invalid window '" + std::string(text) + "'");
  }
  return NegexConfig::with_window(w);
}

std::string window_label(const NegexConfig& cfg) {
  return cfg.window ? std::to_string(*cfg.window) : "inf";
}

// --- matching ------------------------------------------------------------------

namespace {

bool ranges_overlap(const TriggerMatch& a, const TriggerMatch& b) {
  return a.first <= b.last && b.first <= a.last;
}

std::size_t trigger_index(const TriggerSet& set, const Trigger* t) {
  return static_cast<std::size_t>(t - set.triggers.data());
}

}  // namespace

std::vector<TriggerMatch> find_trigger_matches(const Sentence& sentence,
                                               const TriggerSet& set) {
  const auto& tokens = sentence.tokens;
  const std::size_t n = tokens.size();
  std::vector<TriggerMatch> raw;
  if (n == 0 || set.triggers.empty()) return raw;

  // windows[i][k]: texts of tokens i..i+k joined by single spaces.
  const std::size_t width = std::max<std::size_t>(1, set.max_tokens);
  std::vector<std::vector<std::string>> windows(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string joined;
    for (std::size_t j = i; j < n && j - i < width; ++j) {
      if (j > i) joined.push_back(' ');
      joined += tokens[j].text;
      windows[i].push_back(joined);
    }
  }

  for (const Trigger& t : set.triggers) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = windows[i].size(); k-- > 0;) {
        if (!t.regex.full_match(windows[i][k])) continue;
        TriggerMatch m;
        m.trigger = &t;
        m.first = i;
        m.last = i + k;
        m.span = Span{tokens[i].span.begin, tokens[i + k].span.end};
        raw.push_back(m);
        break;
      }
    }
  }

  // Same-type overlaps: longest wins, then earliest, then file order.
  std::vector<TriggerMatch> by_priority = raw;
  std::stable_sort(by_priority.begin(), by_priority.end(),
                   [&](const TriggerMatch& a, const TriggerMatch& b) {
                     std::size_t la = a.last - a.first, lb = b.last - b.first;
                     if (la != lb) return la > lb;
                     if (a.first != b.first) return a.first < b.first;
                     return trigger_index(set, a.trigger) < trigger_index(set, b.trigger);
                   });
  std::vector<TriggerMatch> kept;
  for (const TriggerMatch& m : by_priority) {
    bool clash = std::any_of(kept.begin(), kept.end(), [&](const TriggerMatch& k) {
      return k.type() == m.type() && ranges_overlap(k, m);
    });
    if (!clash) kept.push_back(m);
  }

  // Pseudo-negations hide whatever they overlap.
  std::vector<TriggerMatch> out;
  for (const TriggerMatch& m : kept) {
    if (m.type() != TriggerType::kPseudo) {
      bool hidden = std::any_of(kept.begin(), kept.end(), [&](const TriggerMatch& p) {
        return p.type() == TriggerType::kPseudo && ranges_overlap(p, m);
      });
      if (hidden) continue;
    }
    out.push_back(m);
  }
  std::sort(out.begin(), out.end(), [&](const TriggerMatch& a, const TriggerMatch& b) {
    if (a.first != b.first) return a.first < b.first;
    if (a.last != b.last) return a.last < b.last;
    return trigger_index(set, a.trigger) < trigger_index(set, b.trigger);
  });
  return out;
}

// --- scoping -------------------------------------------------------------------

namespace {

struct Scope {
  std::size_t lo = 1;  // inclusive token range; empty when lo > hi
  std::size_t hi = 0;
  bool contains(std::size_t i) const { return lo <= i && i <= hi; }
};

// Forward scope of a PRE match, bounded by the next match start after it.
Scope pre_scope(const TriggerMatch& m, const std::vector<TriggerMatch>& all,
                std::size_t n_tokens, std::optional<std::size_t> window) {
  std::size_t stop = n_tokens;  // exclusive
  for (const TriggerMatch& o : all) {
    if (&o != &m && o.first > m.last) stop = std::min(stop, o.first);
  }
  if (window) stop = std::min(stop, m.last + 1 + *window);
  Scope s;
  s.lo = m.last + 1;
  s.hi = stop == 0 ? 0 : stop - 1;
  if (stop <= s.lo) s = Scope{};
  return s;
}

// Backward scope of a POST match, bounded by the previous match end.
Scope post_scope(const TriggerMatch& m, const std::vector<TriggerMatch>& all,
                 std::optional<std::size_t> window) {
  std::size_t lo = 0;
  for (const TriggerMatch& o : all) {
    if (&o != &m && o.last < m.first) lo = std::max(lo, o.last + 1);
  }
  if (window && m.first > *window) lo = std::max(lo, m.first - *window);
  if (m.first == 0 || lo > m.first - 1) return Scope{};
  return Scope{lo, m.first - 1};
}

}  // namespace

std::vector<NegationAnnotation> apply_negex(const Sentence& sentence,
                                            std::span<const ConceptAnnotation> concepts,
                                            const TriggerSet& set,
                                            const NegexConfig& cfg,
                                            std::size_t concept_offset) {
  std::vector<NegationAnnotation> out;
  out.reserve(concepts.size());
  for (std::size_t i = 0; i < concepts.size(); ++i) {
    out.push_back(NegationAnnotation::affirmed(concept_offset + i));
  }
  if (concepts.empty()) return out;

  const std::size_t n = sentence.tokens.size();
  std::vector<std::optional<std::pair<std::size_t, std::size_t>>> ranges;
  for (const ConceptAnnotation& c : concepts) ranges.push_back(token_range(sentence, c.span));

  std::vector<TriggerMatch> matches = find_trigger_matches(sentence, set);

  // PRE/POST overlap. Pre-negations are applied before post-negations, so an
  // overlapping POST match is lost, unless the PRE match is a prefix of the
  // POST match and its (unlimited) scope covers no concept.
  std::vector<bool> dropped(matches.size(), false);
  if (cfg.interference_fix) {
    for (std::size_t q = 0; q < matches.size(); ++q) {
      if (matches[q].type() != TriggerType::kPre) continue;
      bool prefix_of_post = std::any_of(matches.begin(), matches.end(), [&](const TriggerMatch& p) {
        return p.type() == TriggerType::kPost && p.first == matches[q].first &&
               p.last >= matches[q].last;
      });
      if (!prefix_of_post) continue;
      Scope s = pre_scope(matches[q], matches, n, std::nullopt);
      bool covers = std::any_of(ranges.begin(), ranges.end(), [&](const auto& r) {
        return r && s.contains(r->first);
      });
      if (!covers) dropped[q] = true;
    }
  }
  for (std::size_t p = 0; p < matches.size(); ++p) {
    if (matches[p].type() != TriggerType::kPost) continue;
    for (std::size_t q = 0; q < matches.size(); ++q) {
      if (matches[q].type() == TriggerType::kPre && !dropped[q] &&
          ranges_overlap(matches[p], matches[q])) {
        dropped[p] = true;
        break;
      }
    }
  }
  std::vector<TriggerMatch> active;
  for (std::size_t i = 0; i < matches.size(); ++i) {
    if (!dropped[i]) active.push_back(matches[i]);
  }

  struct Best {
    std::size_t distance;
    const TriggerMatch* match;
  };
  std::vector<std::optional<Best>> best(concepts.size());
  auto offer = [&](std::size_t ci, std::size_t distance, const TriggerMatch& m) {
    if (!best[ci] || distance < best[ci]->distance) best[ci] = Best{distance, &m};
  };
  // PRE matches are offered first so that they win distance ties.
  for (TriggerType type : {TriggerType::kPre, TriggerType::kPost}) {
    for (const TriggerMatch& m : active) {
      if (m.type() != type) continue;
      Scope s = type == TriggerType::kPre ? pre_scope(m, active, n, cfg.window)
                                          : post_scope(m, active, cfg.window);
      for (std::size_t ci = 0; ci < concepts.size(); ++ci) {
        if (!ranges[ci]) continue;
        auto [first, last] = *ranges[ci];
        if (type == TriggerType::kPre && s.contains(first)) offer(ci, first - m.last, m);
        if (type == TriggerType::kPost && s.contains(last)) offer(ci, m.first - last, m);
      }
    }
  }

  for (std::size_t ci = 0; ci < concepts.size(); ++ci) {
    if (!best[ci]) continue;
    const TriggerMatch& m = *best[ci]->match;
    NegationAnnotation& a = out[ci];
    a.assertion = Assertion::kNegated;
    a.source = m.type() == TriggerType::kPre ? Source::kNegexPre : Source::kNegexPost;
    a.trigger_span = m.span;
    a.trigger_text = unicode::slice(sentence.text, m.span.begin - sentence.span.begin,
                                    m.span.end - sentence.span.begin);
    a.rule = m.trigger->id;
  }
  return out;
}

std::vector<NegationAnnotation> classify_document(
    const std::vector<Sentence>& sentences,
    const std::vector<ConceptAnnotation>& concepts, const TriggerSet& set,
    const NegexConfig& cfg) {
  std::vector<NegationAnnotation> out;
  out.reserve(concepts.size());
  std::size_t begin = 0;
  while (begin < concepts.size()) {
    std::size_t s = concepts[begin].sentence;
    std::size_t end = begin;
    while (end < concepts.size() && concepts[end].sentence == s) ++end;
    std::span<const ConceptAnnotation> group(concepts.data() + begin, end - begin);
    for (NegationAnnotation& a : apply_negex(sentences.at(s), group, set, cfg, begin)) {
      out.push_back(std::move(a));
    }
    begin = end;
  }
  return out;
}

}  // namespace negdetect

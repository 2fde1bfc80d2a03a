#include "negdetect/textmodel.h"

#include "negdetect/unicode.h"

namespace negdetect {

bool span_overlaps(const Span& a, const Span& b) {
  return a.begin < b.end && b.begin < a.end;
}

std::string_view to_string(Assertion a) {
  return a == Assertion::kNegated ? "Negated" : "Affirmed";
}

std::string_view to_string(Source s) {
  switch (s) {
    case Source::kNegexPre: return "NegexPre";
    case Source::kNegexPost: return "NegexPost";
    case Source::kDepPatternNeg: return "DepPatternNeg";
    case Source::kDepPatternPosCorrection: return "DepPatternPosCorrection";
    case Source::kDefault: return "Default";
  }
  return "Default";
}

std::string span_text(std::string_view text, const Span& span) {
  return unicode::slice(text, span.begin, span.end);
}

std::optional<std::pair<std::size_t, std::size_t>> token_range(
    const Sentence& sentence, const Span& span) {
  std::optional<std::pair<std::size_t, std::size_t>> r;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    if (!span_overlaps(sentence.tokens[i].span, span)) continue;
    if (!r) r.emplace(i, i);
    r->second = i;
  }
  return r;
}

nlohmann::json to_json(const Span& span) {
  return {{"begin", span.begin}, {"end", span.end}};
}

Span span_from_json(const nlohmann::json& j) {
  return Span{j.at("begin").get<std::size_t>(), j.at("end").get<std::size_t>()};
}

nlohmann::json to_json(const Document& doc) {
  using nlohmann::json;
  json sentences = json::array();
  for (const Sentence& s : doc.sentences) {
    json tokens = json::array();
    for (const Token& t : s.tokens) {
      tokens.push_back({{"span", to_json(t.span)},
                        {"text", t.text},
                        {"lowercased", t.lowercased},
                        {"is_stopword", t.is_stopword},
                        {"compound_parts", t.compound_parts}});
    }
    sentences.push_back({{"span", to_json(s.span)}, {"tokens", std::move(tokens)}});
  }

  json concepts = json::array();
  for (std::size_t i = 0; i < doc.concepts.size(); ++i) {
    const ConceptAnnotation& c = doc.concepts[i];
    NegationAnnotation neg = i < doc.negations.size()
                                 ? doc.negations[i]
                                 : NegationAnnotation::affirmed(i);
    json trigger = nullptr;
    if (neg.source != Source::kDefault) {
      trigger = {{"source", to_string(neg.source)}, {"rule", neg.rule}};
      trigger["span"] = neg.trigger_span ? to_json(*neg.trigger_span) : json(nullptr);
      trigger["text"] = neg.trigger_text ? json(*neg.trigger_text) : json(nullptr);
    }
    concepts.push_back({{"span", to_json(c.span)},
                        {"category", c.category},
                        {"assertion", to_string(neg.assertion)},
                        {"trigger", std::move(trigger)}});
  }
  return {{"text", doc.text},
          {"sentences", std::move(sentences)},
          {"concepts", std::move(concepts)}};
}

}  // namespace negdetect

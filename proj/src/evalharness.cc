#include "negdetect/evalharness.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "negdetect/error.h"

namespace negdetect {

GoldFile parse_gold(std::string_view content) {
  GoldFile gold;
  std::size_t lineno = 0, start = 0;
  while (start < content.size()) {
    std::size_t nl = content.find('\n', start);
    std::string_view line = content.substr(
        start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? content.size() : nl + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    ++gold.data_lines;

    std::size_t first_tab = line.find('\t');
    std::size_t last_tab = line.rfind('\t');
    if (first_tab == std::string_view::npos || first_tab == last_tab) {
      throw ConfigError("gold line " + std::to_string(lineno) +
                            ": expected concept<TAB>sentence<TAB>tag", lineno);
    }
    GoldRecord r;
    r.concept_text = std::string(line.substr(0, first_tab));
    r.sentence = std::string(line.substr(first_tab + 1, last_tab - first_tab - 1));
    r.line = lineno;
    std::string tag = unicode::to_lower(line.substr(last_tab + 1));
    if (tag == "negated") {
      r.label = Assertion::kNegated;
    } else if (tag == "affirmed") {
      r.label = Assertion::kAffirmed;
    } else {
      ++gold.skipped;
      gold.warnings.push_back("line " + std::to_string(lineno) + ": skipped tag '" +
                              std::string(line.substr(last_tab + 1)) + "'");
      continue;
    }
    gold.records.push_back(std::move(r));
  }
  return gold;
}

void ConfusionCounts::add(Assertion gold, Assertion predicted) {
  bool g = gold == Assertion::kNegated, p = predicted == Assertion::kNegated;
  if (g && p) ++tp;
  else if (!g && !p) ++tn;
  else if (p) ++fp;
  else ++fn;
}

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& o) {
  tp += o.tp;
  tn += o.tn;
  fp += o.fp;
  fn += o.fn;
  return *this;
}

Metrics compute_metrics(const ConfusionCounts& c) {
  auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  Metrics m;
  m.accuracy = ratio(c.tp + c.tn, c.total());
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  if (m.precision && m.recall && *m.precision + *m.recall > 0) {
    m.f1 = 2 * *m.precision * *m.recall / (*m.precision + *m.recall);
  }
  return m;
}

std::string format_metric(std::optional<double> v) {
  if (!v) return "n/a";
  // The epsilon keeps exact halves like 0.9625 from rounding down after the
  // binary representation error.
  double r = std::floor(*v * 1000.0 + 0.5 + 1e-9) / 1000.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", r);
  return buf;
}

EvalResult evaluate(const GoldFile& gold, const EvalConfig& cfg) {
  if (!cfg.resources) throw Error("evaluate: no preprocessing resources");
  ConceptDictionary dict = cfg.resources->concepts;
  for (const GoldRecord& r : gold.records) {
    dict.insert(r.concept_text, std::string(kDefaultCategory), cfg.resources->segmenter);
  }

  EvalResult result;
  result.skipped = gold.skipped;
  result.data_lines = gold.data_lines;
  for (std::size_t i = 0; i < gold.records.size(); ++i) {
    const GoldRecord& r = gold.records[i];
    Document doc = annotate(r.sentence, *cfg.resources, dict, cfg.annotate);
    std::string wanted = unicode::normalize_phrase(r.concept_text);

    std::optional<RecordOutcome> outcome;
    for (std::size_t c = 0; c < doc.concepts.size(); ++c) {
      if (doc.concepts[c].dictionary_entry != wanted) continue;
      const NegationAnnotation& a = doc.negations[c];
      if (!outcome) {
        outcome = RecordOutcome{i, a.assertion, a};
        if (cfg.policy == OccurrencePolicy::kFirst) break;
      } else if (a.assertion == Assertion::kNegated && outcome->predicted != Assertion::kNegated) {
        outcome = RecordOutcome{i, a.assertion, a};
      }
    }
    if (!outcome) {
      result.diagnostics.push_back(
          Diagnostic{i, r.line, "concept '" + r.concept_text + "' not found in its sentence"});
      continue;
    }
    result.counts.add(r.label, outcome->predicted);
    result.outcomes.push_back(std::move(*outcome));
  }
  return result;
}

std::vector<NegexConfig> default_windows() {
  return {NegexConfig::unlimited(), NegexConfig::with_window(5), NegexConfig::with_window(4),
          NegexConfig::with_window(3)};
}

SweepResult sweep(const GoldFile& gold, std::span<const TriggerSet* const> sets,
                  std::span<const NegexConfig> windows, const EvalConfig& base) {
  SweepResult out;
  out.windows.assign(windows.begin(), windows.end());
  for (const TriggerSet* set : sets) {
    out.trigger_sets.push_back(set->name);
    for (const NegexConfig& w : windows) {
      EvalConfig cfg = base;
      cfg.annotate.triggers = set;
      cfg.annotate.negex = w;
      cfg.annotate.negex.interference_fix = base.annotate.negex.interference_fix;
      EvalResult r = evaluate(gold, cfg);
      out.rows.push_back(SweepRow{set->name, w, r.counts, compute_metrics(r.counts)});
    }
  }
  return out;
}

std::vector<SweepDifference> sweep_diff(const GoldFile& gold, const TriggerSet& a,
                                        const TriggerSet& b,
                                        std::span<const NegexConfig> windows,
                                        const EvalConfig& base) {
  std::vector<SweepDifference> out;
  for (const NegexConfig& w : windows) {
    EvalConfig ca = base, cb = base;
    ca.annotate.triggers = &a;
    cb.annotate.triggers = &b;
    ca.annotate.negex = cb.annotate.negex = w;
    ca.annotate.negex.interference_fix = cb.annotate.negex.interference_fix =
        base.annotate.negex.interference_fix;
    EvalResult ra = evaluate(gold, ca), rb = evaluate(gold, cb);
    std::map<std::size_t, Assertion> pa;
    for (const RecordOutcome& o : ra.outcomes) pa[o.record] = o.predicted;
    for (const RecordOutcome& o : rb.outcomes) {
      auto it = pa.find(o.record);
      if (it != pa.end() && it->second != o.predicted) {
        out.push_back(SweepDifference{w, o.record, it->second, o.predicted});
      }
    }
  }
  return out;
}

std::vector<std::pair<std::string, std::size_t>> trigger_frequency_report(
    const EvalResult& result) {
  std::map<std::string, std::size_t> counts;
  for (const RecordOutcome& o : result.outcomes) {
    if (o.predicted == Assertion::kNegated) ++counts[o.annotation.rule];
  }
  std::vector<std::pair<std::string, std::size_t>> out(counts.begin(), counts.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& x, const auto& y) { return x.second > y.second; });
  return out;
}

std::vector<std::pair<std::string, std::size_t>> trigger_frequency_report(
    const GoldFile& gold, const TriggerSet& set, const EvalConfig& base) {
  EvalConfig cfg = base;
  cfg.annotate.triggers = &set;
  return trigger_frequency_report(evaluate(gold, cfg));
}

}  // namespace negdetect

#ifndef NEGDETECT_EVALHARNESS_H_
#define NEGDETECT_EVALHARNESS_H_

// Gold-file evaluation: confusion counts, Acc/Prec/Rec/F1, window x trigger
// set sweeps and trigger frequency reports.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "negdetect/pipeline.h"

namespace negdetect {

struct GoldRecord {
  std::string concept_text;
  std::string sentence;
  Assertion label = Assertion::kAffirmed;
  std::size_t line = 0;
};

struct GoldFile {
  std::vector<GoldRecord> records;
  std::size_t data_lines = 0;  // non-blank, non-comment lines
  std::size_t skipped = 0;     // tags other than Affirmed/Negated
  std::vector<std::string> warnings;
};

// "concept TAB sentence TAB tag" per line. Throws ConfigError for lines
// with fewer than three columns.
GoldFile parse_gold(std::string_view content);

struct ConfusionCounts {
  std::size_t tp = 0;  // gold Negated, predicted Negated
  std::size_t tn = 0;  // gold Affirmed, predicted Affirmed
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + tn + fp + fn; }
  void add(Assertion gold, Assertion predicted);
  ConfusionCounts& operator+=(const ConfusionCounts& o);
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

// nullopt where a denominator is zero.
struct Metrics {
  std::optional<double> accuracy;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

Metrics compute_metrics(const ConfusionCounts& c);

// Half-up to 3 decimals, "n/a" when undefined.
std::string format_metric(std::optional<double> v);

enum class OccurrencePolicy {
  kFirst,       // prediction for the first occurrence of the concept
  kAnyNegated,  // Negated when any occurrence is Negated
};

struct EvalConfig {
  const PreprocessResources* resources = nullptr;
  AnnotateOptions annotate;
  OccurrencePolicy policy = OccurrencePolicy::kFirst;
};

struct RecordOutcome {
  std::size_t record = 0;
  Assertion predicted = Assertion::kAffirmed;
  NegationAnnotation annotation;  // of the occurrence that decided
};

struct Diagnostic {
  std::size_t record = 0;
  std::size_t line = 0;
  std::string message;
};

struct EvalResult {
  ConfusionCounts counts;
  std::vector<RecordOutcome> outcomes;
  std::vector<Diagnostic> diagnostics;
  std::size_t skipped = 0;
  std::size_t data_lines = 0;
};

// The concept dictionary is built from every gold concept. Records whose
// concept is not found in their sentence land in `diagnostics`.
EvalResult evaluate(const GoldFile& gold, const EvalConfig& cfg);

struct SweepRow {
  std::string trigger_set;
  NegexConfig negex;
  ConfusionCounts counts;
  Metrics metrics;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // trigger sets outer, windows inner
  std::vector<std::string> trigger_sets;
  std::vector<NegexConfig> windows;
};

// The standard window list: unlimited, 5, 4, 3.
std::vector<NegexConfig> default_windows();

SweepResult sweep(const GoldFile& gold, std::span<const TriggerSet* const> sets,
                  std::span<const NegexConfig> windows, const EvalConfig& base);

struct SweepDifference {
  NegexConfig negex;
  std::size_t record = 0;
  Assertion first = Assertion::kAffirmed;
  Assertion second = Assertion::kAffirmed;
};

// Records whose prediction differs between two trigger sets, per window.
std::vector<SweepDifference> sweep_diff(const GoldFile& gold, const TriggerSet& a,
                                        const TriggerSet& b,
                                        std::span<const NegexConfig> windows,
                                        const EvalConfig& base);

// Trigger id -> number of Negated predictions it produced, descending.
std::vector<std::pair<std::string, std::size_t>> trigger_frequency_report(
    const EvalResult& result);
std::vector<std::pair<std::string, std::size_t>> trigger_frequency_report(
    const GoldFile& gold, const TriggerSet& set, const EvalConfig& base);

// --- reports -----------------------------------------------------------------

enum class ReportFormat { kText, kTsv, kJson };
ReportFormat parse_report_format(std::string_view s);

std::string render_evaluation(const EvalResult& r, const GoldFile& gold, ReportFormat f);
std::string render_sweep(const SweepResult& r, ReportFormat f);
std::string render_frequencies(const std::vector<std::pair<std::string, std::size_t>>& freq,
                               ReportFormat f);
std::string render_sweep_diff(const std::vector<SweepDifference>& diff, const GoldFile& gold,
                              ReportFormat f);

}  // namespace negdetect

#endif  // NEGDETECT_EVALHARNESS_H_

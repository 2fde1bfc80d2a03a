#include <iomanip>
#include <sstream>

#include "negdetect/error.h"
#include "negdetect/evalharness.h"

namespace negdetect {

namespace {

std::string scope_label(const NegexConfig& cfg) {
  return cfg.window ? std::to_string(*cfg.window) : "∞";
}

nlohmann::json metric_json(std::optional<double> v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json counts_json(const ConfusionCounts& c) {
  return {{"tp", c.tp}, {"tn", c.tn}, {"fp", c.fp}, {"fn", c.fn}};
}

nlohmann::json metrics_json(const Metrics& m) {
  return {{"accuracy", metric_json(m.accuracy)},
          {"precision", metric_json(m.precision)},
          {"recall", metric_json(m.recall)},
          {"f1", metric_json(m.f1)}};
}

// Right-aligns cells; "∞" is one column wide but three bytes.
std::string pad(const std::string& s, std::size_t width) {
  std::size_t len = unicode::length(s);
  return len >= width ? s : std::string(width - len, ' ') + s;
}

}  // namespace

ReportFormat parse_report_format(std::string_view s) {
  if (s == "text" || s == "plain") return ReportFormat::kText;
  if (s == "tsv") return ReportFormat::kTsv;
  if (s == "json") return ReportFormat::kJson;
  throw ConfigError("unknown format '" + std::string(s) + "' (json, tsv, text)");
}

std::string render_evaluation(const EvalResult& r, const GoldFile& gold, ReportFormat f) {
  Metrics m = compute_metrics(r.counts);
  const ConfusionCounts& c = r.counts;
  std::ostringstream out;
  switch (f) {
    case ReportFormat::kJson: {
      nlohmann::json diags = nlohmann::json::array();
      for (const Diagnostic& d : r.diagnostics) {
        diags.push_back({{"line", d.line}, {"message", d.message}});
      }
      nlohmann::json j = {{"evaluated", c.total()},
                          {"skipped", r.skipped},
                          {"diagnostics", std::move(diags)},
                          {"counts", counts_json(c)},
                          {"metrics", metrics_json(m)},
                          {"warnings", gold.warnings}};
      out << j.dump(2) << "\n";
      break;
    }
    case ReportFormat::kTsv:
      out << "evaluated\tskipped\tdiagnostics\ttp\ttn\tfp\tfn\tacc\tprec\trec\tf1\n";
      out << c.total() << '\t' << r.skipped << '\t' << r.diagnostics.size() << '\t' << c.tp
          << '\t' << c.tn << '\t' << c.fp << '\t' << c.fn << '\t' << format_metric(m.accuracy)
          << '\t' << format_metric(m.precision) << '\t' << format_metric(m.recall) << '\t'
          << format_metric(m.f1) << '\n';
      break;
    case ReportFormat::kText:
      out << c.total() << " evaluated, " << r.skipped << " skipped, " << r.diagnostics.size()
          << " not found\n";
      out << "TP " << c.tp << "  TN " << c.tn << "  FP " << c.fp << "  FN " << c.fn << "\n";
      out << "Acc " << format_metric(m.accuracy) << "  Prec " << format_metric(m.precision)
          << "  Rec " << format_metric(m.recall) << "  F1 " << format_metric(m.f1) << "\n";
      for (const Diagnostic& d : r.diagnostics) out << "line " << d.line << ": " << d.message << "\n";
      break;
  }
  return out.str();
}

std::string render_sweep(const SweepResult& r, ReportFormat f) {
  std::ostringstream out;
  switch (f) {
    case ReportFormat::kJson: {
      nlohmann::json rows = nlohmann::json::array();
      for (const SweepRow& row : r.rows) {
        rows.push_back({{"trigger_set", row.trigger_set},
                        {"window", window_label(row.negex)},
                        {"counts", counts_json(row.counts)},
                        {"metrics", metrics_json(row.metrics)}});
      }
      out << nlohmann::json{{"rows", std::move(rows)}}.dump(2) << "\n";
      break;
    }
    case ReportFormat::kTsv:
      out << "trigger_set\tscope\ttp\ttn\tfp\tfn\tacc\tprec\trec\tf1\n";
      for (const SweepRow& row : r.rows) {
        out << row.trigger_set << '\t' << window_label(row.negex) << '\t' << row.counts.tp
            << '\t' << row.counts.tn << '\t' << row.counts.fp << '\t' << row.counts.fn << '\t'
            << format_metric(row.metrics.accuracy) << '\t'
            << format_metric(row.metrics.precision) << '\t'
            << format_metric(row.metrics.recall) << '\t' << format_metric(row.metrics.f1)
            << '\n';
      }
      break;
    case ReportFormat::kText: {
      constexpr std::size_t kLabel = 8, kCell = 7;
      const std::size_t nw = r.windows.size();
      for (std::size_t s = 0; s < r.trigger_sets.size(); ++s) {
        auto row_at = [&](std::size_t w) -> const SweepRow& { return r.rows[s * nw + w]; };
        out << r.trigger_sets[s] << "\n";
        out << std::left << std::setw(kLabel) << "scope" << std::right;
        for (const NegexConfig& w : r.windows) out << pad(scope_label(w), kCell);
        out << "\n";
        auto line = [&](const char* label, auto&& cell) {
          out << std::left << std::setw(kLabel) << label << std::right;
          for (std::size_t w = 0; w < nw; ++w) out << pad(cell(row_at(w)), kCell);
          out << "\n";
        };
        line("TP", [](const SweepRow& x) { return std::to_string(x.counts.tp); });
        line("TN", [](const SweepRow& x) { return std::to_string(x.counts.tn); });
        line("FP", [](const SweepRow& x) { return std::to_string(x.counts.fp); });
        line("FN", [](const SweepRow& x) { return std::to_string(x.counts.fn); });
        line("Acc", [](const SweepRow& x) { return format_metric(x.metrics.accuracy); });
        line("Prec", [](const SweepRow& x) { return format_metric(x.metrics.precision); });
        line("Rec", [](const SweepRow& x) { return format_metric(x.metrics.recall); });
        line("F1", [](const SweepRow& x) { return format_metric(x.metrics.f1); });
        out << "\n";
      }
      // F1 overview, one line per trigger set.
      out << std::left << std::setw(kLabel) << "F1" << std::right;
      for (const NegexConfig& w : r.windows) out << pad(scope_label(w), kCell);
      out << "\n";
      for (std::size_t s = 0; s < r.trigger_sets.size(); ++s) {
        out << std::left << std::setw(kLabel) << r.trigger_sets[s] << std::right;
        for (std::size_t w = 0; w < nw; ++w) out << pad(format_metric(r.rows[s * nw + w].metrics.f1), kCell);
        out << "\n";
      }
      break;
    }
  }
  return out.str();
}

std::string render_frequencies(const std::vector<std::pair<std::string, std::size_t>>& freq,
                               ReportFormat f) {
  std::ostringstream out;
  if (f == ReportFormat::kJson) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& [id, n] : freq) j.push_back({{"trigger", id}, {"count", n}});
    out << j.dump(2) << "\n";
    return out.str();
  }
  if (f == ReportFormat::kTsv) out << "trigger\tcount\n";
  for (const auto& [id, n] : freq) {
    if (f == ReportFormat::kTsv) {
      out << id << '\t' << n << '\n';
    } else {
      out << std::setw(6) << n << "  " << id << "\n";
    }
  }
  return out.str();
}

std::string render_sweep_diff(const std::vector<SweepDifference>& diff, const GoldFile& gold,
                              ReportFormat f) {
  std::ostringstream out;
  if (f == ReportFormat::kJson) {
    nlohmann::json j = nlohmann::json::array();
    for (const SweepDifference& d : diff) {
      const GoldRecord& r = gold.records[d.record];
      j.push_back({{"window", window_label(d.negex)},
                   {"line", r.line},
                   {"concept", r.concept_text},
                   {"sentence", r.sentence},
                   {"first", to_string(d.first)},
                   {"second", to_string(d.second)}});
    }
    out << j.dump(2) << "\n";
    return out.str();
  }
  if (f == ReportFormat::kTsv) out << "scope\tline\tconcept\tfirst\tsecond\tsentence\n";
  for (const SweepDifference& d : diff) {
    const GoldRecord& r = gold.records[d.record];
    out << window_label(d.negex) << '\t' << r.line << '\t' << r.concept_text << '\t'
        << to_string(d.first) << '\t' << to_string(d.second) << '\t' << r.sentence << '\n';
  }
  return out.str();
}

}  // namespace negdetect

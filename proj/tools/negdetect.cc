// negdetect: annotate | evaluate | sweep | serve

#include <pthread.h>
#include <signal.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "httplib.h"
#include "json.hpp"
#include "negdetect/error.h"
#include "negdetect/evalharness.h"
#include "negdetect/pipeline.h"
#include "negdetect/server.h"

namespace fs = std::filesystem;
using namespace negdetect;

namespace {

struct Options {
  std::vector<std::string> triggers;
  std::string concepts, stopwords, compounds, abbreviations, segmenter;
  std::string patterns, conllu_dir;
  std::string window;
  std::string format = "json";
  bool no_interference_fix = false;
  bool chain_any_edge = false;
  bool no_conj = false;
};

fs::path resource_dir() {
  if (const char* env = std::getenv("NEGDETECT_RESOURCES"); env && *env) return env;
  return NEGDETECT_DEFAULT_RESOURCES;
}

// Flag, else the standard file inside the resource directory.
fs::path pick(const std::string& flag, const fs::path& fallback) {
  return flag.empty() ? fallback : fs::path(flag);
}

PreprocessResources load_resources(const Options& o) {
  ResourcePaths p = ResourcePaths::in_directory(resource_dir());
  p.concepts = pick(o.concepts, p.concepts);
  p.stopwords = pick(o.stopwords, p.stopwords);
  p.compounds = pick(o.compounds, p.compounds);
  p.abbreviations = pick(o.abbreviations, p.abbreviations);
  p.segmenter = pick(o.segmenter, p.segmenter);
  if (!o.concepts.empty() && !fs::exists(p.concepts)) {
    throw Error("cannot read concept dictionary " + p.concepts.string());
  }
  return load_preprocess(p);
}

// A bare name resolves to <resources>/triggers/<name>.tsv.
std::string trigger_spec(const std::string& s) {
  if (s.find('=') != std::string::npos || s.find('/') != std::string::npos ||
      fs::exists(s)) {
    return s;
  }
  return s + "=" + (resource_dir() / "triggers" / (s + ".tsv")).string();
}

std::vector<TriggerSet> load_triggers(const std::vector<std::string>& specs) {
  std::vector<TriggerSet> sets;
  if (specs.empty()) {
    sets.push_back(load_trigger_set(trigger_spec("OTS")));
    return sets;
  }
  for (const std::string& s : specs) sets.push_back(load_trigger_set(trigger_spec(s)));
  return sets;
}

std::vector<TriggerSet> all_trigger_sets(const std::vector<std::string>& specs) {
  if (!specs.empty()) return load_triggers(specs);
  std::vector<fs::path> files;
  fs::path dir = resource_dir() / "triggers";
  if (fs::is_directory(dir)) {
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.path().extension() == ".tsv") files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<TriggerSet> sets;
  for (const fs::path& f : files) sets.push_back(load_trigger_set(f.string()));
  if (sets.empty()) throw Error("no trigger sets found in " + dir.string());
  return sets;
}

NegexConfig negex_config(const Options& o) {
  NegexConfig c = o.window.empty() ? NegexConfig::unlimited() : parse_window(o.window);
  c.interference_fix = !o.no_interference_fix;
  return c;
}

ApplyOptions apply_options(const Options& o) {
  ApplyOptions a;
  a.match.chain_label = o.chain_any_edge ? ChainLabel::kAnyEdge : ChainLabel::kFirstEdge;
  a.propagate_conj = !o.no_conj;
  return a;
}

std::vector<GraphPattern> load_patterns(const std::string& path) {
  if (path.empty()) return {};
  return parse_pattern_file(read_file(path));
}

void add_resource_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--triggers", o.triggers,
                  "trigger file, NAME=path, or a set name under <resources>/triggers");
  cmd->add_option("--concepts", o.concepts, "concept dictionary (TSV)");
  cmd->add_option("--stopwords", o.stopwords, "stopword list");
  cmd->add_option("--compounds", o.compounds, "compound lexicon");
  cmd->add_option("--abbreviations", o.abbreviations, "abbreviation list");
  cmd->add_option("--segmenter", o.segmenter, "segmenter configuration");
  cmd->add_option("--patterns", o.patterns, "dependency pattern file");
  cmd->add_option("--conllu-dir", o.conllu_dir, "directory of CoNLL-U parses");
  cmd->add_option("--window", o.window, "NegEx scope in tokens, or \"inf\"");
  cmd->add_flag("--no-interference-fix", o.no_interference_fix,
                "keep POST triggers that overlap a PRE trigger");
  cmd->add_flag("--chain-any-edge", o.chain_any_edge,
                ">> label may match any edge of the path");
  cmd->add_flag("--no-conj", o.no_conj, "do not extend pattern results to conjuncts");
}

// --- annotate ----------------------------------------------------------------

std::string read_stream(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r\n") == std::string::npos; }

std::string render_documents(const std::vector<Document>& docs, ReportFormat f) {
  std::ostringstream out;
  if (f == ReportFormat::kJson) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Document& d : docs) arr.push_back(to_json(d));
    out << arr.dump(2) << "\n";
    return out.str();
  }
  if (f == ReportFormat::kTsv) {
    out << "document\tsentence\tbegin\tend\tconcept\tcategory\tassertion\tsource\ttrigger\n";
  }
  for (std::size_t di = 0; di < docs.size(); ++di) {
    const Document& d = docs[di];
    if (f == ReportFormat::kText && di > 0) out << "\n";
    for (std::size_t ci = 0; ci < d.concepts.size(); ++ci) {
      const ConceptAnnotation& c = d.concepts[ci];
      const NegationAnnotation& n = d.negations[ci];
      std::string trigger = n.trigger_text.value_or("");
      if (f == ReportFormat::kTsv) {
        out << di << '\t' << c.sentence << '\t' << c.span.begin << '\t' << c.span.end << '\t'
            << c.matched_text << '\t' << c.category << '\t' << to_string(n.assertion) << '\t'
            << to_string(n.source) << '\t' << trigger << '\n';
      } else {
        out << "[" << c.sentence << "] " << c.matched_text << " (" << c.span.begin << "-"
            << c.span.end << "): " << to_string(n.assertion);
        if (n.source != Source::kDefault) {
          out << " by " << to_string(n.source);
          if (!trigger.empty()) out << " \"" << trigger << "\"";
        }
        out << "\n";
      }
    }
  }
  return out.str();
}

int cmd_annotate(const Options& o, const std::vector<std::string>& inputs, bool per_line) {
  if (!o.patterns.empty() && o.conllu_dir.empty()) {
    throw Error("dependency patterns require parses (--conllu-dir)");
  }
  ReportFormat format = parse_report_format(o.format);
  // Everything loads before any input is read.
  PreprocessResources res = load_resources(o);
  std::vector<TriggerSet> sets = load_triggers(o.triggers);
  if (sets.size() != 1) throw Error("annotate takes a single trigger set");
  std::vector<GraphPattern> patterns = load_patterns(o.patterns);
  ParseIndex parses;
  if (!o.conllu_dir.empty()) parses = load_parse_dir(o.conllu_dir);

  AnnotateOptions opts;
  opts.triggers = &sets.front();
  opts.negex = negex_config(o);
  opts.patterns = patterns;
  opts.apply = apply_options(o);
  if (!o.conllu_dir.empty()) opts.parses = &parses;

  std::vector<std::string> texts;
  auto add_text = [&](std::string content) {
    if (per_line) {
      std::istringstream in(content);
      for (std::string line; std::getline(in, line);) {
        if (!blank(line)) texts.push_back(line);
      }
    } else if (!blank(content)) {
      texts.push_back(std::move(content));
    }
  };
  if (inputs.empty()) {
    add_text(read_stream(std::cin));
  } else {
    for (const std::string& path : inputs) {
      add_text(path == "-" ? read_stream(std::cin) : read_file(path));
    }
  }

  std::vector<Document> docs;
  for (std::string& t : texts) docs.push_back(annotate(std::move(t), res, opts));
  std::cout << render_documents(docs, format);
  return 0;
}

// --- evaluate / sweep --------------------------------------------------------

OccurrencePolicy parse_policy(const std::string& s) {
  if (s == "first") return OccurrencePolicy::kFirst;
  if (s == "any-negated") return OccurrencePolicy::kAnyNegated;
  throw Error("unknown occurrence policy '" + s + "' (expected first or any-negated)");
}

GoldFile load_gold(const std::string& path) {
  if (!fs::is_regular_file(path)) throw Error("cannot read gold file " + path);
  return parse_gold(read_file(path));
}

int cmd_evaluate(const Options& o, const std::string& gold_path, const std::string& policy,
                 bool frequencies) {
  if (!o.patterns.empty() && o.conllu_dir.empty()) {
    throw Error("dependency patterns require parses (--conllu-dir)");
  }
  ReportFormat format = parse_report_format(o.format);
  PreprocessResources res = load_resources(o);
  std::vector<TriggerSet> sets = load_triggers(o.triggers);
  if (sets.size() != 1) throw Error("evaluate takes a single trigger set; use sweep");
  std::vector<GraphPattern> patterns = load_patterns(o.patterns);
  ParseIndex parses;
  if (!o.conllu_dir.empty()) parses = load_parse_dir(o.conllu_dir);
  GoldFile gold = load_gold(gold_path);

  EvalConfig cfg;
  cfg.resources = &res;
  cfg.policy = parse_policy(policy);
  cfg.annotate.triggers = &sets.front();
  cfg.annotate.negex = negex_config(o);
  cfg.annotate.patterns = patterns;
  cfg.annotate.apply = apply_options(o);
  if (!o.conllu_dir.empty()) cfg.annotate.parses = &parses;

  EvalResult result = evaluate(gold, cfg);
  std::cout << render_evaluation(result, gold, format);
  if (frequencies) std::cout << render_frequencies(trigger_frequency_report(result), format);
  return 0;
}

std::vector<NegexConfig> parse_windows(const std::string& list, bool interference_fix) {
  if (list.empty()) {
    auto w = default_windows();
    for (auto& c : w) c.interference_fix = interference_fix;
    return w;
  }
  std::vector<NegexConfig> out;
  std::istringstream in(list);
  for (std::string item; std::getline(in, item, ',');) {
    if (item.empty()) continue;
    NegexConfig c = parse_window(item);
    c.interference_fix = interference_fix;
    out.push_back(c);
  }
  if (out.empty()) throw Error("--windows is empty");
  return out;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_sweep(const Options& o, const std::string& gold_path, const std::string& windows,
              const std::string& trigger_sets, const std::string& policy, bool diff) {
  if (!o.patterns.empty() && o.conllu_dir.empty()) {
    throw Error("dependency patterns require parses (--conllu-dir)");
  }
  ReportFormat format = parse_report_format(o.format);
  PreprocessResources res = load_resources(o);
  std::vector<std::string> specs = o.triggers;
  for (const std::string& s : split_commas(trigger_sets)) specs.push_back(s);
  std::vector<TriggerSet> sets = load_triggers(specs);
  std::vector<GraphPattern> patterns = load_patterns(o.patterns);
  ParseIndex parses;
  if (!o.conllu_dir.empty()) parses = load_parse_dir(o.conllu_dir);
  std::vector<NegexConfig> wins = parse_windows(windows, !o.no_interference_fix);
  GoldFile gold = load_gold(gold_path);

  EvalConfig cfg;
  cfg.resources = &res;
  cfg.policy = parse_policy(policy);
  cfg.annotate.patterns = patterns;
  cfg.annotate.apply = apply_options(o);
  if (!o.conllu_dir.empty()) cfg.annotate.parses = &parses;

  if (diff) {
    if (sets.size() != 2) throw Error("--diff needs exactly two trigger sets");
    std::cout << render_sweep_diff(sweep_diff(gold, sets[0], sets[1], wins, cfg), gold, format);
    return 0;
  }
  std::vector<const TriggerSet*> ptrs;
  for (const TriggerSet& s : sets) ptrs.push_back(&s);
  std::cout << render_sweep(sweep(gold, ptrs, wins, cfg), format);
  return 0;
}

// --- serve -------------------------------------------------------------------

int cmd_serve(const Options& o, const std::string& host, int port, const std::string& static_dir) {
  auto state = std::make_shared<ServerState>();
  state->resources = load_resources(o);
  state->trigger_sets = all_trigger_sets(o.triggers);
  state->default_trigger_set =
      state->find_trigger_set("OTS") ? "OTS" : state->trigger_sets.front().name;
  std::string pattern_path = o.patterns;
  if (pattern_path.empty() && fs::exists(resource_dir() / "patterns.tsv")) {
    pattern_path = (resource_dir() / "patterns.tsv").string();
  }
  state->patterns = load_patterns(pattern_path);
  state->negex = negex_config(o);
  state->apply = apply_options(o);
  state->fixtures = load_fixtures(o.conllu_dir);
  state->static_dir = static_dir;

  // Block the shutdown signals before httplib starts its worker threads so
  // only the waiter below receives them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  httplib::Server server;
  Api(state).mount(server);
  if (port == 0) {
    port = server.bind_to_any_port(host);
  } else if (!server.bind_to_port(host, port)) {
    throw Error("cannot bind " + host + ":" + std::to_string(port));
  }
  if (port < 0) throw Error("cannot bind " + host);
  std::cerr << "listening on http://" << host << ":" << port << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.listen_after_bind();
  // listen returned on its own (e.g. socket error): release the waiter.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  std::cerr << "stopped" << std::endl;
  return 0;
}

int env_port(int fallback) {
  const char* env = std::getenv("NEGDETECT_PORT");
  if (!env || !*env) return fallback;
  try {
    return std::stoi(env);
  } catch (const std::exception&) {
    throw Error(std::string("invalid NEGDETECT_PORT '") + env + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Negation detection for German clinical text"};
  app.require_subcommand(1);
  Options o;

  auto* annotate_cmd = app.add_subcommand("annotate", "annotate text from files or stdin");
  add_resource_flags(annotate_cmd, o);
  std::vector<std::string> inputs;
  bool per_line = false;
  annotate_cmd->add_option("input", inputs, "input files (default: stdin)");
  annotate_cmd->add_flag("--lines", per_line, "treat every non-blank line as a document");
  annotate_cmd->add_option("--format", o.format, "json, tsv or text");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "score a gold TSV file");
  add_resource_flags(evaluate_cmd, o);
  std::string gold, policy = "first";
  bool frequencies = false;
  evaluate_cmd->add_option("gold", gold, "gold TSV")->required();
  evaluate_cmd->add_option("--policy", policy, "first or any-negated");
  evaluate_cmd->add_flag("--frequencies", frequencies, "append the trigger frequency report");
  evaluate_cmd->add_option("--format", o.format, "text, tsv or json")->default_str("text");

  auto* sweep_cmd = app.add_subcommand("sweep", "evaluate trigger sets x windows");
  add_resource_flags(sweep_cmd, o);
  std::string windows, trigger_sets;
  bool diff = false;
  sweep_cmd->add_option("gold", gold, "gold TSV")->required();
  sweep_cmd->add_option("--windows", windows, "comma list, default inf,5,4,3");
  sweep_cmd->add_option("--trigger-sets", trigger_sets, "comma list of names or NAME=path");
  sweep_cmd->add_option("--policy", policy, "first or any-negated");
  sweep_cmd->add_flag("--diff", diff, "list records classified differently by two sets");
  sweep_cmd->add_option("--format", o.format, "text, tsv or json");

  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP API and workbench");
  add_resource_flags(serve_cmd, o);
  std::string host = "127.0.0.1", static_dir;
  int port = 8080;
  auto* port_opt = serve_cmd->add_option("--port", port, "TCP port (0 picks a free one)");
  serve_cmd->add_option("--host", host, "bind address");
  serve_cmd->add_option("--static-dir", static_dir, "workbench assets");

  // evaluate and sweep print reports, not documents.
  evaluate_cmd->preparse_callback([&](std::size_t) { o.format = "text"; });
  sweep_cmd->preparse_callback([&](std::size_t) { o.format = "text"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (annotate_cmd->parsed()) return cmd_annotate(o, inputs, per_line);
    if (evaluate_cmd->parsed()) return cmd_evaluate(o, gold, policy, frequencies);
    if (sweep_cmd->parsed()) return cmd_sweep(o, gold, windows, trigger_sets, policy, diff);
    if (serve_cmd->parsed()) {
      if (port_opt->count() == 0) port = env_port(port);
      return cmd_serve(o, host, port, static_dir);
    }
  } catch (const std::exception& e) {
    std::cerr << "negdetect: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#include "negdetect/pipeline.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "negdetect/error.h"

namespace negdetect {

namespace fs = std::filesystem;

namespace {

std::string words_key(const DependencyGraph& g) {
  std::string key;
  for (const DepNode& n : g.nodes()) {
    if (!key.empty()) key.push_back(' ');
    key += n.word;
  }
  return key;
}

std::string words_key(const Sentence& s) {
  std::string key;
  for (const Token& t : s.tokens) {
    if (!key.empty()) key.push_back(' ');
    key += t.lowercased;
  }
  return key;
}

}  // namespace

void ParseIndex::add(DependencyGraph g) {
  std::string key = words_key(g);
  graphs_.insert_or_assign(std::move(key), std::move(g));
}

const DependencyGraph* ParseIndex::find(const Sentence& sentence) const {
  auto it = graphs_.find(words_key(sentence));
  return it == graphs_.end() ? nullptr : &it->second;
}

Document annotate(std::string text, const PreprocessResources& res,
                  const AnnotateOptions& opts) {
  return annotate(std::move(text), res, res.concepts, opts);
}

Document annotate(std::string text, const PreprocessResources& res,
                  const ConceptDictionary& dict, const AnnotateOptions& opts) {
  Document doc = preprocess(std::move(text), res, dict);
  if (opts.triggers) {
    doc.negations = classify_document(doc.sentences, doc.concepts, *opts.triggers, opts.negex);
  } else {
    for (std::size_t i = 0; i < doc.concepts.size(); ++i) {
      doc.negations.push_back(NegationAnnotation::affirmed(i));
    }
  }
  if (opts.patterns.empty()) return doc;
  if (!opts.sentence_graphs.empty() && opts.sentence_graphs.size() != doc.sentences.size()) {
    throw Error("got " + std::to_string(opts.sentence_graphs.size()) + " parses for " +
                std::to_string(doc.sentences.size()) + " sentences");
  }

  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const DependencyGraph* g = nullptr;
    if (!opts.sentence_graphs.empty()) {
      g = &opts.sentence_graphs[s];
    } else if (opts.parses) {
      g = opts.parses->find(doc.sentences[s]);
    }
    if (!g) continue;
    auto first = std::find_if(doc.concepts.begin(), doc.concepts.end(),
                              [&](const ConceptAnnotation& c) { return c.sentence == s; });
    auto last = std::find_if(first, doc.concepts.end(),
                             [&](const ConceptAnnotation& c) { return c.sentence != s; });
    if (first == last) {
      check_alignment(*g, doc.sentences[s]);
      continue;
    }
    auto offset = static_cast<std::size_t>(first - doc.concepts.begin());
    auto count = static_cast<std::size_t>(last - first);
    std::vector<NegationAnnotation> slice(doc.negations.begin() + offset,
                                          doc.negations.begin() + offset + count);
    slice = apply_pattern_set(opts.patterns, *g, doc.sentences[s],
                              std::span<const ConceptAnnotation>(&*first, count),
                              std::move(slice), opts.apply, offset);
    std::copy(slice.begin(), slice.end(), doc.negations.begin() + offset);
  }
  return doc;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TriggerSet load_trigger_set(const std::string& spec) {
  std::string name, path = spec;
  if (auto eq = spec.find('='); eq != std::string::npos) {
    name = spec.substr(0, eq);
    path = spec.substr(eq + 1);
  } else {
    name = fs::path(spec).stem().string();
  }
  try {
    return parse_trigger_file(read_file(path), name);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what(), e.line());
  }
}

ResourcePaths ResourcePaths::in_directory(const fs::path& dir) {
  ResourcePaths p;
  p.stopwords = dir / "stopwords.txt";
  p.compounds = dir / "compound_lexicon.txt";
  p.concepts = dir / "concepts.tsv";
  p.abbreviations = dir / "abbreviations.txt";
  p.segmenter = dir / "segmenter.conf";
  return p;
}

PreprocessResources load_preprocess(const ResourcePaths& paths) {
  auto optional_file = [](const fs::path& p) -> std::optional<std::string> {
    if (p.empty() || !fs::exists(p)) return std::nullopt;
    return read_file(p);
  };
  auto with_path = [](const fs::path& p, auto&& fn) {
    try {
      return fn();
    } catch (const ConfigError& e) {
      throw ConfigError(p.string() + ": " + e.what(), e.line());
    }
  };

  std::vector<std::string> abbreviations;
  if (auto content = optional_file(paths.abbreviations)) abbreviations = parse_word_list(*content);
  SegmenterConfig seg = SegmenterConfig::defaults();
  if (auto content = optional_file(paths.segmenter)) {
    seg = with_path(paths.segmenter, [&] { return SegmenterConfig::parse(*content, abbreviations); });
  } else {
    seg = SegmenterConfig(seg.sentence_split_patterns(), seg.token_split_patterns(), abbreviations);
  }

  PreprocessResources res{
      seg,
      with_path(paths.stopwords, [&] { return StopwordList::parse(read_file(paths.stopwords)); }),
      with_path(paths.compounds, [&] { return CompoundLexicon::parse(read_file(paths.compounds)); }),
      ConceptDictionary{},
  };
  if (auto content = optional_file(paths.concepts)) {
    res.concepts = with_path(paths.concepts, [&] { return ConceptDictionary::parse(*content, res.segmenter); });
  }
  return res;
}

ParseIndex load_parse_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ConfigError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".conllu") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  ParseIndex index;
  for (const fs::path& f : files) {
    try {
      for (DependencyGraph& g : parse_conllu(read_file(f))) index.add(std::move(g));
    } catch (const ParseError& e) {
      throw ConfigError(f.string() + ": " + e.what(), e.line());
    }
  }
  return index;
}

}  // namespace negdetect

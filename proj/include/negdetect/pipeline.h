#ifndef NEGDETECT_PIPELINE_H_
#define NEGDETECT_PIPELINE_H_

// Wires preprocessing, NegEx and dependency patterns into one call, and
// loads the resource files the CLI and server share.

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "negdetect/deppat.h"
#include "negdetect/negex.h"
#include "negdetect/preprocess.h"

namespace negdetect {

// Finds the parse of a sentence by its lowercased token sequence.
class ParseIndex {
 public:
  void add(DependencyGraph g);
  const DependencyGraph* find(const Sentence& sentence) const;
  std::size_t size() const { return graphs_.size(); }

 private:
  std::map<std::string, DependencyGraph> graphs_;
};

struct AnnotateOptions {
  const TriggerSet* triggers = nullptr;
  NegexConfig negex;
  std::span<const GraphPattern> patterns;
  ApplyOptions apply;
  // Parses looked up per sentence; sentences without one skip the patterns.
  const ParseIndex* parses = nullptr;
  // Alternatively one parse per sentence, in order. Must match the sentence
  // count when non-empty.
  std::span<const DependencyGraph> sentence_graphs;
};

// Preprocess + NegEx (+ patterns). Every concept ends up with exactly one
// negation annotation.
Document annotate(std::string text, const PreprocessResources& res,
                  const AnnotateOptions& opts);
Document annotate(std::string text, const PreprocessResources& res,
                  const ConceptDictionary& dict, const AnnotateOptions& opts);

// --- resource files ----------------------------------------------------------

std::string read_file(const std::filesystem::path& path);

// "NAME=path" or a plain path whose file stem becomes the set name.
TriggerSet load_trigger_set(const std::string& spec);

struct ResourcePaths {
  std::filesystem::path stopwords;
  std::filesystem::path compounds;
  std::filesystem::path concepts;
  std::filesystem::path abbreviations;
  std::filesystem::path segmenter;

  // Standard file names inside a resource directory.
  static ResourcePaths in_directory(const std::filesystem::path& dir);
};

// Missing optional files (abbreviations, segmenter, concepts) fall back to
// defaults; a missing stopword or compound file is an error.
PreprocessResources load_preprocess(const ResourcePaths& paths);

// All *.conllu files of a directory, in file name order.
ParseIndex load_parse_dir(const std::filesystem::path& dir);

}  // namespace negdetect

#endif  // NEGDETECT_PIPELINE_H_

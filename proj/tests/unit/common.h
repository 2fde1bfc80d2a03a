#ifndef NEGDETECT_TESTS_UNIT_COMMON_H_
#define NEGDETECT_TESTS_UNIT_COMMON_H_

#include <filesystem>
#include <string>

#include "negdetect/pipeline.h"

namespace testing {

inline std::filesystem::path resource_dir() { return NEGDETECT_RESOURCE_DIR; }
inline std::filesystem::path fixture_dir() { return NEGDETECT_FIXTURE_DIR; }

inline const negdetect::PreprocessResources& shipped_resources() {
  static const negdetect::PreprocessResources res =
      negdetect::load_preprocess(negdetect::ResourcePaths::in_directory(resource_dir()));
  return res;
}

inline const negdetect::TriggerSet& ots() {
  static const negdetect::TriggerSet set =
      negdetect::load_trigger_set("OTS=" + (resource_dir() / "triggers" / "OTS.tsv").string());
  return set;
}

inline std::string fixture(const std::string& rel) {
  return negdetect::read_file(fixture_dir() / rel);
}

// Sentence with tokens, as preprocess would build it from `text`.
inline negdetect::Sentence sentence_of(const std::string& text) {
  negdetect::Document d = negdetect::preprocess(text, shipped_resources());
  return d.sentences.at(0);
}

}  // namespace testing

#endif  // NEGDETECT_TESTS_UNIT_COMMON_H_

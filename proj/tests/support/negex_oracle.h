#ifndef NEGDETECT_TESTS_NEGEX_ORACLE_H_
#define NEGDETECT_TESTS_NEGEX_ORACLE_H_

// Brute-force restatement of the NegEx scope rules over literal triggers,
// plus a generator of random short sentences for property tests.

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "negdetect/negex.h"

namespace oracle {

struct LiteralTrigger {
  std::vector<std::string> words;  // lowercase
  negdetect::TriggerType type;
};

struct NegexCase {
  std::vector<std::string> words;  // sentence tokens, lowercase
  std::vector<std::pair<std::size_t, std::size_t>> concepts;  // token ranges
  std::vector<LiteralTrigger> triggers;                       // file order
  std::optional<std::size_t> window;
  bool interference_fix = true;

  std::string describe() const;
};

struct Verdict {
  bool negated = false;
  negdetect::TriggerType type = negdetect::TriggerType::kPre;
  std::size_t first = 0;  // trigger token range
  std::size_t last = 0;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

std::vector<Verdict> negex_oracle(const NegexCase& c);

// The same case run through the engine, with sentence, concepts and trigger
// set built from the literal description.
struct EngineInput {
  negdetect::Sentence sentence;
  std::vector<negdetect::ConceptAnnotation> concepts;
  negdetect::TriggerSet set;
  negdetect::NegexConfig cfg;
};
EngineInput engine_input(const NegexCase& c);
std::vector<Verdict> negex_engine(const NegexCase& c);

struct NegexGenOptions {
  std::size_t max_tokens = 12;
  std::size_t max_triggers = 3;
  std::size_t max_concepts = 3;
  bool allow_pseudo = true;
};

NegexCase random_negex_case(std::mt19937& rng, const NegexGenOptions& opts = {});

}  // namespace oracle

#endif  // NEGDETECT_TESTS_NEGEX_ORACLE_H_

#include <random>
#include <set>

#include "doctest.h"
#include "negdetect/error.h"
#include "negdetect/negex.h"
#include "negex_oracle.h"
#include "common.h"

using namespace negdetect;

namespace {

struct Run {
  Document doc;
  Assertion of(const std::string& concept_text) const {
    for (std::size_t i = 0; i < doc.concepts.size(); ++i) {
      if (doc.concepts[i].matched_text == concept_text) return doc.negations[i].assertion;
    }
    FAIL("concept not found: " << concept_text);
    return Assertion::kAffirmed;
  }
  const NegationAnnotation& negation(const std::string& concept_text) const {
    for (std::size_t i = 0; i < doc.concepts.size(); ++i) {
      if (doc.concepts[i].matched_text == concept_text) return doc.negations[i];
    }
    throw std::runtime_error("concept not found");
  }
};

Run run(const std::string& text, std::vector<std::string> concepts, const TriggerSet& set,
        NegexConfig cfg) {
  const auto& res = testing::shipped_resources();
  ConceptDictionary dict;
  for (const auto& c : concepts) dict.insert(c, "c", res.segmenter);
  AnnotateOptions opts;
  opts.triggers = &set;
  opts.negex = cfg;
  return {annotate(text, res, dict, opts)};
}

std::set<std::size_t> negated(const std::vector<oracle::Verdict>& v) {
  std::set<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].negated) out.insert(i);
  }
  return out;
}

}  // namespace

TEST_SUITE("negex") {

TEST_CASE("trigger file parsing") {
  TriggerSet s = parse_trigger_file("keine?\tPRE");
  REQUIRE(s.size() == 1);
  CHECK(s.triggers[0].type == TriggerType::kPre);
  CHECK(s.triggers[0].id == "keine?");

  TriggerSet crlf = parse_trigger_file("# comment\r\n\r\nkein\tPRE\tk1\r\nverneint\tPOST\r\n");
  CHECK(crlf.size() == 2);
  CHECK(crlf.triggers[0].id == "k1");
  CHECK(crlf.count(TriggerType::kPost) == 1);

  try {
    parse_trigger_file("kein\tFOO");
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()) == "unknown trigger type FOO at line 1");
    CHECK(e.line() == 1);
  }
  try {
    parse_trigger_file("kein\tPRE\n(unclosed\tPRE\n");
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_trigger_file("kein\tPRE\tx\nnie\tPRE\tx"), ConfigError);
  CHECK_THROWS_AS(parse_trigger_file("kein"), ConfigError);
}

TEST_CASE("shipped trigger sets") {
  const TriggerSet& ots = testing::ots();
  CHECK(ots.count(TriggerType::kPre) == 17);
  CHECK(ots.count(TriggerType::kPost) == 11);
  CHECK(ots.count(TriggerType::kConj) == 7);
  CHECK(ots.count(TriggerType::kPseudo) == 21);
  CHECK(ots.size() == 56);
  TriggerSet mts = load_trigger_set((testing::resource_dir() / "triggers" / "MTS.tsv").string());
  CHECK(mts.name == "MTS");
  CHECK(mts.size() > 0);
}

TEST_CASE("window parsing") {
  CHECK_FALSE(parse_window("inf").window);
  CHECK_FALSE(parse_window("∞").window);
  CHECK(parse_window("5").window == 5u);
  CHECK(parse_window("100").window == 100u);
  CHECK_THROWS_AS(parse_window("0"), ConfigError);
  CHECK_THROWS_AS(parse_window("101"), ConfigError);
  CHECK_THROWS_AS(parse_window("abc"), ConfigError);
  CHECK(window_label(NegexConfig::with_window(4)) == "4");
}

TEST_CASE("trigger matches") {
  TriggerSet pre = parse_trigger_file("keine?\tPRE");
  auto m = find_trigger_matches(testing::sentence_of("Keine Infektion"), pre);
  REQUIRE(m.size() == 1);
  CHECK(m[0].first == 0);
  CHECK(m[0].span == Span{0, 5});

  TriggerSet ps = parse_trigger_file("kein anstieg\tPSEU\nkeine?\tPRE");
  auto p = find_trigger_matches(testing::sentence_of("kein Anstieg"), ps);
  REQUIRE(p.size() == 1);
  CHECK(p[0].type() == TriggerType::kPseudo);

  TriggerSet wn = parse_trigger_file("weder\tPRE\nnoch\tCONJ");
  auto w = find_trigger_matches(testing::sentence_of("weder Fieber noch Husten"), wn);
  REQUIRE(w.size() == 2);
  CHECK(w[0].type() == TriggerType::kPre);
  CHECK(w[1].type() == TriggerType::kConj);

  // Token-aligned: "kein" must not match inside "keinerlei" or "Keimzahl".
  TriggerSet k = parse_trigger_file("kein\tPRE");
  CHECK(find_trigger_matches(testing::sentence_of("keinerlei Keime"), k).empty());
}

TEST_CASE("scope examples") {
  TriggerSet pre = parse_trigger_file("keine?\tPRE");
  Run r = run("Keine Infektion erkennbar", {"Infektion"}, pre, NegexConfig::with_window(5));
  CHECK(r.of("Infektion") == Assertion::kNegated);
  CHECK(r.negation("Infektion").trigger_text == "Keine");
  CHECK(r.negation("Infektion").source == Source::kNegexPre);

  TriggerSet ps = parse_trigger_file("kein anstieg\tPSEU\nkeine?\tPRE");
  CHECK(run("kein Anstieg der Leukozyten", {"Leukozyten"}, ps, {}).of("Leukozyten") == Assertion::kAffirmed);

  TriggerSet conj = parse_trigger_file("keine?\tPRE\naber\tCONJ");
  Run c = run("kein Fieber aber Husten", {"Fieber", "Husten"}, conj, {});
  CHECK(c.of("Fieber") == Assertion::kNegated);
  CHECK(c.of("Husten") == Assertion::kAffirmed);

  // Concept 4 tokens after the trigger.
  Run w3 = run("Keine Hinweise auf eine Pneumonie", {"Pneumonie"}, pre, NegexConfig::with_window(3));
  Run w5 = run("Keine Hinweise auf eine Pneumonie", {"Pneumonie"}, pre, NegexConfig::with_window(5));
  CHECK(w3.of("Pneumonie") == Assertion::kAffirmed);
  CHECK(w5.of("Pneumonie") == Assertion::kNegated);

  TriggerSet post = parse_trigger_file("verneint\tPOST");
  Run p = run("Fieber verneint", {"Fieber"}, post, {});
  CHECK(p.of("Fieber") == Assertion::kNegated);
  CHECK(p.negation("Fieber").source == Source::kNegexPost);
}

TEST_CASE("interference between a PRE prefix and a POST trigger") {
  TriggerSet set = parse_trigger_file("nicht\tPRE\nnicht nachweisbar\tPOST");
  NegexConfig on = NegexConfig::with_window(5);
  Run a = run("Metastasen nicht nachweisbar", {"Metastasen"}, set, on);
  CHECK(a.of("Metastasen") == Assertion::kNegated);
  CHECK(a.negation("Metastasen").source == Source::kNegexPost);
  CHECK(a.negation("Metastasen").trigger_text == "nicht nachweisbar");
  NegexConfig off = on;
  off.interference_fix = false;
  CHECK(run("Metastasen nicht nachweisbar", {"Metastasen"}, set, off).of("Metastasen") == Assertion::kAffirmed);

  // With the shipped set too.
  Run o = run("Metastasen nicht nachweisbar", {"Metastasen"}, testing::ots(), on);
  CHECK(o.negation("Metastasen").source == Source::kNegexPost);
  // When the PRE covers a concept, it stays.
  Run k = run("Metastasen nicht nachweisbar Fieber", {"Metastasen", "Fieber"}, set, on);
  CHECK(k.of("Fieber") == Assertion::kNegated);
  CHECK(k.negation("Fieber").source == Source::kNegexPre);
}

TEST_CASE("nearest trigger is recorded") {
  TriggerSet set = parse_trigger_file("kein\tPRE\nohne\tPRE");
  Run r = run("kein Hinweis ohne Fieber", {"Fieber"}, set, {});
  CHECK(r.negation("Fieber").trigger_text == "ohne");
}

TEST_CASE("sentence isolation and document composition") {
  const auto& res = testing::shipped_resources();
  AnnotateOptions opts;
  opts.triggers = &testing::ots();
  Document d = annotate("Kein Fieber. Husten seit gestern.", res, opts);
  REQUIRE(d.concepts.size() == 2);
  CHECK(d.negations[0].assertion == Assertion::kNegated);
  CHECK(d.negations[1].assertion == Assertion::kAffirmed);

  CHECK(classify_document({}, {}, testing::ots(), {}).empty());

  std::string text =
      "Kein Fieber, aber Husten. Metastasen nicht nachweisbar. Kein Anstieg der Leukozyten.\n\n"
      "Ohne Übelkeit und Erbrechen. Dyspnoe verneint.";
  Document pre = preprocess(text, res);
  for (auto window : {std::optional<std::size_t>{}, std::optional<std::size_t>{3}}) {
    NegexConfig cfg;
    cfg.window = window;
    auto whole = classify_document(pre.sentences, pre.concepts, testing::ots(), cfg);
    std::vector<NegationAnnotation> parts;
    for (std::size_t s = 0; s < pre.sentences.size(); ++s) {
      std::vector<ConceptAnnotation> mine;
      std::size_t offset = parts.size();
      for (const auto& c : pre.concepts) {
        if (c.sentence == s) mine.push_back(c);
      }
      for (auto& n : apply_negex(pre.sentences[s], mine, testing::ots(), cfg, offset)) parts.push_back(n);
    }
    CHECK(whole == parts);
  }
}

TEST_CASE("engine agrees with the scope oracle") {
  std::mt19937 rng(20240601);
  int with_negation = 0, with_post = 0;
  for (int i = 0; i < 1500; ++i) {
    oracle::NegexCase c = oracle::random_negex_case(rng);
    INFO(c.describe());
    auto v = oracle::negex_engine(c);
    REQUIRE(v == oracle::negex_oracle(c));
    bool any = false, post = false;
    for (const auto& x : v) {
      any |= x.negated;
      post |= x.negated && x.type == TriggerType::kPost;
    }
    with_negation += any;
    with_post += post;
  }
  // The generator must exercise both directions, not just trivial cases.
  CHECK(with_negation > 150);
  CHECK(with_post > 50);
}

TEST_CASE("oracle spot checks") {
  using oracle::LiteralTrigger;
  oracle::NegexCase c;
  c.words = {"kein", "a", "b", "c", "fieber"};
  c.concepts = {{4, 4}};
  c.triggers = {LiteralTrigger{{"kein"}, TriggerType::kPre}};
  c.window = 3;
  CHECK_FALSE(oracle::negex_oracle(c)[0].negated);
  c.window = 4;
  CHECK(oracle::negex_oracle(c)[0].negated);
  CHECK(oracle::negex_engine(c) == oracle::negex_oracle(c));
}

TEST_CASE("negations only grow with the window") {
  std::mt19937 rng(99);
  for (int i = 0; i < 300; ++i) {
    oracle::NegexCase c = oracle::random_negex_case(rng);
    std::set<std::size_t> prev;
    for (std::size_t w = 1; w <= 13; ++w) {
      if (w == 13) c.window.reset(); else c.window = w;
      auto now = negated(oracle::negex_engine(c));
      INFO(c.describe());
      CHECK(std::includes(now.begin(), now.end(), prev.begin(), prev.end()));
      prev = now;
    }
  }
}

TEST_CASE("a pseudo trigger at a PRE start never adds negations") {
  std::mt19937 rng(4242);
  oracle::NegexGenOptions opts;
  opts.allow_pseudo = false;
  int tried = 0;
  for (int i = 0; i < 800; ++i) {
    oracle::NegexCase c = oracle::random_negex_case(rng, opts);
    for (const auto& t : c.triggers) {
      if (t.type != TriggerType::kPre) continue;
      for (std::size_t p = 0; p + t.words.size() < c.words.size(); ++p) {
        if (!std::equal(t.words.begin(), t.words.end(), c.words.begin() + p)) continue;
        oracle::NegexCase d = c;
        auto words = t.words;
        words.push_back(c.words[p + t.words.size()]);
        bool known = false;
        for (const auto& u : c.triggers) known |= u.words == words;
        if (known) continue;
        d.triggers.push_back({words, TriggerType::kPseudo});
        INFO(d.describe());
        CHECK(negated(oracle::negex_engine(d)).size() <= negated(oracle::negex_engine(c)).size());
        ++tried;
      }
    }
  }
  CHECK(tried > 100);
}

TEST_CASE("annotation is deterministic") {
  std::mt19937 rng(8);
  for (int i = 0; i < 200; ++i) {
    oracle::NegexCase c = oracle::random_negex_case(rng);
    auto in = oracle::engine_input(c);
    auto a = apply_negex(in.sentence, in.concepts, in.set, in.cfg);
    auto b = apply_negex(in.sentence, in.concepts, in.set, in.cfg);
    CHECK(a == b);
  }
}

}

#include "json_shape.h"

#include <set>

#include "negdetect/unicode.h"

namespace oracle {

using nlohmann::json;

namespace {

struct Checker {
  std::vector<std::string> errors;

  void fail(const std::string& where, const std::string& what) { errors.push_back(where + ": " + what); }

  bool keys(const json& j, const std::string& where, std::set<std::string> expected) {
    if (!j.is_object()) {
      fail(where, "not an object");
      return false;
    }
    std::set<std::string> got;
    for (const auto& [k, v] : j.items()) got.insert(k);
    if (got != expected) {
      fail(where, "fields " + json(got).dump() + " expected " + json(expected).dump());
      return false;
    }
    return true;
  }

  bool span(const json& j, const std::string& where, std::size_t text_len) {
    if (!keys(j, where, {"begin", "end"})) return false;
    if (!j["begin"].is_number_unsigned() || !j["end"].is_number_unsigned()) {
      fail(where, "offsets must be non-negative integers");
      return false;
    }
    auto b = j["begin"].get<std::size_t>(), e = j["end"].get<std::size_t>();
    if (b > e || e > text_len) {
      fail(where, "bad range");
      return false;
    }
    return true;
  }
};

}  // namespace

std::vector<std::string> document_shape_errors(const json& doc) {
  Checker c;
  if (!c.keys(doc, "document", {"text", "sentences", "concepts"})) return c.errors;
  if (!doc["text"].is_string()) {
    c.fail("text", "not a string");
    return c.errors;
  }
  const std::string text = doc["text"];
  const std::size_t len = negdetect::unicode::length(text);
  auto at = [&](const json& s) {
    return negdetect::unicode::slice(text, s["begin"].get<std::size_t>(), s["end"].get<std::size_t>());
  };

  if (!doc["sentences"].is_array()) c.fail("sentences", "not an array");
  for (std::size_t i = 0; doc["sentences"].is_array() && i < doc["sentences"].size(); ++i) {
    const json& s = doc["sentences"][i];
    std::string w = "sentences[" + std::to_string(i) + "]";
    if (!c.keys(s, w, {"span", "tokens"})) continue;
    c.span(s["span"], w + ".span", len);
    if (!s["tokens"].is_array()) {
      c.fail(w, "tokens not an array");
      continue;
    }
    for (std::size_t k = 0; k < s["tokens"].size(); ++k) {
      const json& t = s["tokens"][k];
      std::string tw = w + ".tokens[" + std::to_string(k) + "]";
      if (!c.keys(t, tw, {"span", "text", "lowercased", "is_stopword", "compound_parts"})) continue;
      if (!t["text"].is_string() || !t["lowercased"].is_string() || !t["is_stopword"].is_boolean() ||
          !t["compound_parts"].is_array()) {
        c.fail(tw, "wrong value types");
        continue;
      }
      for (const json& p : t["compound_parts"]) {
        if (!p.is_string()) c.fail(tw, "compound part not a string");
      }
      if (c.span(t["span"], tw + ".span", len) && at(t["span"]) != t["text"].get<std::string>()) {
        c.fail(tw, "text differs from the document at its span");
      }
    }
  }

  if (!doc["concepts"].is_array()) c.fail("concepts", "not an array");
  for (std::size_t i = 0; doc["concepts"].is_array() && i < doc["concepts"].size(); ++i) {
    const json& x = doc["concepts"][i];
    std::string w = "concepts[" + std::to_string(i) + "]";
    if (!c.keys(x, w, {"span", "category", "assertion", "trigger"})) continue;
    c.span(x["span"], w + ".span", len);
    if (!x["category"].is_string()) c.fail(w, "category not a string");
    if (x["assertion"] != "Affirmed" && x["assertion"] != "Negated") c.fail(w, "bad assertion");
    const json& t = x["trigger"];
    if (t.is_null()) {
      if (x["assertion"] == "Negated") c.fail(w, "negated concept without trigger");
      continue;
    }
    if (!c.keys(t, w + ".trigger", {"source", "rule", "span", "text"})) continue;
    static const std::set<std::string> sources = {"NegexPre", "NegexPost", "DepPatternNeg",
                                                  "DepPatternPosCorrection"};
    if (!t["source"].is_string() || !sources.count(t["source"].get<std::string>())) {
      c.fail(w, "bad trigger source");
    }
    if (!t["rule"].is_string() || !t["text"].is_string()) c.fail(w, "trigger rule/text not strings");
    if (c.span(t["span"], w + ".trigger.span", len) && t["text"].is_string() &&
        at(t["span"]) != t["text"].get<std::string>()) {
      c.fail(w, "trigger text differs from the document at its span");
    }
  }
  return c.errors;
}

}  // namespace oracle

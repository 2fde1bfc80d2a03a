#ifndef NEGDETECT_DEPPAT_H_
#define NEGDETECT_DEPPAT_H_

// Dependency graphs read from CoNLL-U and a Semgrex-style pattern language
// over them. NEG patterns add negations, POS patterns correct false ones.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "negdetect/textmodel.h"
#include "negdetect/unicode.h"

namespace negdetect {

// --- graphs --------------------------------------------------------------------

struct DepNode {
  std::size_t index = 0;  // 1-based
  std::string form;       // surface form as written
  std::string word;       // lowercased form
  std::string lemma;      // lowercased lemma
  std::string pos;
};

struct DepEdge {
  std::size_t governor = 0;
  std::size_t dependent = 0;
  std::string label;

  friend bool operator==(const DepEdge&, const DepEdge&) = default;
};

class DependencyGraph {
 public:
  DependencyGraph() = default;
  // Throws Error if an edge endpoint is out of range or a node has two heads.
  DependencyGraph(std::vector<DepNode> nodes, std::vector<DepEdge> edges);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<DepNode>& nodes() const { return nodes_; }
  const std::vector<DepEdge>& edges() const { return edges_; }
  const DepNode& node(std::size_t index) const { return nodes_.at(index - 1); }

  const std::vector<std::size_t>& out_edges(std::size_t index) const { return out_.at(index - 1); }
  const std::vector<std::size_t>& in_edges(std::size_t index) const { return in_.at(index - 1); }

  // "# text = ..." comment when present, otherwise forms joined by spaces.
  std::string text;

 private:
  std::vector<DepNode> nodes_;
  std::vector<DepEdge> edges_;
  std::vector<std::vector<std::size_t>> out_;  // edge indices per node
  std::vector<std::vector<std::size_t>> in_;
};

// 10 TAB-separated columns per token line, blank lines between sentences,
// "#" comments. Multiword-token ("1-2") and empty-node ("1.1") lines are
// skipped. Throws ParseError with the 1-based line number.
std::vector<DependencyGraph> parse_conllu(std::string_view content);

// Node i of the graph is token i-1 of the sentence; throws Error when the
// counts differ.
void check_alignment(const DependencyGraph& g, const Sentence& sentence);

nlohmann::json to_json(const DependencyGraph& g);

// --- patterns ------------------------------------------------------------------

enum class PatternKind { kNeg, kPos };
std::string_view to_string(PatternKind k);

// /regex/ (full-string match) or a bare string (exact match).
struct ValueMatcher {
  bool is_regex = false;
  std::string text;
  unicode::Regex regex;

  bool matches(std::string_view value) const;
};

enum class NodeAttr { kWord, kLemma, kPos };
std::string_view to_string(NodeAttr a);

struct AttrConstraint {
  NodeAttr attr = NodeAttr::kWord;
  ValueMatcher value;
};

struct NodeSpec {
  bool negated = false;
  std::vector<AttrConstraint> constraints;
  std::optional<std::string> binding;

  // All constraints hold, flipped when negated. "{}" matches every node.
  bool matches(const DepNode& node) const;
};

enum class RelationDir {
  kGovernorOf,       // a > b: edge a -> b
  kDependentOf,      // a < b: edge b -> a
  kChainGovernorOf,  // a >> b: path a -> ... -> b
};

struct RelationOp {
  RelationDir dir = RelationDir::kGovernorOf;
  std::optional<ValueMatcher> label;  // absent: any label
  bool negated_existence = false;
};

struct Relation;

struct PatternNode {
  NodeSpec spec;
  std::vector<Relation> relations;
};

struct Relation {
  RelationOp op;
  PatternNode child;
};

struct GraphPattern {
  PatternNode root;
  PatternKind kind = PatternKind::kNeg;
  std::string source_text;
};

// NODE := '!'? '{' (attr ':' value (';' attr ':' value)*)? '}' ('=' name)?
// REL  := '!'? ('<' | '>' | '>>') value?
// PAT  := NODE (REL (NODE | '(' PAT ')'))*
// Throws ParseError with a code point offset on syntax errors, duplicate
// binding names and NEG patterns without gov/dep bindings.
GraphPattern parse_pattern(std::string_view text, PatternKind kind);

// Canonical text form; parse_pattern(unparse(p)) reproduces p.
std::string unparse(const GraphPattern& p);

// "pattern TAB NEG|POS" per line, "#" comments.
std::vector<GraphPattern> parse_pattern_file(std::string_view content);

struct PatternMatch {
  std::size_t root = 0;  // graph node matched by the pattern root
  std::map<std::string, std::size_t> bindings;
  const GraphPattern* pattern = nullptr;

  friend bool operator==(const PatternMatch& a, const PatternMatch& b) {
    return a.root == b.root && a.bindings == b.bindings;
  }
};

enum class ChainLabel {
  kFirstEdge,  // the first edge of the chain carries the label
  kAnyEdge,    // some edge on the chain carries the label
};

struct MatchOptions {
  ChainLabel chain_label = ChainLabel::kFirstEdge;
};

// All distinct (root, bindings) assignments, sorted by gov index, then dep
// index, then root, then the remaining bindings.
std::vector<PatternMatch> match_pattern(const GraphPattern& p, const DependencyGraph& g,
                                        const MatchOptions& opts = {});

nlohmann::json to_json(const PatternMatch& m);

struct ApplyOptions {
  MatchOptions match;
  // A dep-bound node also covers its conjuncts (nodes reached through
  // "conj" edges), so one match negates "Fieber und Schwindel".
  bool propagate_conj = true;
};

// NEG matches first, then POS matches (which win). `annotations` holds one
// entry per concept; concept_index - concept_offset indexes `concepts`.
std::vector<NegationAnnotation> apply_pattern_set(
    std::span<const GraphPattern> patterns, const DependencyGraph& g,
    const Sentence& sentence, std::span<const ConceptAnnotation> concepts,
    std::vector<NegationAnnotation> annotations, const ApplyOptions& opts = {},
    std::size_t concept_offset = 0);

}  // namespace negdetect

#endif  // NEGDETECT_DEPPAT_H_

#include "negdetect/deppat.h"

#include <set>

namespace negdetect {

namespace {

// `start` plus every node reachable from it over "conj" edges.
std::set<std::size_t> with_conjuncts(const DependencyGraph& g, std::size_t start) {
  std::set<std::size_t> out{start};
  std::vector<std::size_t> stack{start};
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t e : g.out_edges(v)) {
      const DepEdge& edge = g.edges()[e];
      if ((edge.label == "conj" || edge.label.starts_with("conj:")) &&
          out.insert(edge.dependent).second) {
        stack.push_back(edge.dependent);
      }
    }
  }
  return out;
}

}  // namespace

std::vector<NegationAnnotation> apply_pattern_set(
    std::span<const GraphPattern> patterns, const DependencyGraph& g,
    const Sentence& sentence, std::span<const ConceptAnnotation> concepts,
    std::vector<NegationAnnotation> annotations, const ApplyOptions& opts,
    std::size_t concept_offset) {
  check_alignment(g, sentence);

  auto node_span = [&](std::size_t index) { return sentence.tokens[index - 1].span; };
  auto node_text = [&](std::size_t index) { return sentence.tokens[index - 1].text; };

  for (PatternKind kind : {PatternKind::kNeg, PatternKind::kPos}) {
    for (const GraphPattern& p : patterns) {
      if (p.kind != kind) continue;
      for (const PatternMatch& m : match_pattern(p, g, opts.match)) {
        std::set<std::size_t> targets;
        for (const auto& [name, index] : m.bindings) {
          if (!name.starts_with("dep")) continue;
          if (opts.propagate_conj) {
            for (std::size_t v : with_conjuncts(g, index)) targets.insert(v);
          } else {
            targets.insert(index);
          }
        }
        auto gov = m.bindings.find("gov");
        for (NegationAnnotation& a : annotations) {
          const ConceptAnnotation& c = concepts[a.concept_index - concept_offset];
          bool hit = false;
          for (std::size_t v : targets) hit = hit || span_overlaps(node_span(v), c.span);
          if (!hit) continue;
          a.assertion = kind == PatternKind::kNeg ? Assertion::kNegated : Assertion::kAffirmed;
          a.source = kind == PatternKind::kNeg ? Source::kDepPatternNeg
                                               : Source::kDepPatternPosCorrection;
          if (gov != m.bindings.end()) {
            a.trigger_span = node_span(gov->second);
            a.trigger_text = node_text(gov->second);
          } else {
            a.trigger_span.reset();
            a.trigger_text.reset();
          }
          a.rule = p.source_text;
        }
      }
    }
  }
  return annotations;
}

}  // namespace negdetect

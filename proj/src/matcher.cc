#include "negdetect/deppat.h"

#include <algorithm>
#include <set>
#include <tuple>

namespace negdetect {

namespace {

using Bindings = std::map<std::string, std::size_t>;

bool label_ok(const RelationOp& op, const std::string& label) {
  return !op.label || op.label->matches(label);
}

// Graph nodes b such that `a op b` holds.
std::vector<std::size_t> related_nodes(const DependencyGraph& g, std::size_t a,
                                       const RelationOp& op, const MatchOptions& opts) {
  std::vector<std::size_t> out;
  switch (op.dir) {
    case RelationDir::kGovernorOf:
      for (std::size_t e : g.out_edges(a)) {
        if (label_ok(op, g.edges()[e].label)) out.push_back(g.edges()[e].dependent);
      }
      break;
    case RelationDir::kDependentOf:
      for (std::size_t e : g.in_edges(a)) {
        if (label_ok(op, g.edges()[e].label)) out.push_back(g.edges()[e].governor);
      }
      break;
    case RelationDir::kChainGovernorOf: {
      // Search states are (node, labelled edge seen); with kFirstEdge only
      // the first step may set the flag and an unlabelled first step is a
      // dead end.
      std::set<std::pair<std::size_t, bool>> seen;
      std::vector<std::pair<std::size_t, bool>> stack{{a, false}};
      std::set<std::size_t> reached;
      bool first_step = true;
      while (!stack.empty()) {
        auto [v, flag] = stack.back();
        stack.pop_back();
        bool from_root = first_step;
        first_step = false;
        for (std::size_t e : g.out_edges(v)) {
          const DepEdge& edge = g.edges()[e];
          bool next_flag = flag;
          if (opts.chain_label == ChainLabel::kFirstEdge) {
            if (from_root) {
              if (!label_ok(op, edge.label)) continue;
              next_flag = true;
            }
          } else {
            next_flag = flag || label_ok(op, edge.label);
          }
          if (!seen.insert({edge.dependent, next_flag}).second) continue;
          if (next_flag) reached.insert(edge.dependent);
          stack.emplace_back(edge.dependent, next_flag);
        }
      }
      out.assign(reached.begin(), reached.end());
      break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Bindings> match_at(const PatternNode& pn, const DependencyGraph& g,
                               std::size_t v, const MatchOptions& opts) {
  if (!pn.spec.matches(g.node(v))) return {};
  std::vector<Bindings> results(1);
  if (pn.spec.binding) results.front()[*pn.spec.binding] = v;

  for (const Relation& rel : pn.relations) {
    std::vector<std::size_t> candidates = related_nodes(g, v, rel.op, opts);
    if (rel.op.negated_existence) {
      for (std::size_t b : candidates) {
        if (!match_at(rel.child, g, b, opts).empty()) return {};
      }
      continue;
    }
    std::vector<Bindings> sub;
    for (std::size_t b : candidates) {
      for (Bindings& m : match_at(rel.child, g, b, opts)) sub.push_back(std::move(m));
    }
    if (sub.empty()) return {};
    std::vector<Bindings> merged;
    for (const Bindings& left : results) {
      for (const Bindings& right : sub) {
        Bindings m = left;
        m.insert(right.begin(), right.end());
        merged.push_back(std::move(m));
      }
    }
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    results = std::move(merged);
  }
  return results;
}

std::size_t binding_or_zero(const Bindings& b, const std::string& name) {
  auto it = b.find(name);
  return it == b.end() ? 0 : it->second;
}

}  // namespace

std::vector<PatternMatch> match_pattern(const GraphPattern& p, const DependencyGraph& g,
                                        const MatchOptions& opts) {
  std::vector<PatternMatch> out;
  for (std::size_t v = 1; v <= g.size(); ++v) {
    for (Bindings& b : match_at(p.root, g, v, opts)) {
      PatternMatch m;
      m.root = v;
      m.bindings = std::move(b);
      m.pattern = &p;
      out.push_back(std::move(m));
    }
  }
  auto key = [](const PatternMatch& m) {
    return std::make_tuple(binding_or_zero(m.bindings, "gov"),
                           binding_or_zero(m.bindings, "dep"), m.root, m.bindings);
  };
  std::sort(out.begin(), out.end(),
            [&](const PatternMatch& a, const PatternMatch& b) { return key(a) < key(b); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

nlohmann::json to_json(const PatternMatch& m) {
  nlohmann::json bindings = nlohmann::json::object();
  for (const auto& [name, index] : m.bindings) bindings[name] = index;
  nlohmann::json j = {{"root", m.root}, {"bindings", std::move(bindings)}};
  if (m.pattern) j["pattern"] = m.pattern->source_text;
  return j;
}

}  // namespace negdetect

#include "matcher_oracle.h"

#include <algorithm>
#include <functional>
#include <regex>

namespace oracle {

using namespace negdetect;

namespace {

struct Flat {
  const PatternNode* node;
  int parent;  // -1 for the root
  const RelationOp* op;  // relation from the parent
  bool negated_scope;
};

void flatten(const PatternNode& n, int parent, const RelationOp* op, bool negated,
             std::vector<Flat>& out) {
  out.push_back({&n, parent, op, negated});
  int self = static_cast<int>(out.size()) - 1;
  for (const Relation& r : n.relations) {
    flatten(r.child, self, &r.op, negated || r.op.negated_existence, out);
  }
}

bool value_ok(const ValueMatcher& v, const std::string& s) {
  if (!v.is_regex) return s == v.text;
  return std::regex_match(s, std::regex(v.text));
}

bool spec_ok(const NodeSpec& spec, const DepNode& n) {
  bool all = true;
  for (const AttrConstraint& c : spec.constraints) {
    const std::string& s = c.attr == NodeAttr::kWord ? n.word : c.attr == NodeAttr::kLemma ? n.lemma : n.pos;
    if (!value_ok(c.value, s)) all = false;
  }
  return spec.negated ? !all : all;
}

struct Graph {
  const DependencyGraph& g;
  std::vector<std::vector<bool>> reach;  // path of length >= 1

  explicit Graph(const DependencyGraph& graph) : g(graph) {
    std::size_t n = g.size();
    reach.assign(n + 1, std::vector<bool>(n + 1, false));
    for (const DepEdge& e : g.edges()) reach[e.governor][e.dependent] = true;
    for (std::size_t k = 1; k <= n; ++k) {
      for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
          if (reach[i][k] && reach[k][j]) reach[i][j] = true;
        }
      }
    }
  }

  bool label_ok(const RelationOp& op, const std::string& label) const {
    return !op.label || value_ok(*op.label, label);
  }

  bool holds(const RelationOp& op, std::size_t a, std::size_t b, ChainLabel chain) const {
    for (const DepEdge& e : g.edges()) {
      if (!label_ok(op, e.label)) continue;
      switch (op.dir) {
        case RelationDir::kGovernorOf:
          if (e.governor == a && e.dependent == b) return true;
          break;
        case RelationDir::kDependentOf:
          if (e.governor == b && e.dependent == a) return true;
          break;
        case RelationDir::kChainGovernorOf:
          if (chain == ChainLabel::kFirstEdge) {
            if (e.governor == a && (e.dependent == b || reach[e.dependent][b])) return true;
          } else {
            if ((e.governor == a || reach[a][e.governor]) &&
                (e.dependent == b || reach[e.dependent][b])) {
              return true;
            }
          }
          break;
      }
    }
    return false;
  }
};

}  // namespace

std::set<Binding> matcher_oracle(const GraphPattern& p, const DependencyGraph& g, ChainLabel chain) {
  std::vector<Flat> flat;
  flatten(p.root, -1, nullptr, false, flat);
  Graph graph(g);
  const std::size_t n = g.size();

  auto ancestor_path_negated = [&](std::size_t i, std::size_t top) {
    // True when i lies below top and some relation strictly between them
    // (excluding top's own) is negated.
    for (int a = static_cast<int>(i); a >= 0 && static_cast<std::size_t>(a) != top; a = flat[a].parent) {
      if (flat[a].op && flat[a].op->negated_existence) return true;
    }
    return false;
  };
  auto below = [&](std::size_t i, std::size_t top) {
    for (int a = static_cast<int>(i); a >= 0; a = flat[a].parent) {
      if (static_cast<std::size_t>(a) == top) return true;
    }
    return false;
  };

  // Does some assignment of the subtree under the negated relation into
  // `top` exist, given the node its parent is bound to?
  std::function<bool(std::size_t, std::size_t)> subtree_exists = [&](std::size_t top,
                                                                     std::size_t parent_node) {
    std::vector<std::size_t> members, nested;
    for (std::size_t i = top; i < flat.size() && below(i, top); ++i) {
      if (i == top || !ancestor_path_negated(i, top)) {
        members.push_back(i);
      } else if (flat[i].op->negated_existence &&
                 !ancestor_path_negated(static_cast<std::size_t>(flat[i].parent), top)) {
        nested.push_back(i);
      }
    }
    std::vector<std::size_t> assign(flat.size(), 0);
    assign[flat[top].parent] = parent_node;
    std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
      if (k == members.size()) {
        for (std::size_t i : members) {
          if (!spec_ok(flat[i].node->spec, g.node(assign[i]))) return false;
          if (!graph.holds(*flat[i].op, assign[flat[i].parent], assign[i], chain)) return false;
        }
        for (std::size_t i : nested) {
          if (subtree_exists(i, assign[flat[i].parent])) return false;
        }
        return true;
      }
      for (std::size_t v = 1; v <= n; ++v) {
        assign[members[k]] = v;
        if (rec(k + 1)) return true;
      }
      return false;
    };
    return rec(0);
  };

  std::set<Binding> out;
  if (n == 0) return out;
  std::vector<std::size_t> positive;
  for (std::size_t i = 0; i < flat.size(); ++i) {
    if (!flat[i].negated_scope) positive.push_back(i);
  }
  std::vector<std::size_t> assign(flat.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == positive.size()) {
      for (std::size_t i : positive) {
        const Flat& f = flat[i];
        if (!spec_ok(f.node->spec, g.node(assign[i]))) return;
        if (f.parent >= 0 && !graph.holds(*f.op, assign[f.parent], assign[i], chain)) return;
      }
      for (std::size_t i = 0; i < flat.size(); ++i) {
        const Flat& f = flat[i];
        if (f.parent < 0 || !f.op->negated_existence || flat[f.parent].negated_scope) continue;
        if (subtree_exists(i, assign[f.parent])) return;
      }
      Binding b;
      b.first = assign[0];
      for (std::size_t i : positive) {
        if (flat[i].node->spec.binding) b.second[*flat[i].node->spec.binding] = assign[i];
      }
      out.insert(b);
      return;
    }
    for (std::size_t v = 1; v <= n; ++v) {
      assign[positive[k]] = v;
      rec(k + 1);
    }
  };
  rec(0);
  return out;
}

std::set<Binding> as_set(const std::vector<PatternMatch>& ms) {
  std::set<Binding> out;
  for (const PatternMatch& m : ms) out.insert({m.root, m.bindings});
  return out;
}

DependencyGraph random_graph(std::mt19937& rng, std::size_t max_nodes) {
  static const std::vector<std::string> words = {"fieber", "nicht", "kein", "ist", "husten", "ausgeschlossen"};
  static const std::vector<std::string> pos = {"NN", "PTKNEG", "VVPP", "ADJD"};
  static const std::vector<std::string> labels = {"nsubj", "nsubj:pass", "neg", "conj", "obj", "advmod"};
  auto pick = [&](std::size_t k) { return std::uniform_int_distribution<std::size_t>(0, k - 1)(rng); };

  std::size_t n = 1 + pick(max_nodes);
  std::vector<DepNode> nodes;
  for (std::size_t i = 1; i <= n; ++i) {
    DepNode d;
    d.index = i;
    d.word = words[pick(words.size())];
    d.form = d.word;
    d.lemma = pick(3) == 0 ? words[pick(words.size())] : d.word;
    d.pos = pos[pick(pos.size())];
    nodes.push_back(d);
  }
  // Heads follow a random order so trees are not always left-branching.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i + 1;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<DepEdge> edges;
  for (std::size_t k = 1; k < n; ++k) {
    if (pick(5) == 0) continue;  // another root
    std::size_t head = order[pick(k)];
    edges.push_back({head, order[k], labels[pick(labels.size())]});
  }
  return DependencyGraph(std::move(nodes), std::move(edges));
}

namespace {

std::string random_value(std::mt19937& rng, const std::vector<std::string>& vocab) {
  auto pick = [&](std::size_t k) { return std::uniform_int_distribution<std::size_t>(0, k - 1)(rng); };
  switch (pick(4)) {
    case 0: return vocab[pick(vocab.size())];
    case 1: return "/" + vocab[pick(vocab.size())] + "|" + vocab[pick(vocab.size())] + "/";
    case 2: return "/" + vocab[pick(vocab.size())].substr(0, 2) + ".*/";
    default: return "/" + vocab[pick(vocab.size())] + "/";
  }
}

std::string random_node(std::mt19937& rng, std::size_t& next_binding) {
  static const std::vector<std::string> words = {"fieber", "nicht", "kein", "ist", "husten", "ausgeschlossen"};
  static const std::vector<std::string> pos = {"NN", "PTKNEG", "VVPP", "ADJD"};
  auto pick = [&](std::size_t k) { return std::uniform_int_distribution<std::size_t>(0, k - 1)(rng); };
  std::string s = pick(7) == 0 ? "!{" : "{";
  std::size_t n_constraints = pick(3);
  for (std::size_t i = 0; i < n_constraints; ++i) {
    if (i) s += ";";
    switch (pick(3)) {
      case 0: s += "word:" + random_value(rng, words); break;
      case 1: s += "lemma:" + random_value(rng, words); break;
      default: s += "pos:" + random_value(rng, pos); break;
    }
  }
  s += "}";
  if (pick(10) < 7) s += "=n" + std::to_string(next_binding++);
  return s;
}

std::string random_relation(std::mt19937& rng) {
  static const std::vector<std::string> labels = {"nsubj", "nsubj:pass", "neg", "conj", "obj", "advmod"};
  auto pick = [&](std::size_t k) { return std::uniform_int_distribution<std::size_t>(0, k - 1)(rng); };
  std::string s = pick(5) == 0 ? "!" : "";
  const char* ops[] = {">", "<", ">>"};
  s += ops[pick(3)];
  switch (pick(5)) {
    case 0: break;
    case 1: s += " " + labels[pick(labels.size())]; break;
    case 2: s += " /nsubj.*/"; break;
    case 3: s += " /" + labels[pick(labels.size())] + "|" + labels[pick(labels.size())] + "/"; break;
    default: s += " /" + labels[pick(labels.size())] + "/"; break;
  }
  return s;
}

std::string random_subpattern(std::mt19937& rng, std::size_t& budget, std::size_t& next_binding) {
  auto pick = [&](std::size_t k) { return std::uniform_int_distribution<std::size_t>(0, k - 1)(rng); };
  std::string s = random_node(rng, next_binding);
  std::size_t rels = budget == 0 ? 0 : pick(budget + 1);
  for (std::size_t i = 0; i < rels && budget > 0; ++i) {
    --budget;
    s += " " + random_relation(rng) + " ";
    if (budget > 0 && pick(3) == 0) {
      s += "(" + random_subpattern(rng, budget, next_binding) + ")";
    } else {
      s += random_node(rng, next_binding);
    }
  }
  return s;
}

}  // namespace

std::string random_pattern(std::mt19937& rng, std::size_t max_relations) {
  std::size_t budget = std::uniform_int_distribution<std::size_t>(0, max_relations)(rng);
  std::size_t next_binding = 0;
  return random_subpattern(rng, budget, next_binding);
}

DependencyGraph permute(const DependencyGraph& g, const std::vector<std::size_t>& perm) {
  std::vector<DepNode> nodes(g.size());
  for (const DepNode& n : g.nodes()) {
    DepNode m = n;
    m.index = perm[n.index - 1];
    nodes[m.index - 1] = m;
  }
  std::vector<DepEdge> edges;
  for (const DepEdge& e : g.edges()) {
    edges.push_back({perm[e.governor - 1], perm[e.dependent - 1], e.label});
  }
  return DependencyGraph(std::move(nodes), std::move(edges));
}

}  // namespace oracle

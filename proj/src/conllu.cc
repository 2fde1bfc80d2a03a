#include "negdetect/deppat.h"

#include <algorithm>
#include <charconv>

#include "negdetect/error.h"

namespace negdetect {

DependencyGraph::DependencyGraph(std::vector<DepNode> nodes, std::vector<DepEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  const std::size_t n = nodes_.size();
  out_.resize(n);
  in_.resize(n);
  for (std::size_t i = 0; i < n; ++i) nodes_[i].index = i + 1;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const DepEdge& edge = edges_[e];
    if (edge.governor < 1 || edge.governor > n || edge.dependent < 1 || edge.dependent > n) {
      throw Error("edge endpoint out of range: " + std::to_string(edge.governor) + " -> " +
                  std::to_string(edge.dependent));
    }
    if (!in_[edge.dependent - 1].empty()) {
      throw Error("node " + std::to_string(edge.dependent) + " has more than one head");
    }
    out_[edge.governor - 1].push_back(e);
    in_[edge.dependent - 1].push_back(e);
  }
  for (const DepNode& node : nodes_) {
    if (!text.empty()) text.push_back(' ');
    text += node.form;
  }
}

namespace {

bool parse_index(std::string_view s, std::size_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

struct PendingToken {
  std::size_t id;
  std::size_t head;
  std::size_t line;
  DepNode node;
  std::string label;
};

DependencyGraph build(std::vector<PendingToken>& tokens, const std::string& text) {
  std::sort(tokens.begin(), tokens.end(),
            [](const PendingToken& a, const PendingToken& b) { return a.id < b.id; });
  std::vector<DepNode> nodes;
  std::vector<DepEdge> edges;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].id != i + 1) {
      throw ParseError("token ids must run 1..n, found " + std::to_string(tokens[i].id) +
                           " at line " + std::to_string(tokens[i].line),
                       tokens[i].line, 0);
    }
  }
  for (const PendingToken& t : tokens) {
    if (t.head > tokens.size()) {
      throw ParseError("HEAD " + std::to_string(t.head) + " out of range at line " +
                           std::to_string(t.line),
                       t.line, 0);
    }
    if (t.head == t.id) {
      throw ParseError("token " + std::to_string(t.id) + " is its own head at line " +
                           std::to_string(t.line),
                       t.line, 0);
    }
    nodes.push_back(t.node);
    if (t.head > 0) edges.push_back(DepEdge{t.head, t.id, t.label});
  }
  DependencyGraph g(std::move(nodes), std::move(edges));
  if (!text.empty()) g.text = text;
  return g;
}

}  // namespace

std::vector<DependencyGraph> parse_conllu(std::string_view content) {
  std::vector<DependencyGraph> graphs;
  std::vector<PendingToken> pending;
  std::string text;
  std::size_t lineno = 0;
  auto flush = [&] {
    if (!pending.empty()) graphs.push_back(build(pending, text));
    pending.clear();
    text.clear();
  };

  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t nl = content.find('\n', start);
    std::string_view line = content.substr(
        start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? content.size() : nl + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      flush();
      continue;
    }
    if (line.front() == '#') {
      constexpr std::string_view kText = "# text = ";
      if (line.starts_with(kText)) text = std::string(line.substr(kText.size()));
      continue;
    }

    std::vector<std::string_view> cols;
    for (std::size_t b = 0;;) {
      std::size_t tab = line.find('\t', b);
      cols.push_back(line.substr(b, tab == std::string_view::npos ? std::string_view::npos : tab - b));
      if (tab == std::string_view::npos) break;
      b = tab + 1;
    }
    const std::string at = " at line " + std::to_string(lineno);
    if (cols.size() != 10) {
      throw ParseError("expected 10 columns, found " + std::to_string(cols.size()) + at,
                       lineno, 0);
    }
    if (cols[0].find_first_of("-.") != std::string_view::npos) continue;

    PendingToken t;
    t.line = lineno;
    if (!parse_index(cols[0], t.id) || t.id == 0) {
      throw ParseError("invalid token id '" + std::string(cols[0]) + "'" + at, lineno, 0);
    }
    if (!parse_index(cols[6], t.head)) {
      throw ParseError("non-numeric HEAD '" + std::string(cols[6]) + "'" + at, lineno, 0);
    }
    t.node.form = std::string(cols[1]);
    t.node.word = unicode::to_lower(cols[1]);
    t.node.lemma = cols[2] == "_" ? t.node.word : unicode::to_lower(cols[2]);
    t.node.pos = std::string(cols[4] != "_" ? cols[4] : cols[3]);
    t.label = std::string(cols[7]);
    pending.push_back(std::move(t));
  }
  flush();
  return graphs;
}

void check_alignment(const DependencyGraph& g, const Sentence& sentence) {
  if (g.size() != sentence.tokens.size()) {
    throw Error("parse has " + std::to_string(g.size()) + " tokens but the sentence has " +
                std::to_string(sentence.tokens.size()) + ": \"" + sentence.text + "\"");
  }
}

nlohmann::json to_json(const DependencyGraph& g) {
  nlohmann::json nodes = nlohmann::json::array(), edges = nlohmann::json::array();
  for (const DepNode& n : g.nodes()) {
    nodes.push_back({{"index", n.index}, {"form", n.form}, {"word", n.word},
                     {"lemma", n.lemma}, {"pos", n.pos}});
  }
  for (const DepEdge& e : g.edges()) {
    edges.push_back({{"governor", e.governor}, {"dependent", e.dependent}, {"label", e.label}});
  }
  return {{"text", g.text}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

}  // namespace negdetect

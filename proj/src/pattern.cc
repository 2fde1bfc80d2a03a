#include "negdetect/deppat.h"

#include <cctype>
#include <set>

#include "negdetect/error.h"

namespace negdetect {

namespace {

bool is_name_char(char32_t c) {
  return c < 128 && (std::isalnum(static_cast<int>(c)) || c == U'_');
}

}  // namespace

std::string_view to_string(PatternKind k) { return k == PatternKind::kNeg ? "NEG" : "POS"; }

std::string_view to_string(NodeAttr a) {
  switch (a) {
    case NodeAttr::kWord: return "word";
    case NodeAttr::kLemma: return "lemma";
    case NodeAttr::kPos: return "pos";
  }
  return "word";
}

bool ValueMatcher::matches(std::string_view value) const {
  return is_regex ? regex.full_match(value) : value == text;
}

bool NodeSpec::matches(const DepNode& node) const {
  bool all = true;
  for (const AttrConstraint& c : constraints) {
    const std::string& v = c.attr == NodeAttr::kWord    ? node.word
                           : c.attr == NodeAttr::kLemma ? node.lemma
                                                        : node.pos;
    if (!c.value.matches(v)) {
      all = false;
      break;
    }
  }
  return negated ? !all : all;
}

namespace {

class PatternParser {
 public:
  explicit PatternParser(std::string_view text) : src_(unicode::decode(text)) {}

  PatternNode parse() {
    PatternNode root = parse_pattern();
    skip_ws();
    if (pos_ < src_.size()) fail("unexpected '" + unicode::encode(src_[pos_]) + "'");
    return root;
  }

  const std::vector<std::pair<std::string, std::size_t>>& bindings() const { return bindings_; }

 private:
  [[noreturn]] void fail(const std::string& what) const { fail_at(what, pos_); }
  [[noreturn]] void fail_at(const std::string& what, std::size_t at) const {
    throw ParseError("pattern syntax error at offset " + std::to_string(at) + ": " + what, 0, at);
  }

  void skip_ws() {
    while (pos_ < src_.size() && unicode::is_space(src_[pos_])) ++pos_;
  }
  bool at(char32_t c) const { return pos_ < src_.size() && src_[pos_] == c; }
  void expect(char32_t c) {
    if (!at(c)) {
      fail(std::string("expected '") + unicode::encode(c) + "'" +
           (pos_ >= src_.size() ? " before end of pattern" : ""));
    }
    ++pos_;
  }

  PatternNode parse_pattern() {
    PatternNode node;
    node.spec = parse_node(/*in_negated=*/negated_depth_ > 0);
    for (;;) {
      skip_ws();
      if (pos_ >= src_.size() || at(U')')) break;
      node.relations.push_back(parse_relation());
    }
    return node;
  }

  Relation parse_relation() {
    Relation rel;
    skip_ws();
    if (at(U'!')) {
      rel.op.negated_existence = true;
      ++pos_;
      skip_ws();
    }
    if (at(U'>')) {
      ++pos_;
      if (at(U'>')) {
        ++pos_;
        rel.op.dir = RelationDir::kChainGovernorOf;
      } else {
        rel.op.dir = RelationDir::kGovernorOf;
      }
    } else if (at(U'<')) {
      ++pos_;
      rel.op.dir = RelationDir::kDependentOf;
    } else {
      fail("expected relation '<', '>' or '>>'");
    }
    skip_ws();
    if (!at(U'{') && !at(U'(') && !at(U'!')) rel.op.label = parse_relation_value();
    skip_ws();

    if (rel.op.negated_existence) ++negated_depth_;
    if (at(U'(')) {
      ++pos_;
      rel.child = parse_pattern();
      skip_ws();
      expect(U')');
    } else {
      rel.child.spec = parse_node(negated_depth_ > 0);
    }
    if (rel.op.negated_existence) --negated_depth_;
    return rel;
  }

  ValueMatcher parse_relation_value() {
    if (at(U'/')) return parse_regex();
    std::size_t b = pos_;
    while (pos_ < src_.size() && !unicode::is_space(src_[pos_]) && src_[pos_] != U'{' &&
           src_[pos_] != U'(' && src_[pos_] != U')' && src_[pos_] != U'!' &&
           src_[pos_] != U'<' && src_[pos_] != U'>') {
      ++pos_;
    }
    if (pos_ == b) fail("expected relation label");
    ValueMatcher v;
    v.text = unicode::encode(std::u32string_view(src_).substr(b, pos_ - b));
    return v;
  }

  ValueMatcher parse_regex() {
    std::size_t open = pos_;
    expect(U'/');
    std::u32string body;
    while (pos_ < src_.size() && src_[pos_] != U'/') {
      if (src_[pos_] == U'\\' && pos_ + 1 < src_.size() && src_[pos_ + 1] == U'/') {
        body.push_back(U'/');
        pos_ += 2;
        continue;
      }
      body.push_back(src_[pos_++]);
    }
    if (pos_ >= src_.size()) fail_at("unterminated regular expression", open);
    ++pos_;
    ValueMatcher v;
    v.is_regex = true;
    v.text = unicode::encode(body);
    try {
      v.regex = unicode::Regex(v.text);
    } catch (const ConfigError& e) {
      fail_at(e.what(), open);
    }
    return v;
  }

  NodeSpec parse_node(bool in_negated) {
    NodeSpec spec;
    skip_ws();
    if (at(U'!')) {
      spec.negated = true;
      ++pos_;
      skip_ws();
    }
    expect(U'{');
    skip_ws();
    if (!at(U'}')) {
      for (;;) {
        skip_ws();
        spec.constraints.push_back(parse_constraint());
        skip_ws();
        if (at(U';')) {
          ++pos_;
          continue;
        }
        break;
      }
    }
    skip_ws();
    expect(U'}');
    std::size_t save = pos_;
    skip_ws();
    if (at(U'=')) {
      ++pos_;
      skip_ws();
      std::size_t b = pos_;
      while (pos_ < src_.size() && is_name_char(src_[pos_])) ++pos_;
      if (pos_ == b) fail("expected binding name after '='");
      std::string name = unicode::encode(std::u32string_view(src_).substr(b, pos_ - b));
      for (const auto& [existing, off] : bindings_) {
        if (existing == name) fail_at("duplicate binding name '" + name + "'", b);
      }
      bindings_.emplace_back(name, in_negated ? kNegatedScope : b);
      spec.binding = std::move(name);
    } else {
      pos_ = save;
    }
    return spec;
  }

  AttrConstraint parse_constraint() {
    std::size_t b = pos_;
    while (pos_ < src_.size() && src_[pos_] < 128 && std::isalpha(static_cast<int>(src_[pos_]))) ++pos_;
    std::string attr = unicode::encode(std::u32string_view(src_).substr(b, pos_ - b));
    AttrConstraint c;
    if (attr == "word") {
      c.attr = NodeAttr::kWord;
    } else if (attr == "lemma") {
      c.attr = NodeAttr::kLemma;
    } else if (attr == "pos" || attr == "tag") {
      c.attr = NodeAttr::kPos;
    } else if (attr.empty()) {
      fail_at("expected attribute name or '}'", b);
    } else {
      fail_at("unknown attribute '" + attr + "'", b);
    }
    skip_ws();
    expect(U':');
    skip_ws();
    if (at(U'/')) {
      c.value = parse_regex();
    } else {
      std::size_t vb = pos_;
      while (pos_ < src_.size() && src_[pos_] != U';' && src_[pos_] != U'}') ++pos_;
      std::u32string_view raw = std::u32string_view(src_).substr(vb, pos_ - vb);
      while (!raw.empty() && unicode::is_space(raw.back())) raw.remove_suffix(1);
      if (raw.empty()) fail_at("expected attribute value", vb);
      c.value.text = unicode::encode(raw);
    }
    return c;
  }

 public:
  static constexpr std::size_t kNegatedScope = static_cast<std::size_t>(-1);

 private:
  std::u32string src_;
  std::size_t pos_ = 0;
  int negated_depth_ = 0;
  // Binding names with their offset, kNegatedScope inside a negated relation.
  std::vector<std::pair<std::string, std::size_t>> bindings_;
};

std::string value_text(const ValueMatcher& v) {
  if (!v.is_regex) return v.text;
  std::string out = "/";
  for (char c : v.text) {
    if (c == '/') out.push_back('\\');
    out.push_back(c);
  }
  return out + "/";
}

void unparse_node(const PatternNode& node, std::string& out) {
  if (node.spec.negated) out.push_back('!');
  out.push_back('{');
  for (std::size_t i = 0; i < node.spec.constraints.size(); ++i) {
    if (i > 0) out.push_back(';');
    out += to_string(node.spec.constraints[i].attr);
    out.push_back(':');
    out += value_text(node.spec.constraints[i].value);
  }
  out.push_back('}');
  if (node.spec.binding) out += "=" + *node.spec.binding;
  for (const Relation& r : node.relations) {
    out.push_back(' ');
    if (r.op.negated_existence) out.push_back('!');
    out += r.op.dir == RelationDir::kGovernorOf     ? ">"
           : r.op.dir == RelationDir::kDependentOf  ? "<"
                                                    : ">>";
    if (r.op.label) out += " " + value_text(*r.op.label);
    out.push_back(' ');
    if (r.child.relations.empty()) {
      unparse_node(r.child, out);
    } else {
      out.push_back('(');
      unparse_node(r.child, out);
      out.push_back(')');
    }
  }
}

}  // namespace

GraphPattern parse_pattern(std::string_view text, PatternKind kind) {
  PatternParser parser(text);
  GraphPattern p;
  p.root = parser.parse();
  p.kind = kind;
  p.source_text = std::string(text);

  std::size_t gov = 0, dep = 0;
  for (const auto& [name, off] : parser.bindings()) {
    if (off == PatternParser::kNegatedScope) continue;
    if (name == "gov") ++gov;
    if (name.starts_with("dep")) ++dep;
  }
  if (kind == PatternKind::kNeg && (gov == 0 || dep == 0)) {
    throw ParseError("NEG pattern must bind 'gov' and at least one 'dep' node", 0, 0);
  }
  return p;
}

std::string unparse(const GraphPattern& p) {
  std::string out;
  unparse_node(p.root, out);
  return out;
}

std::vector<GraphPattern> parse_pattern_file(std::string_view content) {
  std::vector<GraphPattern> out;
  std::size_t lineno = 0, start = 0;
  while (start < content.size()) {
    std::size_t nl = content.find('\n', start);
    std::string_view line = content.substr(
        start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? content.size() : nl + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    std::size_t tab = line.rfind('\t');
    const std::string at = " at line " + std::to_string(lineno);
    if (tab == std::string_view::npos) {
      throw ConfigError("expected 'pattern<TAB>NEG|POS'" + at, lineno);
    }
    std::string_view kind = line.substr(tab + 1);
    PatternKind k;
    if (kind == "NEG") {
      k = PatternKind::kNeg;
    } else if (kind == "POS") {
      k = PatternKind::kPos;
    } else {
      throw ConfigError("unknown pattern kind " + std::string(kind) + at, lineno);
    }
    try {
      out.push_back(parse_pattern(line.substr(0, tab), k));
    } catch (const ParseError& e) {
      throw ConfigError(std::string(e.what()) + at, lineno);
    }
  }
  return out;
}

}  // namespace negdetect

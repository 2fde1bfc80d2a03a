#include "negdetect/server.h"

#include <algorithm>

#include "httplib.h"
#include "negdetect/error.h"

namespace negdetect {

namespace fs = std::filesystem;
using nlohmann::json;

const TriggerSet* ServerState::find_trigger_set(std::string_view name) const {
  for (const TriggerSet& s : trigger_sets) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::vector<Fixture> load_fixtures(const fs::path& dir) {
  std::vector<Fixture> out;
  if (dir.empty() || !fs::is_directory(dir)) return out;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".conllu") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const fs::path& f : files) {
    std::string content = read_file(f);
    // Split on blank lines so each fixture carries one sentence.
    std::vector<std::string> blocks;
    std::string current;
    std::size_t start = 0;
    while (start < content.size()) {
      std::size_t nl = content.find('\n', start);
      std::string line = content.substr(start, nl == std::string::npos ? std::string::npos : nl - start);
      start = nl == std::string::npos ? content.size() : nl + 1;
      if (line.find_first_not_of(" \t\r") == std::string::npos) {
        if (current.find_first_not_of(" \t\r\n") != std::string::npos &&
            current.find('\t') != std::string::npos) {
          blocks.push_back(current);
        }
        current.clear();
        continue;
      }
      current += line + "\n";
    }
    if (current.find('\t') != std::string::npos) blocks.push_back(current);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      auto graphs = parse_conllu(blocks[i]);
      if (graphs.empty()) continue;
      Fixture fx;
      fx.id = f.stem().string() + (blocks.size() > 1 ? "#" + std::to_string(i + 1) : "");
      fx.text = graphs.front().text;
      fx.conllu = blocks[i];
      out.push_back(std::move(fx));
    }
  }
  return out;
}

namespace {

ApiResponse error(int status, std::string code, std::string detail) {
  return {status, json{{"error", std::move(code)}, {"detail", std::move(detail)}}};
}

std::optional<json> parse_body(std::string_view body, ApiResponse& err) {
  json j = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    err = error(400, "bad_request", "request body must be a JSON object");
    return std::nullopt;
  }
  return j;
}

ApiResponse conllu_error(const ParseError& e) {
  ApiResponse r = error(422, "conllu_syntax", e.what());
  r.body["line"] = e.line();
  return r;
}

}  // namespace

ApiResponse Api::annotate(std::string_view body) const {
  ApiResponse err;
  auto req = parse_body(body, err);
  if (!req) return err;
  if (!req->contains("text") || !(*req)["text"].is_string()) {
    return error(400, "bad_request", "field 'text' (string) is required");
  }

  std::string set_name = req->value("trigger_set", state_->default_trigger_set);
  const TriggerSet* set = state_->find_trigger_set(set_name);
  if (!set) return error(400, "unknown_trigger_set", "no trigger set named '" + set_name + "'");

  NegexConfig negex = state_->negex;
  if (req->contains("window") && !(*req)["window"].is_null()) {
    const json& w = (*req)["window"];
    try {
      negex = w.is_number_integer() ? NegexConfig::with_window(w.get<std::size_t>())
                                    : parse_window(w.get<std::string>());
    } catch (const std::exception& e) {
      return error(400, "bad_window", e.what());
    }
    negex.interference_fix = state_->negex.interference_fix;
  }

  std::vector<DependencyGraph> graphs;
  if (req->contains("conllu") && (*req)["conllu"].is_string()) {
    try {
      graphs = parse_conllu((*req)["conllu"].get<std::string>());
    } catch (const ParseError& e) {
      return conllu_error(e);
    }
  }

  AnnotateOptions opts;
  opts.triggers = set;
  opts.negex = negex;
  opts.apply = state_->apply;
  if (!graphs.empty()) {
    opts.patterns = state_->patterns;
    opts.sentence_graphs = graphs;
  }
  try {
    Document doc = negdetect::annotate((*req)["text"].get<std::string>(), state_->resources, opts);
    return {200, to_json(doc)};
  } catch (const Error& e) {
    return error(422, "alignment", e.what());
  }
}

ApiResponse Api::match(std::string_view body) const {
  ApiResponse err;
  auto req = parse_body(body, err);
  if (!req) return err;
  if (!req->contains("pattern") || !(*req)["pattern"].is_string()) {
    return error(400, "bad_request", "field 'pattern' (string) is required");
  }
  if (!req->contains("conllu") || !(*req)["conllu"].is_string()) {
    return error(400, "bad_request", "field 'conllu' (string) is required");
  }
  std::string kind_name = req->value("kind", std::string("POS"));
  if (kind_name != "NEG" && kind_name != "POS") {
    return error(400, "bad_request", "kind must be NEG or POS");
  }
  PatternKind kind = kind_name == "NEG" ? PatternKind::kNeg : PatternKind::kPos;

  GraphPattern pattern;
  try {
    pattern = parse_pattern((*req)["pattern"].get<std::string>(), kind);
  } catch (const ParseError& e) {
    ApiResponse r = error(422, "pattern_syntax", e.what());
    r.body["offset"] = e.offset();
    return r;
  }
  std::vector<DependencyGraph> graphs;
  try {
    graphs = parse_conllu((*req)["conllu"].get<std::string>());
  } catch (const ParseError& e) {
    return conllu_error(e);
  }

  json matches = json::array(), graph_json = json::array();
  for (std::size_t s = 0; s < graphs.size(); ++s) {
    graph_json.push_back(to_json(graphs[s]));
    for (const PatternMatch& m : match_pattern(pattern, graphs[s], state_->apply.match)) {
      json jm = to_json(m);
      jm["sentence"] = s;
      matches.push_back(std::move(jm));
    }
  }
  return {200, json{{"matches", std::move(matches)}, {"graphs", std::move(graph_json)}}};
}

ApiResponse Api::patterns() const {
  json list = json::array();
  for (const GraphPattern& p : state_->patterns) {
    list.push_back({{"pattern", p.source_text}, {"kind", to_string(p.kind)}});
  }
  return {200, json{{"patterns", std::move(list)}}};
}

ApiResponse Api::triggers() const {
  json sets = json::array();
  for (const TriggerSet& s : state_->trigger_sets) {
    json counts = json::object();
    for (TriggerType t : kTriggerTypes) counts[std::string(to_string(t))] = s.count(t);
    sets.push_back({{"name", s.name}, {"counts", std::move(counts)}, {"total", s.size()}});
  }
  return {200, json{{"sets", std::move(sets)},
                    {"default", state_->default_trigger_set},
                    {"window", window_label(state_->negex)}}};
}

ApiResponse Api::fixtures() const {
  json list = json::array();
  for (const Fixture& f : state_->fixtures) {
    list.push_back({{"id", f.id}, {"text", f.text}, {"conllu", f.conllu}});
  }
  return {200, json{{"fixtures", std::move(list)}}};
}

void Api::mount(httplib::Server& server) const {
  auto reply = [](httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  auto guarded = [reply](auto&& fn) {
    return [reply, fn](const httplib::Request& req, httplib::Response& res) {
      try {
        reply(res, fn(req));
      } catch (const std::exception& e) {
        reply(res, error(500, "internal", e.what()));
      }
    };
  };
  Api api = *this;
  server.Post("/api/annotate", guarded([api](const httplib::Request& r) { return api.annotate(r.body); }));
  server.Post("/api/match", guarded([api](const httplib::Request& r) { return api.match(r.body); }));
  server.Get("/api/patterns", guarded([api](const httplib::Request&) { return api.patterns(); }));
  server.Get("/api/triggers", guarded([api](const httplib::Request&) { return api.triggers(); }));
  server.Get("/api/fixtures", guarded([api](const httplib::Request&) { return api.fixtures(); }));

  if (!state_->static_dir.empty() && fs::is_directory(state_->static_dir)) {
    server.set_mount_point("/", state_->static_dir.string());
  } else {
    server.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(
          "<!doctype html><title>negdetect</title><p>Workbench assets are not installed. "
          "The JSON API is available under /api/.</p>",
          "text/html");
    });
  }
}

}  // namespace negdetect

#ifndef NEGDETECT_SERVER_H_
#define NEGDETECT_SERVER_H_

// JSON API behind the workbench. Handlers are plain functions of the
// immutable server state and the request body, so they can be tested
// without a socket; mount() wires them into cpp-httplib.

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "negdetect/pipeline.h"

namespace httplib {
class Server;
}

namespace negdetect {

struct Fixture {
  std::string id;
  std::string text;
  std::string conllu;
};

struct ServerState {
  PreprocessResources resources;
  std::vector<TriggerSet> trigger_sets;
  std::string default_trigger_set;
  std::vector<GraphPattern> patterns;
  NegexConfig negex;
  ApplyOptions apply;
  std::vector<Fixture> fixtures;
  std::filesystem::path static_dir;  // workbench assets; may be empty

  const TriggerSet* find_trigger_set(std::string_view name) const;
};

// One fixture per *.conllu file and sentence, id "<file stem>" or
// "<file stem>#<n>" when a file holds several sentences.
std::vector<Fixture> load_fixtures(const std::filesystem::path& dir);

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

class Api {
 public:
  explicit Api(std::shared_ptr<const ServerState> state) : state_(std::move(state)) {}

  // POST /api/annotate {text, window?, trigger_set?, conllu?}
  ApiResponse annotate(std::string_view body) const;
  // POST /api/match {conllu, pattern, kind?}
  ApiResponse match(std::string_view body) const;
  // GET /api/patterns
  ApiResponse patterns() const;
  // GET /api/triggers
  ApiResponse triggers() const;
  // GET /api/fixtures
  ApiResponse fixtures() const;

  void mount(httplib::Server& server) const;

 private:
  std::shared_ptr<const ServerState> state_;
};

}  // namespace negdetect

#endif  // NEGDETECT_SERVER_H_

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sere/datasource/http.hpp"
#include "sere/pipeline/explorer.hpp"

namespace httplib {
class Server;
}

namespace sere {

/// Settings shared by the service and the CLI. Precedence, lowest first:
/// built-in defaults, JSON config file, environment, command-line flags.
struct ServiceConfig {
  std::string bind = "127.0.0.1:8080";
  std::string backend = "live";
  std::string corpus_path;
  std::string corpus_lang = "en";
  std::vector<LanguageCode> languages{LanguageCode("en"), LanguageCode("de")};
  std::string static_root;
  PipelineConfig pipeline;

  /// Keys: bind, backend, corpus_path, corpus_lang, languages, static_root,
  /// max_in_flight, candidate_cap, snippet_cap, inlink_cap, cache_ttl_secs,
  /// cache_capacity. Unknown keys are rejected.
  void merge_file(const std::filesystem::path& path);

  using EnvLookup = std::function<const char*(const char*)>;
  /// SERE_BIND, SERE_BACKEND, SERE_CORPUS_PATH, SERE_CACHE_TTL_SECS,
  /// SERE_MAX_IN_FLIGHT.
  void merge_env(const EnvLookup& lookup);
  void merge_env();

  /// Parses bind as host:port. Throws std::invalid_argument.
  std::pair<std::string, int> host_port() const;
};

/// Builds the backend named by `config.backend`. A live backend uses
/// `transport` when given.
std::shared_ptr<Backend> make_backend(const ServiceConfig& config,
                                      std::shared_ptr<const http::Transport> transport = nullptr);

using QueryParams = std::map<std::string, std::string>;

struct ApiResponse {
  int status = 200;
  std::string content_type;
  std::string body;
};

inline constexpr const char* kXmlContentType = "application/xml; charset=utf-8";
inline constexpr const char* kJsonContentType = "application/json; charset=utf-8";
inline constexpr std::size_t kDefaultSuggestLimit = 10;
inline constexpr std::size_t kMaxSuggestLimit = 25;

/// Transport-independent request handlers.
class Api {
 public:
  Api(std::shared_ptr<const Explorer> explorer, std::vector<LanguageCode> languages);

  /// q, lang (default en), fields (absent: all, blank: none), format (xml | json).
  ApiResponse explore(const QueryParams& params) const;
  /// q, lang, limit (default 10, larger values clamped to 25). JSON array.
  ApiResponse suggest(const QueryParams& params) const;

  const Explorer& explorer() const noexcept { return *explorer_; }

 private:
  std::shared_ptr<const Explorer> explorer_;
  std::vector<LanguageCode> languages_;
};

/// HTTP front end: /api/explore, /api/suggest, /healthz and the static
/// bundle at /.
class Server {
 public:
  Server(std::shared_ptr<const Api> api, std::string static_root = {});
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Blocks until stop().
  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port and returns it, or -1.
  int bind_any(const std::string& host);
  /// Serves on a port obtained from bind_any(); blocks until stop().
  bool serve_bound();
  void stop();
  void wait_until_ready() const;

 private:
  std::shared_ptr<const Api> api_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace sere

#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace sere::http {

using Headers = std::vector<std::pair<std::string, std::string>>;
using Params = std::vector<std::pair<std::string, std::string>>;

struct Response {
  int status = 0;
  std::string body;
};

/// Blocking GET. Implementations throw ProviderError(network, retriable) when
/// no HTTP response could be obtained at all.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual Response get(const std::string& url, const Headers& headers) const = 0;
};

struct ClientOptions {
  std::string user_agent = "sere/1.0 (semantic relatedness explorer)";
  std::chrono::milliseconds timeout{10000};
};

/// cpp-httplib backed transport with a small per-origin pool of keep-alive
/// clients.
class HttplibTransport final : public Transport {
 public:
  explicit HttplibTransport(ClientOptions options = {});
  ~HttplibTransport() override;

  Response get(const std::string& url, const Headers& headers) const override;

 private:
  struct Pool;
  ClientOptions options_;
  std::unique_ptr<Pool> pool_;
};

/// Serves recorded responses; never touches the network.
///
/// Fixture file: {"interactions": [{"url": ..., "status": 200, "body": <json>}
/// | {"url": ..., "status": 503, "body_text": "..."} | {"url": ..., "error":
/// "unreachable"}]}. URLs match after canonical_url().
class ReplayTransport final : public Transport {
 public:
  explicit ReplayTransport(const nlohmann::json& fixture);
  static std::shared_ptr<ReplayTransport> load(const std::filesystem::path& path);

  Response get(const std::string& url, const Headers& headers) const override;

  std::size_t calls(std::string_view url) const;
  std::size_t total_calls() const;

 private:
  struct Entry {
    bool unreachable = false;
    Response response;
  };
  std::map<std::string, Entry> entries_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, std::size_t> calls_;
};

/// Forwards to another transport and keeps every exchange in the replay
/// fixture format.
class RecordingTransport final : public Transport {
 public:
  explicit RecordingTransport(std::shared_ptr<const Transport> inner) : inner_(std::move(inner)) {}

  Response get(const std::string& url, const Headers& headers) const override;
  nlohmann::json fixture() const;
  void save(const std::filesystem::path& path) const;

 private:
  std::shared_ptr<const Transport> inner_;
  mutable std::mutex mutex_;
  mutable nlohmann::json interactions_ = nlohmann::json::array();
};

std::string url_encode(std::string_view raw);
std::string url_decode(std::string_view raw);
std::string with_query(std::string_view base, const Params& params);
/// Decoded, parameter-sorted form used to match recorded requests.
std::string canonical_url(std::string_view url);

struct RetryPolicy {
  int retries = 2;
  std::chrono::milliseconds backoff{200};
};

/// GET returning parsed JSON. Connection failures, 429 and 5xx are retried up
/// to `policy.retries` extra times; the last failure is rethrown as
/// ProviderError tagged with `endpoint`.
nlohmann::json get_json(const Transport& transport, const std::string& url, const Headers& headers,
                        const RetryPolicy& policy, const std::string& endpoint);

}  // namespace sere::http

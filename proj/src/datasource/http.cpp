#include "httplib.h"

#include "sere/datasource/http.hpp"

#include <algorithm>
#include <fstream>
#include <thread>

#include "sere/errors.hpp"

namespace sere::http {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string target;  // /path?query
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ProviderError(ProviderErrorKind::network, url, "not an absolute URL", false);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

struct HttplibTransport::Pool {
  std::mutex mutex;
  std::map<std::string, std::vector<std::unique_ptr<httplib::Client>>> idle;
};

HttplibTransport::HttplibTransport(ClientOptions options)
    : options_(std::move(options)), pool_(std::make_unique<Pool>()) {}

HttplibTransport::~HttplibTransport() = default;

Response HttplibTransport::get(const std::string& url, const Headers& headers) const {
  const auto parts = split_url(url);
  std::unique_ptr<httplib::Client> client;
  {
    std::lock_guard lock(pool_->mutex);
    auto& idle = pool_->idle[parts.origin];
    if (!idle.empty()) {
      client = std::move(idle.back());
      idle.pop_back();
    }
  }
  if (!client) {
    client = std::make_unique<httplib::Client>(parts.origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options_.timeout - secs);
    client->set_connection_timeout(secs.count(), usecs.count());
    client->set_read_timeout(secs.count(), usecs.count());
    client->set_keep_alive(true);
    client->set_follow_location(true);
  }

  httplib::Headers h{{"User-Agent", options_.user_agent}};
  for (const auto& [k, v] : headers) h.emplace(k, v);
  auto result = client->Get(parts.target, h);
  if (!result) {
    throw ProviderError(ProviderErrorKind::network, url, httplib::to_string(result.error()), true);
  }
  Response out{result->status, result->body};
  {
    std::lock_guard lock(pool_->mutex);
    pool_->idle[parts.origin].push_back(std::move(client));
  }
  return out;
}

std::string url_encode(std::string_view raw) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char ch : raw) {
    const auto c = static_cast<unsigned char>(ch);
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' ||
        c == '.' || c == '_' || c == '~') {
      out += ch;
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

std::string url_decode(std::string_view raw) {
  const auto hex = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  std::string out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '+') {
      out += ' ';
    } else if (raw[i] == '%' && i + 2 < raw.size() && hex(raw[i + 1]) >= 0 && hex(raw[i + 2]) >= 0) {
      out += static_cast<char>(hex(raw[i + 1]) * 16 + hex(raw[i + 2]));
      i += 2;
    } else {
      out += raw[i];
    }
  }
  return out;
}

std::string with_query(std::string_view base, const Params& params) {
  std::string out(base);
  char sep = out.find('?') == std::string::npos ? '?' : '&';
  for (const auto& [k, v] : params) {
    out += sep;
    out += url_encode(k);
    out += '=';
    out += url_encode(v);
    sep = '&';
  }
  return out;
}

std::string canonical_url(std::string_view url) {
  const auto q = url.find('?');
  std::string out = url_decode(url.substr(0, q));
  if (q == std::string_view::npos) return out;
  std::vector<std::pair<std::string, std::string>> params;
  auto rest = url.substr(q + 1);
  while (!rest.empty()) {
    const auto amp = rest.find('&');
    const auto item = rest.substr(0, amp);
    const auto eq = item.find('=');
    if (!item.empty()) {
      params.emplace_back(url_decode(item.substr(0, eq)),
                          eq == std::string_view::npos ? "" : url_decode(item.substr(eq + 1)));
    }
    if (amp == std::string_view::npos) break;
    rest.remove_prefix(amp + 1);
  }
  std::sort(params.begin(), params.end());
  char sep = '?';
  for (const auto& [k, v] : params) {
    out += sep;
    out += k;
    out += '=';
    out += v;
    sep = '&';
  }
  return out;
}

ReplayTransport::ReplayTransport(const nlohmann::json& fixture) {
  for (const auto& item : fixture.at("interactions")) {
    Entry e;
    if (item.contains("error")) {
      e.unreachable = true;
    } else {
      e.response.status = item.value("status", 200);
      if (item.contains("body_text")) {
        e.response.body = item.at("body_text").get<std::string>();
      } else if (item.contains("body")) {
        e.response.body = item.at("body").dump();
      }
    }
    entries_[canonical_url(item.at("url").get<std::string>())] = std::move(e);
  }
}

std::shared_ptr<ReplayTransport> ReplayTransport::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open replay fixture " + path.string());
  return std::make_shared<ReplayTransport>(nlohmann::json::parse(in));
}

Response ReplayTransport::get(const std::string& url, const Headers&) const {
  const auto key = canonical_url(url);
  {
    std::lock_guard lock(mutex_);
    ++calls_[key];
  }
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    throw ProviderError(ProviderErrorKind::network, url, "no recorded response for this request",
                        false);
  }
  if (it->second.unreachable) {
    throw ProviderError(ProviderErrorKind::network, url, "host unreachable", true);
  }
  return it->second.response;
}

std::size_t ReplayTransport::calls(std::string_view url) const {
  std::lock_guard lock(mutex_);
  auto it = calls_.find(canonical_url(url));
  return it == calls_.end() ? 0 : it->second;
}

std::size_t ReplayTransport::total_calls() const {
  std::lock_guard lock(mutex_);
  std::size_t n = 0;
  for (const auto& [k, v] : calls_) n += v;
  return n;
}

Response RecordingTransport::get(const std::string& url, const Headers& headers) const {
  nlohmann::json item{{"url", url}};
  try {
    auto response = inner_->get(url, headers);
    item["status"] = response.status;
    auto parsed = nlohmann::json::parse(response.body, nullptr, false);
    if (parsed.is_discarded()) {
      item["body_text"] = response.body;
    } else {
      item["body"] = std::move(parsed);
    }
    std::lock_guard lock(mutex_);
    interactions_.push_back(std::move(item));
    return response;
  } catch (const ProviderError& e) {
    if (e.kind() == ProviderErrorKind::network) {
      item["error"] = "unreachable";
      std::lock_guard lock(mutex_);
      interactions_.push_back(std::move(item));
    }
    throw;
  }
}

nlohmann::json RecordingTransport::fixture() const {
  std::lock_guard lock(mutex_);
  return nlohmann::json{{"interactions", interactions_}};
}

void RecordingTransport::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  out << fixture().dump(2) << '\n';
}

namespace {

bool retriable_status(int status) { return status == 429 || status >= 500; }

ProviderError status_error(int status, const std::string& endpoint) {
  if (status == 429) {
    return ProviderError(ProviderErrorKind::rate_limit, endpoint, "HTTP 429", true, status);
  }
  if (status == 502 || status == 503 || status == 504) {
    return ProviderError(ProviderErrorKind::network, endpoint,
                         "service unavailable (HTTP " + std::to_string(status) + ")", true, status);
  }
  return ProviderError(ProviderErrorKind::http_status, endpoint,
                       "HTTP " + std::to_string(status), retriable_status(status), status);
}

}  // namespace

nlohmann::json get_json(const Transport& transport, const std::string& url, const Headers& headers,
                        const RetryPolicy& policy, const std::string& endpoint) {
  for (int attempt = 0;; ++attempt) {
    const bool last = attempt >= policy.retries;
    try {
      const auto response = transport.get(url, headers);
      if (response.status < 200 || response.status >= 300) throw status_error(response.status, endpoint);
      auto parsed = nlohmann::json::parse(response.body, nullptr, false);
      if (parsed.is_discarded()) {
        throw ProviderError(ProviderErrorKind::malformed_response, endpoint,
                            "response body is not JSON", false, response.status);
      }
      return parsed;
    } catch (const ProviderError& e) {
      if (!e.retriable() || last) {
        if (e.endpoint() == endpoint) throw;
        throw ProviderError(e.kind(), endpoint, e.detail(), e.retriable(), e.status());
      }
    }
    if (policy.backoff.count() > 0) std::this_thread::sleep_for(policy.backoff * (attempt + 1));
  }
}

}  // namespace sere::http

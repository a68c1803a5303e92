#include "sere/service/service.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "httplib.h"
#include "json.hpp"
#include "sere/datasource/corpus.hpp"
#include "sere/errors.hpp"
#include "sere/service/serialize.hpp"

namespace sere {

namespace {

std::size_t parse_positive(std::string_view text, const std::string& what) {
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty() || value == 0) {
    throw std::invalid_argument(what + " must be a positive integer, got '" + std::string(text) + "'");
  }
  return value;
}

std::vector<LanguageCode> parse_languages(const std::vector<std::string>& codes) {
  std::vector<LanguageCode> out;
  for (const auto& code : codes) out.emplace_back(code);
  if (out.empty()) throw std::invalid_argument("language whitelist is empty");
  return out;
}

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r\n") == std::string_view::npos; }

std::string param(const QueryParams& params, const std::string& key, std::string fallback = {}) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

ApiResponse error_response(int status, bool json, std::string_view code, std::string_view message) {
  if (json) return {status, kJsonContentType, error_json(code, message)};
  return {status, kXmlContentType, error_xml(code, message)};
}

}  // namespace

void ServiceConfig::merge_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("config file " + path.string() + ": " + e.what());
  }
  if (!doc.is_object()) throw std::runtime_error("config file " + path.string() + " must hold a JSON object");

  for (const auto& [key, value] : doc.items()) {
    if (key == "bind") bind = value.get<std::string>();
    else if (key == "backend") backend = value.get<std::string>();
    else if (key == "corpus_path") corpus_path = value.get<std::string>();
    else if (key == "corpus_lang") corpus_lang = value.get<std::string>();
    else if (key == "languages") languages = parse_languages(value.get<std::vector<std::string>>());
    else if (key == "static_root") static_root = value.get<std::string>();
    else if (key == "max_in_flight") pipeline.max_in_flight = value.get<std::size_t>();
    else if (key == "candidate_cap") pipeline.candidate_cap = value.get<std::size_t>();
    else if (key == "snippet_cap") pipeline.snippet_cap = value.get<std::size_t>();
    else if (key == "inlink_cap") pipeline.inlink_cap = value.get<std::size_t>();
    else if (key == "cache_ttl_secs") pipeline.cache_ttl = std::chrono::seconds(value.get<std::int64_t>());
    else if (key == "cache_capacity") pipeline.cache_capacity = value.get<std::size_t>();
    else throw std::runtime_error("config file " + path.string() + ": unknown key '" + key + "'");
  }
}

void ServiceConfig::merge_env(const EnvLookup& lookup) {
  if (const char* v = lookup("SERE_BIND"); v && *v) bind = v;
  if (const char* v = lookup("SERE_BACKEND"); v && *v) backend = v;
  if (const char* v = lookup("SERE_CORPUS_PATH"); v && *v) corpus_path = v;
  if (const char* v = lookup("SERE_CACHE_TTL_SECS"); v && *v) {
    pipeline.cache_ttl = std::chrono::seconds(parse_positive(v, "SERE_CACHE_TTL_SECS"));
  }
  if (const char* v = lookup("SERE_MAX_IN_FLIGHT"); v && *v) {
    pipeline.max_in_flight = parse_positive(v, "SERE_MAX_IN_FLIGHT");
  }
}

void ServiceConfig::merge_env() {
  merge_env([](const char* name) { return std::getenv(name); });
}

std::pair<std::string, int> ServiceConfig::host_port() const {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos || colon == 0) {
    throw std::invalid_argument("bind address must be host:port, got '" + bind + "'");
  }
  const auto port = parse_positive(std::string_view(bind).substr(colon + 1), "bind port");
  if (port > 65535) throw std::invalid_argument("bind port out of range");
  return {bind.substr(0, colon), static_cast<int>(port)};
}

std::shared_ptr<Backend> make_backend(const ServiceConfig& config,
                                      std::shared_ptr<const http::Transport> transport) {
  const auto spec = parse_backend_spec(config.backend, config.corpus_path);
  if (spec.kind == BackendSpec::Kind::corpus) {
    auto corpus = std::make_shared<const Corpus>(ingest_corpus(spec.corpus_path, LanguageCode(config.corpus_lang)));
    return std::make_shared<CorpusBackend>(std::move(corpus));
  }
  return std::make_shared<LiveBackend>(LiveConfig{}, config.languages, std::move(transport));
}

Api::Api(std::shared_ptr<const Explorer> explorer, std::vector<LanguageCode> languages)
    : explorer_(std::move(explorer)), languages_(std::move(languages)) {}

ApiResponse Api::explore(const QueryParams& params) const {
  const auto format = param(params, "format", "xml");
  if (format != "xml" && format != "json") {
    return error_response(400, false, "unknown_format", "format must be xml or json, got '" + format + "'");
  }
  const bool json = format == "json";

  const auto q = param(params, "q");
  if (blank(q)) return error_response(400, json, "missing_query", "parameter q is required");

  const auto lang_text = param(params, "lang", "en");
  if (!LanguageCode::valid(lang_text)) {
    return error_response(400, json, "unsupported_language", "'" + lang_text + "' is not a language code");
  }
  const LanguageCode lang(lang_text);
  if (std::find(languages_.begin(), languages_.end(), lang) == languages_.end()) {
    return error_response(400, json, "unsupported_language", "language '" + lang_text + "' is not enabled");
  }

  // Absent selects every field; present but blank selects none.
  FieldSet fields = FieldSet::all();
  try {
    if (const auto it = params.find("fields"); it != params.end()) {
      fields = blank(it->second) ? FieldSet{} : FieldSet::parse(it->second);
    }
  } catch (const UnknownFieldError& e) {
    return error_response(400, json, "unknown_field", e.what());
  }

  try {
    const auto result = explorer_->explore(lang, q, fields);
    return {200, json ? kJsonContentType : kXmlContentType, json ? to_json(result) : to_xml(result)};
  } catch (const NoMatchError& e) {
    return error_response(404, json, "no_match", e.what());
  } catch (const EmptyInputError& e) {
    return error_response(400, json, "missing_query", e.what());
  } catch (const UnsupportedLanguageError& e) {
    return error_response(400, json, "unsupported_language", e.what());
  } catch (const HarvestError& e) {
    return error_response(502, json, "sources_failed", e.what());
  } catch (const ProviderError& e) {
    return error_response(502, json, "provider_error", e.what());
  } catch (const std::exception& e) {
    return error_response(500, json, "internal", e.what());
  }
}

ApiResponse Api::suggest(const QueryParams& params) const {
  const auto q = param(params, "q");
  if (blank(q)) return error_response(400, true, "missing_query", "parameter q is required");

  const auto lang_text = param(params, "lang", "en");
  if (!LanguageCode::valid(lang_text)) {
    return error_response(400, true, "unsupported_language", "'" + lang_text + "' is not a language code");
  }
  const LanguageCode lang(lang_text);
  if (std::find(languages_.begin(), languages_.end(), lang) == languages_.end()) {
    return error_response(400, true, "unsupported_language", "language '" + lang_text + "' is not enabled");
  }

  std::size_t limit = kDefaultSuggestLimit;
  if (const auto it = params.find("limit"); it != params.end()) {
    try {
      limit = std::min(parse_positive(it->second, "limit"), kMaxSuggestLimit);
    } catch (const std::invalid_argument& e) {
      return error_response(400, true, "invalid_limit", e.what());
    }
  }

  try {
    const auto titles = explorer_->suggest(lang, q, limit);
    return {200, kJsonContentType, nlohmann::json(titles).dump() + "\n"};
  } catch (const EmptyInputError& e) {
    return error_response(400, true, "missing_query", e.what());
  } catch (const UnsupportedLanguageError& e) {
    return error_response(400, true, "unsupported_language", e.what());
  } catch (const ProviderError& e) {
    return error_response(502, true, "provider_error", e.what());
  } catch (const std::exception& e) {
    return error_response(500, true, "internal", e.what());
  }
}

namespace {

QueryParams flatten(const httplib::Params& params) {
  QueryParams out;
  for (const auto& [key, value] : params) out.emplace(key, value);  // first value wins
  return out;
}

void reply(httplib::Response& res, const ApiResponse& api) {
  res.status = api.status;
  res.set_content(api.body, api.content_type.c_str());
}

}  // namespace

Server::Server(std::shared_ptr<const Api> api, std::string static_root)
    : api_(std::move(api)), server_(std::make_unique<httplib::Server>()) {
  server_->Get("/api/explore", [api = api_](const httplib::Request& req, httplib::Response& res) {
    reply(res, api->explore(flatten(req.params)));
  });
  server_->Get("/api/suggest", [api = api_](const httplib::Request& req, httplib::Response& res) {
    reply(res, api->suggest(flatten(req.params)));
  });
  server_->Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("ok", "text/plain; charset=utf-8");
  });
  if (!static_root.empty() && !server_->set_mount_point("/", static_root)) {
    throw std::runtime_error("static root '" + static_root + "' is not a directory");
  }
}

Server::~Server() { stop(); }

bool Server::listen(const std::string& host, int port) { return server_->listen(host, port); }

int Server::bind_any(const std::string& host) { return server_->bind_to_any_port(host); }

bool Server::serve_bound() { return server_->listen_after_bind(); }

void Server::stop() {
  if (server_) server_->stop();
}

void Server::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace sere

#include "sere/pipeline/backend.hpp"

#include <algorithm>
#include <stdexcept>

#include "sere/errors.hpp"

namespace sere {

CorpusBackend::CorpusBackend(std::shared_ptr<const Corpus> corpus) : corpus_(std::move(corpus)) {
  auto provider = std::make_shared<CorpusProvider>(corpus_);
  providers_ = {provider, provider};
}

Providers CorpusBackend::providers_for(const LanguageCode& lang) const {
  if (lang != corpus_->lang()) throw UnsupportedLanguageError(lang.str());
  return providers_;
}

std::string CorpusBackend::describe() const {
  return "corpus (" + std::to_string(corpus_->size()) + " articles, " + corpus_->lang().str() + ")";
}

LiveBackend::LiveBackend(LiveConfig config, std::vector<LanguageCode> languages,
                         std::shared_ptr<const http::Transport> transport)
    : config_(std::move(config)), languages_(std::move(languages)), transport_(std::move(transport)) {
  if (!transport_) transport_ = std::make_shared<http::HttplibTransport>(config_.client);
}

Providers LiveBackend::providers_for(const LanguageCode& lang) const {
  if (std::find(languages_.begin(), languages_.end(), lang) == languages_.end()) {
    throw UnsupportedLanguageError(lang.str());
  }
  std::lock_guard lock(mutex_);
  auto it = providers_.find(lang);
  if (it == providers_.end()) {
    Providers p{std::make_shared<WikipediaProvider>(lang, config_, transport_),
                std::make_shared<DbpediaProvider>(lang, config_, transport_)};
    it = providers_.emplace(lang, std::move(p)).first;
  }
  return it->second;
}

BackendSpec parse_backend_spec(std::string_view spec, std::string_view fallback_path) {
  if (spec == "live") return {BackendSpec::Kind::live, {}};
  if (spec == "corpus") {
    if (fallback_path.empty()) throw std::invalid_argument("corpus backend needs a path");
    return {BackendSpec::Kind::corpus, std::string(fallback_path)};
  }
  constexpr std::string_view prefix = "corpus:";
  if (spec.starts_with(prefix) && spec.size() > prefix.size()) {
    return {BackendSpec::Kind::corpus, std::string(spec.substr(prefix.size()))};
  }
  throw std::invalid_argument("backend must be 'live' or 'corpus:<path>', got '" + std::string(spec) + "'");
}

}  // namespace sere

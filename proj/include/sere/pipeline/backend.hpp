#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "sere/datasource/corpus.hpp"
#include "sere/datasource/http.hpp"
#include "sere/datasource/live.hpp"
#include "sere/datasource/provider.hpp"

namespace sere {

/// Source of providers per language edition.
class Backend {
 public:
  virtual ~Backend() = default;
  /// Throws UnsupportedLanguageError for languages the backend does not serve.
  virtual Providers providers_for(const LanguageCode& lang) const = 0;
  virtual std::vector<LanguageCode> languages() const = 0;
  virtual std::string describe() const = 0;
};

class CorpusBackend final : public Backend {
 public:
  explicit CorpusBackend(std::shared_ptr<const Corpus> corpus);

  Providers providers_for(const LanguageCode& lang) const override;
  std::vector<LanguageCode> languages() const override { return {corpus_->lang()}; }
  std::string describe() const override;

 private:
  std::shared_ptr<const Corpus> corpus_;
  Providers providers_;
};

/// Wikipedia API for text, links and counts; DBpedia SPARQL for categories
/// and the category hierarchy.
class LiveBackend final : public Backend {
 public:
  LiveBackend(LiveConfig config, std::vector<LanguageCode> languages,
              std::shared_ptr<const http::Transport> transport = nullptr);

  Providers providers_for(const LanguageCode& lang) const override;
  std::vector<LanguageCode> languages() const override { return languages_; }
  std::string describe() const override { return "live"; }

 private:
  LiveConfig config_;
  std::vector<LanguageCode> languages_;
  std::shared_ptr<const http::Transport> transport_;
  mutable std::mutex mutex_;
  mutable std::map<LanguageCode, Providers> providers_;
};

struct BackendSpec {
  enum class Kind { live, corpus } kind = Kind::live;
  std::string corpus_path;
};

/// Parses "live" or "corpus:<path>"; a bare "corpus" takes the path from
/// `fallback_path`. Throws std::invalid_argument otherwise.
BackendSpec parse_backend_spec(std::string_view spec, std::string_view fallback_path = {});

}  // namespace sere

#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "sere/datasource/http.hpp"
#include "sere/datasource/provider.hpp"
#include "sere/model.hpp"

namespace sere {

struct LiveConfig {
  /// "{lang}" is replaced by the language code.
  std::string wikipedia_api = "https://{lang}.wikipedia.org/w/api.php";
  /// Empty selects https://dbpedia.org/sparql for English and
  /// https://{lang}.dbpedia.org/sparql otherwise.
  std::string sparql_endpoint;
  /// Empty selects http://dbpedia.org/resource/ for English and
  /// http://{lang}.dbpedia.org/resource/ otherwise.
  std::string resource_prefix;
  http::ClientOptions client;
  http::RetryPolicy retry;
  /// Continuation pages followed for link listings.
  std::size_t max_pages = 20;
  int thumbnail_size = 200;

  std::string api_url(const LanguageCode& lang) const;
  std::string sparql_url(const LanguageCode& lang) const;
  std::string resource_base(const LanguageCode& lang) const;
};

/// MediaWiki Action API client. Hit counts come from the full-text search
/// total; co-occurrence counts search for both phrases, each quoted.
class WikipediaProvider final : public Provider {
 public:
  WikipediaProvider(LanguageCode lang, LiveConfig config, std::shared_ptr<const http::Transport> transport);

  std::string name() const override { return "wikipedia:" + lang_.str(); }
  std::vector<std::string> search(std::string_view term, std::size_t limit) const override;
  std::uint64_t hit_count(std::string_view phrase) const override;
  std::uint64_t cooccurrence_count(std::string_view phrase_a,
                                   std::string_view phrase_b) const override;
  std::uint64_t article_count() const override;
  std::string full_text(std::string_view title) const override;
  std::vector<std::string> out_links(std::string_view title) const override;
  std::vector<std::string> in_links(std::string_view title, std::size_t limit) const override;
  std::vector<std::string> categories(std::string_view title) const override;
  std::string description(std::string_view title) const override;
  std::optional<std::string> thumbnail(std::string_view title) const override;
  std::vector<Passage> search_snippets(std::string_view phrase_a, std::string_view phrase_b,
                                       std::size_t limit) const override;

 private:
  nlohmann::json query(http::Params params, const std::string& endpoint) const;
  std::uint64_t total_hits(const std::string& search, const std::string& endpoint) const;
  nlohmann::json single_page(http::Params params, const std::string& endpoint) const;

  LanguageCode lang_;
  LiveConfig config_;
  std::shared_ptr<const http::Transport> transport_;
  mutable std::mutex article_count_mutex_;
  mutable std::optional<std::uint64_t> article_count_;
};

/// DBpedia SPARQL client: categories via dct:subject, broader via skos:broader
/// of those categories, narrower via the inverse relation.
class DbpediaProvider final : public Provider {
 public:
  DbpediaProvider(LanguageCode lang, LiveConfig config, std::shared_ptr<const http::Transport> transport);

  std::string name() const override { return "dbpedia:" + lang_.str(); }
  std::vector<std::string> categories(std::string_view title) const override;
  std::vector<std::string> broader(std::string_view title) const override;
  std::vector<std::string> narrower(std::string_view title, std::size_t limit) const override;

  std::string resource_iri(std::string_view title) const;
  std::string categories_query(std::string_view title) const;
  std::string broader_query(std::string_view title) const;
  std::string narrower_query(std::string_view title, std::size_t limit) const;

 private:
  std::vector<std::string> select_names(const std::string& sparql, const char* variable,
                                        const std::string& endpoint) const;

  LanguageCode lang_;
  LiveConfig config_;
  std::shared_ptr<const http::Transport> transport_;
};

/// Last path segment of a DBpedia IRI, decoded, with any "Category:" style
/// namespace removed and underscores turned into spaces.
std::string name_from_iri(std::string_view iri);

/// Drops markup tags and decodes the HTML entities MediaWiki emits in search
/// snippets.
std::string strip_html(std::string_view html);

}  // namespace sere

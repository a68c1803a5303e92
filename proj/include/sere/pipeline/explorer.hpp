#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "sere/harvest.hpp"
#include "sere/model.hpp"
#include "sere/pipeline/backend.hpp"
#include "sere/pipeline/cache.hpp"
#include "sere/pipeline/concurrency.hpp"

namespace sere {

struct PipelineConfig {
  std::size_t max_in_flight = 32;
  std::size_t candidate_cap = 400;
  std::size_t snippet_cap = 3;
  std::size_t inlink_cap = 500;
  std::chrono::seconds cache_ttl = std::chrono::hours(24);
  std::size_t cache_capacity = 1000;

  /// Throws std::invalid_argument on a zero knob or max_in_flight > 1024.
  void validate() const;
};

struct CacheKey {
  LanguageCode lang;
  std::string title;  // canonical title of the resolved concept
  FieldSet fields;

  std::string serialize() const;
  friend bool operator==(const CacheKey&, const CacheKey&) = default;
};

/// Stable sort by relatedness descending, ties by title ascending.
std::vector<RelatedEntity> rank(std::vector<RelatedEntity> entities);

/// Scores every candidate against the concept, running up to `workers`
/// count lookups at once. Candidates whose counts cannot be scored are
/// dropped with a warning. Output keeps candidate order.
std::vector<RelatedEntity> score_candidates(const Provider& wiki, const Concept& subject,
                                            const std::vector<Candidate>& candidates,
                                            std::size_t workers, std::vector<std::string>& warnings);

/// End-to-end query: resolve, cache lookup, harvest, parallel scoring,
/// enrichment and ranking. Safe for concurrent use.
class Explorer {
 public:
  Explorer(std::shared_ptr<const Backend> backend, PipelineConfig config = {},
           std::shared_ptr<const Clock> clock = nullptr);

  /// Throws EmptyInputError, NoMatchError, UnsupportedLanguageError,
  /// HarvestError, or ProviderError when the concept itself cannot be
  /// counted. Everything else degrades into result warnings.
  ExplorationResult explore(const LanguageCode& lang, std::string_view term,
                            FieldSet fields = FieldSet::all()) const;

  /// Ranked titles for autocompletion.
  std::vector<std::string> suggest(const LanguageCode& lang, std::string_view prefix,
                                   std::size_t limit) const;

  const PipelineConfig& config() const noexcept { return config_; }
  const Backend& backend() const noexcept { return *backend_; }
  std::size_t cache_size() const { return cache_->size(); }

 private:
  std::shared_ptr<const Backend> backend_;
  PipelineConfig config_;
  std::shared_ptr<const Clock> clock_;
  std::shared_ptr<InFlightLimiter> limiter_;
  std::unique_ptr<LruTtlCache<std::string, ExplorationResult>> cache_;
};

}  // namespace sere

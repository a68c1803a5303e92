#include "sere/pipeline/explorer.hpp"

#include <algorithm>
#include <stdexcept>

#include "sere/enrich.hpp"
#include "sere/errors.hpp"
#include "sere/relatedness.hpp"

namespace sere {

void PipelineConfig::validate() const {
  if (max_in_flight == 0 || candidate_cap == 0 || snippet_cap == 0 || inlink_cap == 0 ||
      cache_ttl.count() <= 0 || cache_capacity == 0) {
    throw std::invalid_argument("pipeline settings must all be positive");
  }
  if (max_in_flight > kMaxInFlightLimit) {
    throw std::invalid_argument("max_in_flight must not exceed 1024");
  }
}

std::string CacheKey::serialize() const {
  return lang.str() + '\x1f' + title + '\x1f' + fields.to_csv();
}

std::vector<RelatedEntity> rank(std::vector<RelatedEntity> entities) {
  std::stable_sort(entities.begin(), entities.end(), [](const RelatedEntity& x, const RelatedEntity& y) {
    if (x.score.relatedness != y.score.relatedness) return x.score.relatedness > y.score.relatedness;
    return x.subject.title < y.subject.title;
  });
  return entities;
}

std::vector<RelatedEntity> score_candidates(const Provider& wiki, const Concept& subject,
                                            const std::vector<Candidate>& candidates,
                                            std::size_t workers, std::vector<std::string>& warnings) {
  const auto concept_hits = wiki.hit_count(subject.title);
  const auto total = wiki.article_count();

  std::vector<std::optional<RelatedEntity>> slots(candidates.size());
  std::vector<std::string> slot_warnings(candidates.size());
  parallel_for(candidates.size(), workers, [&](std::size_t i) {
    const auto& candidate = candidates[i];
    try {
      const auto hits = wiki.hit_count(candidate.title);
      const auto both = wiki.cooccurrence_count(subject.title, candidate.title);
      const HitCounts counts(concept_hits, hits, both, total);
      if (counts.clamped()) {
        slot_warnings[i] = "co-occurrence count for '" + candidate.title + "' clamped to " +
                           std::to_string(counts.both());
      }
      RelatedEntity entity;
      entity.subject = make_concept(subject.lang, candidate.title);
      entity.origins = candidate.origins;
      entity.score = score(counts);
      slots[i] = std::move(entity);
    } catch (const std::exception& e) {
      slot_warnings[i] = "dropped candidate '" + candidate.title + "': " + e.what();
    }
  });

  std::vector<RelatedEntity> scored;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slot_warnings[i].empty()) warnings.push_back(std::move(slot_warnings[i]));
    if (slots[i]) scored.push_back(std::move(*slots[i]));
  }
  return scored;
}

Explorer::Explorer(std::shared_ptr<const Backend> backend, PipelineConfig config,
                   std::shared_ptr<const Clock> clock)
    : backend_(std::move(backend)), config_(config), clock_(std::move(clock)) {
  config_.validate();
  if (!clock_) clock_ = std::make_shared<SystemClock>();
  limiter_ = std::make_shared<InFlightLimiter>(config_.max_in_flight);
  cache_ = std::make_unique<LruTtlCache<std::string, ExplorationResult>>(config_.cache_capacity,
                                                                        config_.cache_ttl, clock_);
}

ExplorationResult Explorer::explore(const LanguageCode& lang, std::string_view term,
                                    FieldSet fields) const {
  const auto providers = throttle(backend_->providers_for(lang), limiter_);
  const auto title = resolve_title(*providers.wiki, term);

  const CacheKey key{lang, title, fields};
  if (auto cached = cache_->get(key.serialize())) {
    cached->from_cache = true;
    cached->query = std::string(term);
    return *cached;
  }

  ExplorationResult result;
  result.query = std::string(term);
  result.fields = fields;
  result.inlink_cap = config_.inlink_cap;
  result.subject = describe_concept(*providers.wiki, lang, title, fields.has(Field::description),
                                    fields.has(Field::thumbnail), &result.warnings);

  HarvestOptions harvest_options;
  harvest_options.inlink_cap = config_.inlink_cap;
  harvest_options.candidate_cap = config_.candidate_cap;
  auto harvest = harvest_candidates(*providers.wiki, *providers.semantic, result.subject, harvest_options);
  result.warnings.insert(result.warnings.end(), harvest.warnings.begin(), harvest.warnings.end());

  auto scored = score_candidates(*providers.wiki, result.subject, harvest.candidates,
                                 config_.max_in_flight, result.warnings);

  EnrichOptions enrich_options;
  enrich_options.snippet_cap = config_.snippet_cap;
  enrich_options.workers = config_.max_in_flight;
  enrich_options.categories = fields.has(Field::category);
  enrich_options.thumbnails = fields.has(Field::thumbnail);
  enrich_options.snippets = fields.has(Field::snippets);
  auto enriched = enrich_entities(providers, result.subject, std::move(scored), enrich_options);
  result.warnings.insert(result.warnings.end(), enriched.warnings.begin(), enriched.warnings.end());

  result.entities = rank(std::move(enriched.entities));
  result.category_index = std::move(enriched.category_index);
  result.generated_at = clock_->now();
  result.from_cache = false;

  cache_->put(key.serialize(), result);
  return result;
}

std::vector<std::string> Explorer::suggest(const LanguageCode& lang, std::string_view prefix,
                                           std::size_t limit) const {
  const auto first = prefix.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw EmptyInputError("prefix is blank");
  const auto providers = throttle(backend_->providers_for(lang), limiter_);
  return providers.wiki->search(prefix.substr(first), limit);
}

}  // namespace sere

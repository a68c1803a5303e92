#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sere/datasource/provider.hpp"
#include "sere/model.hpp"
#include "sere/text/sentences.hpp"

namespace sere {

/// Groups the entities by category (group size = number of entities listing
/// it) and assigns each entity the category of its largest group, ties by
/// name. Entities without categories land in "(uncategorized)". Returns the
/// index of assigned counts, largest first, ties by name.
std::vector<CategoryCount> assign_categories(std::vector<RelatedEntity>& entities);

using text::split_sentences;

/// Sentences of `source_text` that contain `related_title` under the phrase
/// match rule, in document order, at most `cap`.
std::vector<Snippet> article_sentence_snippets(std::string_view source_text,
                                               std::string_view source_title,
                                               std::string_view related_title, std::size_t cap = 3);

/// Passages from an AND search of both titles. Provider failures yield an
/// empty list and a warning.
std::vector<Snippet> fallback_search_snippets(const Provider& provider, std::string_view concept_title,
                                              std::string_view related_title, std::size_t cap,
                                              std::vector<std::string>& warnings);

struct EnrichOptions {
  std::size_t snippet_cap = 3;
  std::size_t workers = 32;
  bool categories = true;
  bool thumbnails = true;
  bool snippets = true;
};

struct Enrichment {
  std::vector<RelatedEntity> entities;
  std::vector<CategoryCount> category_index;
  std::vector<std::string> warnings;
};

/// Drops entities with zero relatedness, then fetches categories, a
/// thumbnail and snippets for the rest (article sentences first, AND-search
/// passages only when none are found) and assigns categories. Entity order
/// is preserved.
Enrichment enrich_entities(const Providers& providers, const Concept& subject,
                           std::vector<RelatedEntity> scored, const EnrichOptions& options = {});

}  // namespace sere

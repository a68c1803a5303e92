#include "sere/enrich.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "sere/errors.hpp"
#include "sere/pipeline/concurrency.hpp"
#include "sere/text/match.hpp"

namespace sere {

std::vector<CategoryCount> assign_categories(std::vector<RelatedEntity>& entities) {
  std::map<std::string, std::size_t> group_size;
  for (const auto& e : entities) {
    const std::set<std::string> distinct(e.categories.begin(), e.categories.end());
    for (const auto& c : distinct) ++group_size[c];
  }

  std::map<std::string, std::size_t> assigned_count;
  for (auto& e : entities) {
    e.assigned_category.reset();
    const std::string* best = nullptr;
    for (const auto& c : e.categories) {
      const auto size = group_size[c];
      if (!best || size > group_size[*best] || (size == group_size[*best] && c < *best)) best = &c;
    }
    if (best) e.assigned_category = *best;
    ++assigned_count[best ? *best : std::string(kUncategorized)];
  }

  std::vector<CategoryCount> index;
  index.reserve(assigned_count.size());
  for (auto& [name, count] : assigned_count) index.push_back({name, count});
  std::stable_sort(index.begin(), index.end(),
                   [](const CategoryCount& x, const CategoryCount& y) { return x.count > y.count; });
  return index;
}

namespace {

void push_unique(std::vector<Snippet>& out, Snippet s) {
  const bool dup = std::any_of(out.begin(), out.end(),
                               [&](const Snippet& existing) { return existing.text == s.text; });
  if (!dup) out.push_back(std::move(s));
}

}  // namespace

std::vector<Snippet> article_sentence_snippets(std::string_view source_text,
                                               std::string_view source_title,
                                               std::string_view related_title, std::size_t cap) {
  std::vector<Snippet> out;
  const auto needle = text::fold(related_title);
  if (needle.empty() || cap == 0) return out;
  for (auto& sentence : split_sentences(source_text)) {
    if (out.size() >= cap) break;
    if (!text::contains(text::fold(sentence), needle)) continue;
    push_unique(out, {std::move(sentence), SnippetTrack::article_sentence, std::string(source_title)});
  }
  return out;
}

std::vector<Snippet> fallback_search_snippets(const Provider& provider, std::string_view concept_title,
                                              std::string_view related_title, std::size_t cap,
                                              std::vector<std::string>& warnings) {
  std::vector<Snippet> out;
  if (cap == 0) return out;
  try {
    for (auto& passage : provider.search_snippets(concept_title, related_title, cap)) {
      if (out.size() >= cap) break;
      if (passage.text.empty()) continue;
      push_unique(out, {std::move(passage.text), SnippetTrack::search_snippet,
                        std::move(passage.source_title)});
    }
  } catch (const Error& e) {
    warnings.push_back("snippet search for '" + std::string(related_title) + "' failed: " + e.what());
    out.clear();
  }
  return out;
}

Enrichment enrich_entities(const Providers& providers, const Concept& subject,
                           std::vector<RelatedEntity> scored, const EnrichOptions& options) {
  Enrichment out;
  for (auto& e : scored) {
    if (e.score.relatedness > 0.0) out.entities.push_back(std::move(e));
  }

  std::string concept_text;
  if (options.snippets && !out.entities.empty()) {
    try {
      concept_text = providers.wiki->full_text(subject.title);
    } catch (const Error& e) {
      out.warnings.push_back("full text of '" + subject.title + "' unavailable: " + e.what());
    }
  }

  std::vector<std::vector<std::string>> entity_warnings(out.entities.size());
  parallel_for(out.entities.size(), options.workers, [&](std::size_t i) {
    auto& entity = out.entities[i];
    auto& warnings = entity_warnings[i];
    const auto& title = entity.subject.title;
    if (options.categories) {
      try {
        entity.categories = providers.semantic->categories(title);
      } catch (const Error& e) {
        warnings.push_back("categories of '" + title + "' unavailable: " + e.what());
      }
    }
    if (options.thumbnails) {
      try {
        entity.subject.thumbnail = providers.wiki->thumbnail(title);
        if (!entity.subject.thumbnail && providers.semantic != providers.wiki) {
          try {
            entity.subject.thumbnail = providers.semantic->thumbnail(title);
          } catch (const ProviderError& e) {
            if (e.kind() != ProviderErrorKind::unsupported) throw;
          }
        }
      } catch (const Error& e) {
        warnings.push_back("thumbnail of '" + title + "' unavailable: " + e.what());
      }
    }
    if (options.snippets) {
      entity.snippets =
          article_sentence_snippets(concept_text, subject.title, title, options.snippet_cap);
      if (entity.snippets.empty()) {
        entity.snippets = fallback_search_snippets(*providers.wiki, subject.title, title,
                                                   options.snippet_cap, warnings);
      }
    }
  });
  for (auto& w : entity_warnings) {
    out.warnings.insert(out.warnings.end(), std::make_move_iterator(w.begin()),
                        std::make_move_iterator(w.end()));
  }

  if (options.categories) out.category_index = assign_categories(out.entities);
  return out;
}

}  // namespace sere

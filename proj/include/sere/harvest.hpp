#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sere/datasource/provider.hpp"
#include "sere/model.hpp"

namespace sere {

inline constexpr std::size_t kConceptSearchLimit = 10;

/// Canonical title of the first of the ten best search hits for `term`.
/// Throws EmptyInputError on a blank term and NoMatchError when nothing
/// matches.
std::string resolve_title(const Provider& wiki, std::string_view term);

/// Concept for an already resolved title. With a non-null `warnings`,
/// description and thumbnail failures are recorded there instead of thrown.
Concept describe_concept(const Provider& wiki, const LanguageCode& lang, std::string_view title,
                         bool with_description = true, bool with_thumbnail = true,
                         std::vector<std::string>* warnings = nullptr);

Concept resolve_concept(const Provider& wiki, const LanguageCode& lang, std::string_view term);

/// True for titles in a non-article namespace ("Category:", "File:",
/// "Template:", their German names, talk namespaces, ...).
bool is_namespaced(std::string_view title);

struct Candidate {
  std::string title;
  OriginSet origins;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct HarvestOptions {
  std::size_t inlink_cap = 500;
  std::size_t candidate_cap = 400;
};

struct Harvest {
  std::vector<Candidate> candidates;  // title ascending
  std::vector<std::string> warnings;
};

/// Union of out-links, in-links (capped), broader and narrower terms of the
/// concept, deduplicated by canonical title with origins merged. The four
/// source queries run concurrently. A failing source becomes a warning;
/// HarvestError is thrown only when every source fails. Over the candidate
/// cap, in-link-only candidates are dropped first.
Harvest harvest_candidates(const Provider& wiki, const Provider& semantic, const Concept& subject,
                           const HarvestOptions& options = {});

}  // namespace sere

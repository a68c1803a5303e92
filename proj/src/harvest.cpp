#include "sere/harvest.hpp"

#include <algorithm>
#include <array>
#include <future>
#include <map>

#include "sere/errors.hpp"

namespace sere {

std::string resolve_title(const Provider& wiki, std::string_view term) {
  const auto first = term.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw EmptyInputError("search term is blank");
  const auto last = term.find_last_not_of(" \t\r\n");
  const auto trimmed = term.substr(first, last - first + 1);
  const auto titles = wiki.search(trimmed, kConceptSearchLimit);
  if (titles.empty()) throw NoMatchError(std::string(trimmed));
  return canonical_title(titles.front());
}

Concept describe_concept(const Provider& wiki, const LanguageCode& lang, std::string_view title,
                         bool with_description, bool with_thumbnail,
                         std::vector<std::string>* warnings) {
  auto subject = make_concept(lang, title);
  const auto attempt = [&](const char* what, auto&& fetch) {
    if (!warnings) return fetch();
    try {
      fetch();
    } catch (const Error& e) {
      warnings->push_back(std::string(what) + " of '" + subject.title + "' unavailable: " + e.what());
    }
  };
  if (with_description) attempt("description", [&] { subject.description = wiki.description(subject.title); });
  if (with_thumbnail) attempt("thumbnail", [&] { subject.thumbnail = wiki.thumbnail(subject.title); });
  return subject;
}

Concept resolve_concept(const Provider& wiki, const LanguageCode& lang, std::string_view term) {
  return describe_concept(wiki, lang, resolve_title(wiki, term));
}

bool is_namespaced(std::string_view title) {
  static constexpr std::array<std::string_view, 26> kNamespaces = {
      "category", "file",      "image",    "template", "wikipedia", "help",   "portal",
      "talk",     "user",      "draft",    "module",   "special",   "mediawiki", "book",
      "timedtext", "wp",       "kategorie", "datei",   "bild",      "vorlage", "hilfe",
      "benutzer", "diskussion", "spezial", "modul",    "media"};
  const auto colon = title.find(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  std::string prefix;
  for (char c : title.substr(0, colon)) {
    prefix += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
  }
  if (prefix.ends_with(" talk") || prefix.ends_with(" diskussion")) return true;
  return std::find(kNamespaces.begin(), kNamespaces.end(), prefix) != kNamespaces.end();
}

namespace {

struct SourceResult {
  std::vector<std::string> titles;
  std::string error;
  bool ok = false;
};

template <class Fetch>
std::future<SourceResult> launch(Fetch fetch) {
  return std::async(std::launch::async, [fetch = std::move(fetch)] {
    SourceResult r;
    try {
      r.titles = fetch();
      r.ok = true;
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    return r;
  });
}

}  // namespace

Harvest harvest_candidates(const Provider& wiki, const Provider& semantic, const Concept& subject,
                           const HarvestOptions& options) {
  const std::string title = subject.title;
  struct Source {
    RelationOrigin origin;
    const char* label;
    std::future<SourceResult> result;
  };
  std::array<Source, 4> sources = {
      Source{RelationOrigin::out_link, "out_links", launch([&] { return wiki.out_links(title); })},
      Source{RelationOrigin::in_link, "in_links",
             launch([&] { return wiki.in_links(title, options.inlink_cap); })},
      Source{RelationOrigin::broader, "broader", launch([&] { return semantic.broader(title); })},
      Source{RelationOrigin::narrower, "narrower",
             launch([&] { return semantic.narrower(title, options.candidate_cap); })},
  };

  Harvest out;
  std::map<std::string, OriginSet> merged;
  std::vector<std::string> inlink_order;
  std::size_t failures = 0;
  std::string last_error;
  for (auto& source : sources) {
    auto r = source.result.get();
    if (!r.ok) {
      ++failures;
      last_error = r.error;
      out.warnings.push_back(std::string(source.label) + " source failed: " + r.error);
      continue;
    }
    for (const auto& raw : r.titles) {
      std::string t;
      try {
        t = canonical_title(raw);
      } catch (const EmptyInputError&) {
        continue;
      }
      if (t == title || is_namespaced(t)) continue;
      merged[t].insert(source.origin);
      if (source.origin == RelationOrigin::in_link) inlink_order.push_back(t);
    }
  }
  if (failures == sources.size()) {
    throw HarvestError("all harvest sources failed for '" + title + "': " + last_error);
  }

  const auto total = merged.size();
  if (total > options.candidate_cap) {
    const OriginSet in_only{RelationOrigin::in_link};
    for (auto it = inlink_order.rbegin(); it != inlink_order.rend() && merged.size() > options.candidate_cap;
         ++it) {
      auto found = merged.find(*it);
      if (found != merged.end() && found->second == in_only) merged.erase(found);
    }
    while (merged.size() > options.candidate_cap) merged.erase(std::prev(merged.end()));
    out.warnings.push_back("candidate set truncated from " + std::to_string(total) + " to " +
                           std::to_string(options.candidate_cap));
  }

  out.candidates.reserve(merged.size());
  for (auto& [t, origins] : merged) out.candidates.push_back({t, origins});
  return out;
}

}  // namespace sere

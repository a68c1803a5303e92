#include "sere/datasource/live.hpp"

#include <algorithm>

#include "sere/errors.hpp"

namespace sere {

namespace {

using nlohmann::json;

std::string expand_lang(std::string tmpl, const LanguageCode& lang) {
  const std::string marker = "{lang}";
  for (auto pos = tmpl.find(marker); pos != std::string::npos; pos = tmpl.find(marker, pos)) {
    tmpl.replace(pos, marker.size(), lang.str());
  }
  return tmpl;
}

[[noreturn]] void malformed(const std::string& endpoint, const std::string& field) {
  throw ProviderError(ProviderErrorKind::malformed_response, endpoint,
                      "missing field '" + field + "'", false);
}

// Follows a key path; a missing step throws malformed_response naming the whole path.
const json& require(const json& root, std::initializer_list<const char*> path,
                    const std::string& endpoint) {
  const json* node = &root;
  for (const char* key : path) {
    if (!node->is_object() || !node->contains(key)) {
      std::string full;
      for (const char* k : path) full += (full.empty() ? "" : ".") + std::string(k);
      malformed(endpoint, full);
    }
    node = &(*node)[key];
  }
  return *node;
}

std::string quoted(std::string_view phrase) { return "\"" + std::string(phrase) + "\""; }

std::string strip_namespace(const std::string& title) {
  const auto colon = title.find(':');
  return colon == std::string::npos ? title : title.substr(colon + 1);
}

}  // namespace

std::string LiveConfig::api_url(const LanguageCode& lang) const {
  return expand_lang(wikipedia_api, lang);
}

std::string LiveConfig::sparql_url(const LanguageCode& lang) const {
  if (!sparql_endpoint.empty()) return expand_lang(sparql_endpoint, lang);
  return lang.str() == "en" ? "https://dbpedia.org/sparql"
                            : "https://" + lang.str() + ".dbpedia.org/sparql";
}

std::string LiveConfig::resource_base(const LanguageCode& lang) const {
  if (!resource_prefix.empty()) return expand_lang(resource_prefix, lang);
  return lang.str() == "en" ? "http://dbpedia.org/resource/"
                            : "http://" + lang.str() + ".dbpedia.org/resource/";
}

WikipediaProvider::WikipediaProvider(LanguageCode lang, LiveConfig config,
                                     std::shared_ptr<const http::Transport> transport)
    : lang_(std::move(lang)), config_(std::move(config)), transport_(std::move(transport)) {}

json WikipediaProvider::query(http::Params params, const std::string& endpoint) const {
  params.insert(params.begin(), {{"action", "query"}, {"format", "json"}, {"formatversion", "2"}});
  const auto url = http::with_query(config_.api_url(lang_), params);
  auto answer = http::get_json(*transport_, url, {}, config_.retry, endpoint);
  if (answer.is_object() && answer.contains("error")) {
    const auto& err = answer["error"];
    const auto code = err.value("code", std::string("unknown"));
    const bool throttled = code == "ratelimited" || code == "maxlag";
    throw ProviderError(throttled ? ProviderErrorKind::rate_limit : ProviderErrorKind::malformed_response,
                        endpoint, "API error " + code + ": " + err.value("info", std::string()),
                        throttled);
  }
  return answer;
}

json WikipediaProvider::single_page(http::Params params, const std::string& endpoint) const {
  auto answer = query(std::move(params), endpoint);
  const auto& pages = require(answer, {"query", "pages"}, endpoint);
  if (!pages.is_array() || pages.empty()) malformed(endpoint, "query.pages[0]");
  return pages[0];
}

std::vector<std::string> WikipediaProvider::search(std::string_view term, std::size_t limit) const {
  const auto endpoint = config_.api_url(lang_) + " [list=search]";
  auto answer = query({{"list", "search"},
                       {"srsearch", std::string(term)},
                       {"srnamespace", "0"},
                       {"srlimit", std::to_string(limit)},
                       {"srprop", ""},
                       {"srinfo", ""}},
                      endpoint);
  const auto& hits = require(answer, {"query", "search"}, endpoint);
  std::vector<std::string> titles;
  for (const auto& hit : hits) titles.push_back(require(hit, {"title"}, endpoint).get<std::string>());
  return titles;
}

std::uint64_t WikipediaProvider::total_hits(const std::string& search,
                                            const std::string& endpoint) const {
  auto answer = query({{"list", "search"},
                       {"srsearch", search},
                       {"srnamespace", "0"},
                       {"srwhat", "text"},
                       {"srlimit", "1"},
                       {"srprop", ""},
                       {"srinfo", "totalhits"}},
                      endpoint);
  const auto& total = require(answer, {"query", "searchinfo", "totalhits"}, endpoint);
  if (!total.is_number_unsigned() && !total.is_number_integer()) {
    malformed(endpoint, "query.searchinfo.totalhits");
  }
  return total.get<std::uint64_t>();
}

std::uint64_t WikipediaProvider::hit_count(std::string_view phrase) const {
  return total_hits(quoted(phrase), config_.api_url(lang_) + " [list=search totalhits]");
}

std::uint64_t WikipediaProvider::cooccurrence_count(std::string_view phrase_a,
                                                    std::string_view phrase_b) const {
  return total_hits(quoted(phrase_a) + " " + quoted(phrase_b),
                    config_.api_url(lang_) + " [list=search totalhits]");
}

std::uint64_t WikipediaProvider::article_count() const {
  std::lock_guard lock(article_count_mutex_);
  if (!article_count_) {
    const auto endpoint = config_.api_url(lang_) + " [meta=siteinfo]";
    auto answer = query({{"meta", "siteinfo"}, {"siprop", "statistics"}}, endpoint);
    article_count_ = require(answer, {"query", "statistics", "articles"}, endpoint).get<std::uint64_t>();
  }
  return *article_count_;
}

std::string WikipediaProvider::full_text(std::string_view title) const {
  const auto endpoint = config_.api_url(lang_) + " [prop=extracts]";
  auto page = single_page({{"prop", "extracts"},
                           {"explaintext", "1"},
                           {"exsectionformat", "plain"},
                           {"redirects", "1"},
                           {"titles", std::string(title)}},
                          endpoint);
  return page.value("extract", std::string());
}

std::string WikipediaProvider::description(std::string_view title) const {
  const auto endpoint = config_.api_url(lang_) + " [prop=extracts exintro]";
  auto page = single_page({{"prop", "extracts"},
                           {"exintro", "1"},
                           {"explaintext", "1"},
                           {"redirects", "1"},
                           {"titles", std::string(title)}},
                          endpoint);
  return page.value("extract", std::string());
}

std::optional<std::string> WikipediaProvider::thumbnail(std::string_view title) const {
  const auto endpoint = config_.api_url(lang_) + " [prop=pageimages]";
  auto page = single_page({{"prop", "pageimages"},
                           {"piprop", "thumbnail"},
                           {"pithumbsize", std::to_string(config_.thumbnail_size)},
                           {"redirects", "1"},
                           {"titles", std::string(title)}},
                          endpoint);
  if (!page.contains("thumbnail")) return std::nullopt;
  return require(page, {"thumbnail", "source"}, endpoint).get<std::string>();
}

std::vector<std::string> WikipediaProvider::out_links(std::string_view title) const {
  const auto endpoint = config_.api_url(lang_) + " [prop=links]";
  http::Params base{{"prop", "links"},
                    {"plnamespace", "0"},
                    {"pllimit", "max"},
                    {"redirects", "1"},
                    {"titles", std::string(title)}};
  std::vector<std::string> titles;
  http::Params cont;
  for (std::size_t page_no = 0; page_no < config_.max_pages; ++page_no) {
    auto params = base;
    params.insert(params.end(), cont.begin(), cont.end());
    auto answer = query(params, endpoint);
    const auto& pages = require(answer, {"query", "pages"}, endpoint);
    if (!pages.is_array() || pages.empty()) malformed(endpoint, "query.pages[0]");
    if (pages[0].contains("links")) {
      for (const auto& link : pages[0]["links"]) {
        titles.push_back(require(link, {"title"}, endpoint).get<std::string>());
      }
    }
    if (!answer.contains("continue")) break;
    cont.clear();
    for (const auto& [k, v] : answer["continue"].items()) cont.emplace_back(k, v.get<std::string>());
  }
  return titles;
}

std::vector<std::string> WikipediaProvider::in_links(std::string_view title, std::size_t limit) const {
  const auto endpoint = config_.api_url(lang_) + " [list=backlinks]";
  std::vector<std::string> titles;
  http::Params cont;
  for (std::size_t page_no = 0; page_no < config_.max_pages && titles.size() < limit; ++page_no) {
    http::Params params{{"list", "backlinks"},
                        {"bltitle", std::string(title)},
                        {"blnamespace", "0"},
                        {"blfilterredir", "nonredirects"},
                        {"bllimit", std::to_string(std::min<std::size_t>(limit - titles.size(), 500))}};
    params.insert(params.end(), cont.begin(), cont.end());
    auto answer = query(params, endpoint);
    for (const auto& link : require(answer, {"query", "backlinks"}, endpoint)) {
      if (titles.size() >= limit) break;
      titles.push_back(require(link, {"title"}, endpoint).get<std::string>());
    }
    if (!answer.contains("continue")) break;
    cont.clear();
    for (const auto& [k, v] : answer["continue"].items()) cont.emplace_back(k, v.get<std::string>());
  }
  return titles;
}

std::vector<std::string> WikipediaProvider::categories(std::string_view title) const {
  const auto endpoint = config_.api_url(lang_) + " [prop=categories]";
  auto page = single_page({{"prop", "categories"},
                           {"clshow", "!hidden"},
                           {"cllimit", "max"},
                           {"redirects", "1"},
                           {"titles", std::string(title)}},
                          endpoint);
  std::vector<std::string> names;
  if (page.contains("categories")) {
    for (const auto& c : page["categories"]) {
      names.push_back(strip_namespace(require(c, {"title"}, endpoint).get<std::string>()));
    }
  }
  return names;
}

std::vector<Passage> WikipediaProvider::search_snippets(std::string_view phrase_a,
                                                        std::string_view phrase_b,
                                                        std::size_t limit) const {
  const auto endpoint = config_.api_url(lang_) + " [list=search snippet]";
  auto answer = query({{"list", "search"},
                       {"srsearch", quoted(phrase_a) + " " + quoted(phrase_b)},
                       {"srnamespace", "0"},
                       {"srlimit", std::to_string(limit)},
                       {"srprop", "snippet"},
                       {"srinfo", ""}},
                      endpoint);
  std::vector<Passage> out;
  for (const auto& hit : require(answer, {"query", "search"}, endpoint)) {
    auto text = strip_html(hit.value("snippet", std::string()));
    if (text.find_first_not_of(" \t\n") == std::string::npos) continue;
    out.push_back({std::move(text), require(hit, {"title"}, endpoint).get<std::string>()});
  }
  return out;
}

DbpediaProvider::DbpediaProvider(LanguageCode lang, LiveConfig config,
                                 std::shared_ptr<const http::Transport> transport)
    : lang_(std::move(lang)), config_(std::move(config)), transport_(std::move(transport)) {}

std::string DbpediaProvider::resource_iri(std::string_view title) const {
  std::string iri = "<" + config_.resource_base(lang_);
  for (char c : title) {
    switch (c) {
      case ' ': iri += '_'; break;
      case '<': iri += "%3C"; break;
      case '>': iri += "%3E"; break;
      case '"': iri += "%22"; break;
      case '{': iri += "%7B"; break;
      case '}': iri += "%7D"; break;
      case '|': iri += "%7C"; break;
      case '^': iri += "%5E"; break;
      case '`': iri += "%60"; break;
      case '\\': iri += "%5C"; break;
      default: iri += c;
    }
  }
  return iri + ">";
}

std::string DbpediaProvider::categories_query(std::string_view title) const {
  return "SELECT ?category WHERE { " + resource_iri(title) +
         " <http://purl.org/dc/terms/subject> ?category }";
}

std::string DbpediaProvider::broader_query(std::string_view title) const {
  return "SELECT DISTINCT ?broader WHERE { " + resource_iri(title) +
         " <http://purl.org/dc/terms/subject> ?category . ?category "
         "<http://www.w3.org/2004/02/skos/core#broader> ?broader }";
}

std::string DbpediaProvider::narrower_query(std::string_view title, std::size_t limit) const {
  return "SELECT DISTINCT ?narrower WHERE { " + resource_iri(title) +
         " <http://purl.org/dc/terms/subject> ?category . ?narrower "
         "<http://www.w3.org/2004/02/skos/core#broader> ?category } LIMIT " +
         std::to_string(limit);
}

std::vector<std::string> DbpediaProvider::select_names(const std::string& sparql,
                                                       const char* variable,
                                                       const std::string& endpoint) const {
  const auto url = http::with_query(config_.sparql_url(lang_),
                                    {{"query", sparql}, {"format", "application/sparql-results+json"}});
  auto answer = http::get_json(*transport_, url, {{"Accept", "application/sparql-results+json"}},
                               config_.retry, endpoint);
  const auto& bindings = require(answer, {"results", "bindings"}, endpoint);
  if (!bindings.is_array()) malformed(endpoint, "results.bindings");
  std::vector<std::string> names;
  for (const auto& row : bindings) {
    const auto& value = require(row, {variable, "value"}, endpoint);
    auto name = name_from_iri(value.get<std::string>());
    if (!name.empty() && std::find(names.begin(), names.end(), name) == names.end()) {
      names.push_back(std::move(name));
    }
  }
  return names;
}

std::vector<std::string> DbpediaProvider::categories(std::string_view title) const {
  return select_names(categories_query(title), "category", config_.sparql_url(lang_) + " [dct:subject]");
}

std::vector<std::string> DbpediaProvider::broader(std::string_view title) const {
  return select_names(broader_query(title), "broader", config_.sparql_url(lang_) + " [skos:broader]");
}

std::vector<std::string> DbpediaProvider::narrower(std::string_view title, std::size_t limit) const {
  return select_names(narrower_query(title, limit), "narrower",
                      config_.sparql_url(lang_) + " [^skos:broader]");
}

std::string name_from_iri(std::string_view iri) {
  const auto slash = iri.rfind('/');
  auto segment = http::url_decode(slash == std::string_view::npos ? iri : iri.substr(slash + 1));
  // url_decode maps '+' to space, which is harmless for titles.
  const auto colon = segment.find(':');
  if (colon != std::string::npos) {
    const auto ns = segment.substr(0, colon);
    if (ns == "Category" || ns == "Kategorie") segment = segment.substr(colon + 1);
  }
  try {
    return canonical_title(segment);
  } catch (const EmptyInputError&) {
    return {};
  }
}

std::string strip_html(std::string_view html) {
  std::string text;
  bool in_tag = false;
  for (char c : html) {
    if (c == '<') {
      in_tag = true;
    } else if (c == '>' && in_tag) {
      in_tag = false;
    } else if (!in_tag) {
      text += c;
    }
  }
  static const std::pair<std::string_view, std::string_view> kEntities[] = {
      {"&quot;", "\""}, {"&#039;", "'"}, {"&#39;", "'"}, {"&lt;", "<"},
      {"&gt;", ">"},    {"&nbsp;", " "}, {"&amp;", "&"}};
  std::string out;
  for (std::size_t i = 0; i < text.size();) {
    bool replaced = false;
    if (text[i] == '&') {
      for (const auto& [entity, value] : kEntities) {
        if (std::string_view(text).substr(i, entity.size()) == entity) {
          out += value;
          i += entity.size();
          replaced = true;
          break;
        }
      }
    }
    if (!replaced) out += text[i++];
  }
  return out;
}

}  // namespace sere

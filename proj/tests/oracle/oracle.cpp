#include "oracle.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "json.hpp"

namespace oracle {

namespace {

using big = boost::multiprecision::cpp_bin_float_50;

bool word_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || (u >= '0' && u <= '9') || (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z');
}

bool space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::string normalize(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (space(c)) {
      if (!out.empty() && out.back() != ' ') out += ' ';
    } else {
      out += (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::size_t occurrences(std::string_view text, std::string_view phrase) {
  const auto t = normalize(text);
  const auto p = normalize(phrase);
  if (p.empty() || p.size() > t.size()) return 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i + p.size() <= t.size(); ++i) {
    if (t.compare(i, p.size(), p) != 0) continue;
    if (word_byte(p.front()) && i > 0 && word_byte(t[i - 1])) continue;
    const auto end = i + p.size();
    if (word_byte(p.back()) && end < t.size() && word_byte(t[end])) continue;
    ++n;
  }
  return n;
}

bool upper_start(std::string_view s, std::size_t i) {
  if (i >= s.size()) return false;
  const auto c = static_cast<unsigned char>(s[i]);
  if (c >= 'A' && c <= 'Z') return true;
  if (c == 0xC3 && i + 1 < s.size()) {
    const auto d = static_cast<unsigned char>(s[i + 1]);
    return d >= 0x80 && d <= 0x9E && d != 0x97;
  }
  return false;
}

std::string trimmed(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && space(s[b])) ++b;
  while (e > b && space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> strings(const nlohmann::json& line, const char* key) {
  std::vector<std::string> out;
  if (!line.contains(key)) return out;
  for (const auto& v : line.at(key)) {
    auto s = v.get<std::string>();
    std::replace(s.begin(), s.end(), '_', ' ');
    out.push_back(s);
  }
  return out;
}

bool namespaced(const std::string& title) {
  static const std::set<std::string> prefixes{"Category", "File", "Template", "Portal", "Help", "Wikipedia",
                                              "Talk", "User", "Draft", "Module", "Special", "Media",
                                              "MediaWiki", "Kategorie", "Datei", "Vorlage"};
  const auto colon = title.find(':');
  return colon != std::string::npos && prefixes.count(title.substr(0, colon)) > 0;
}

const Article* find(const std::vector<Article>& articles, const std::string& title) {
  for (const auto& a : articles) {
    if (a.title == title) return &a;
  }
  return nullptr;
}

}  // namespace

double wnd_direct(std::uint64_t a, std::uint64_t b, std::uint64_t both, std::uint64_t total) {
  const big A(a), B(b), AB(both), W(total);
  const big d = (log10(std::max(A, B)) - log10(AB)) / (log10(W) - log10(std::min(A, B)));
  return d.convert_to<double>();
}

bool phrase_in(std::string_view text, std::string_view phrase) { return occurrences(text, phrase) > 0; }

std::vector<std::string> sentences(std::string_view text) {
  static const std::vector<std::string> abbreviations{"e.g.", "i.e.", "z.B.", "Dr.", "St.", "Nr."};
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;

    std::size_t j = i + 1;
    while (j < text.size() && space(text[j])) ++j;
    const bool at_end = j == text.size();
    const bool boundary = at_end || (j > i + 1 && upper_start(text, j));
    if (!boundary) continue;

    if (c == '.') {
      std::size_t w = i;
      while (w > start && !space(text[w - 1])) --w;
      const auto word = text.substr(w, i + 1 - w);
      if (std::find(abbreviations.begin(), abbreviations.end(), word) != abbreviations.end()) continue;
    }
    auto s = trimmed(text.substr(start, i + 1 - start));
    if (!s.empty()) out.push_back(std::move(s));
    start = i + 1;
  }
  auto rest = trimmed(text.substr(std::min(start, text.size())));
  if (!rest.empty()) out.push_back(std::move(rest));
  return out;
}

std::vector<Article> load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<Article> out;
  std::string line;
  while (std::getline(in, line)) {
    if (trimmed(line).empty()) continue;
    const auto j = nlohmann::json::parse(line);
    Article a;
    a.title = j.at("title").get<std::string>();
    a.text = j.at("text").get<std::string>();
    a.links = strings(j, "links");
    a.categories = strings(j, "categories");
    a.broader = strings(j, "broader");
    a.narrower = strings(j, "narrower");
    a.description = j.value("description", "");
    const auto thumb = j.value("thumbnail", "");
    if (!thumb.empty()) a.thumbnail = thumb;
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<std::string> search(const std::vector<Article>& articles, std::string_view term, std::size_t limit) {
  const auto t = normalize(term);
  std::vector<std::tuple<int, long, std::string>> keyed;
  for (const auto& a : articles) {
    const auto title = normalize(a.title);
    if (title == t) {
      keyed.emplace_back(0, 0, a.title);
    } else if (title.size() > t.size() && title.compare(0, t.size(), t) == 0) {
      keyed.emplace_back(1, 0, a.title);
    } else if (const auto n = occurrences(a.text, term); n > 0) {
      keyed.emplace_back(2, -static_cast<long>(n), a.title);
    }
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::string> out;
  for (const auto& k : keyed) {
    if (out.size() == limit) break;
    out.push_back(std::get<2>(k));
  }
  return out;
}

std::size_t hits(const std::vector<Article>& articles, std::string_view phrase) {
  return static_cast<std::size_t>(
      std::count_if(articles.begin(), articles.end(), [&](const Article& a) { return phrase_in(a.text, phrase); }));
}

std::size_t cooccurrences(const std::vector<Article>& articles, std::string_view x, std::string_view y) {
  return static_cast<std::size_t>(std::count_if(articles.begin(), articles.end(), [&](const Article& a) {
    return phrase_in(a.text, x) && phrase_in(a.text, y);
  }));
}

std::pair<std::vector<std::optional<std::string>>, std::vector<std::pair<std::string, std::size_t>>>
group_categories(const std::vector<std::vector<std::string>>& entity_categories) {
  std::map<std::string, std::set<std::size_t>> groups;
  for (std::size_t e = 0; e < entity_categories.size(); ++e) {
    for (const auto& c : entity_categories[e]) groups[c].insert(e);
  }
  std::vector<std::optional<std::string>> assigned(entity_categories.size());
  std::map<std::string, std::size_t> counts;
  for (std::size_t e = 0; e < entity_categories.size(); ++e) {
    for (const auto& [name, members] : groups) {  // name ascending
      if (!members.count(e)) continue;
      if (!assigned[e] || members.size() > groups[*assigned[e]].size()) assigned[e] = name;
    }
    ++counts[assigned[e] ? *assigned[e] : std::string(sere::kUncategorized)];
  }
  std::vector<std::pair<std::string, std::size_t>> index(counts.begin(), counts.end());
  std::stable_sort(index.begin(), index.end(), [](const auto& x, const auto& y) { return x.second > y.second; });
  return {assigned, index};
}

sere::ExplorationResult explore(const std::vector<Article>& articles, std::string_view term) {
  constexpr std::size_t kCap = 3;
  const auto found = search(articles, term, 10);
  if (found.empty()) throw std::runtime_error("no match");
  const Article& subject = *find(articles, found.front());
  const sere::LanguageCode en("en");

  sere::ExplorationResult result;
  result.query = std::string(term);
  result.fields = sere::FieldSet::all();
  result.subject.title = subject.title;
  result.subject.url = sere::article_url(en, subject.title);
  result.subject.description = subject.description;
  result.subject.thumbnail = subject.thumbnail;

  std::map<std::string, sere::OriginSet> candidates;
  for (const auto& t : subject.links) candidates[t].insert(sere::RelationOrigin::out_link);
  for (const auto& a : articles) {
    if (std::find(a.links.begin(), a.links.end(), subject.title) != a.links.end()) {
      candidates[a.title].insert(sere::RelationOrigin::in_link);
    }
  }
  for (const auto& t : subject.broader) candidates[t].insert(sere::RelationOrigin::broader);
  for (const auto& t : subject.narrower) candidates[t].insert(sere::RelationOrigin::narrower);
  candidates.erase(subject.title);

  const auto a_hits = hits(articles, subject.title);
  const auto total = articles.size();
  std::vector<sere::RelatedEntity> entities;
  for (const auto& [title, origins] : candidates) {
    if (namespaced(title)) continue;
    const auto b_hits = hits(articles, title);
    const auto both = cooccurrences(articles, subject.title, title);
    if (b_hits == 0 || both == 0) continue;
    const double d = wnd_direct(a_hits, b_hits, both, total);
    const double r = std::clamp(1.0 - d, 0.0, 1.0);
    if (r <= 0.0) continue;

    sere::RelatedEntity e;
    e.subject.title = title;
    e.subject.url = sere::article_url(en, title);
    e.score = {d, r, true};
    e.origins = origins;
    if (const auto* article = find(articles, title)) {
      e.categories = article->categories;
      e.subject.thumbnail = article->thumbnail;
    }

    for (const auto& s : sentences(subject.text)) {
      if (e.snippets.size() == kCap) break;
      if (phrase_in(s, title)) e.snippets.push_back({s, sere::SnippetTrack::article_sentence, subject.title});
    }
    if (e.snippets.empty()) {
      std::vector<const Article*> sources;
      for (const auto& a : articles) {
        if (phrase_in(a.text, subject.title) && phrase_in(a.text, title)) sources.push_back(&a);
      }
      std::sort(sources.begin(), sources.end(), [](auto* x, auto* y) { return x->title < y->title; });
      for (const auto* a : sources) {
        if (e.snippets.size() == kCap) break;
        std::optional<std::string> pick;
        for (const auto& s : sentences(a->text)) {
          if (phrase_in(s, subject.title) && phrase_in(s, title)) {
            pick = s;
            break;
          }
        }
        if (!pick) {
          for (const auto& s : sentences(a->text)) {
            if (phrase_in(s, title)) {
              pick = s;
              break;
            }
          }
        }
        if (!pick) {
          for (const auto& s : sentences(a->text)) {
            if (phrase_in(s, subject.title)) {
              pick = s;
              break;
            }
          }
        }
        const bool duplicate = pick && std::any_of(e.snippets.begin(), e.snippets.end(),
                                                   [&](const sere::Snippet& s) { return s.text == *pick; });
        if (pick && !duplicate) e.snippets.push_back({*pick, sere::SnippetTrack::search_snippet, a->title});
      }
    }
    entities.push_back(std::move(e));
  }

  std::vector<std::vector<std::string>> cats;
  for (const auto& e : entities) cats.push_back(e.categories);
  const auto [assigned, index] = group_categories(cats);
  for (std::size_t i = 0; i < entities.size(); ++i) entities[i].assigned_category = assigned[i];
  for (const auto& [name, count] : index) result.category_index.push_back({name, count});

  std::sort(entities.begin(), entities.end(), [](const sere::RelatedEntity& x, const sere::RelatedEntity& y) {
    return std::make_pair(-x.score.relatedness, x.subject.title) < std::make_pair(-y.score.relatedness, y.subject.title);
  });
  result.entities = std::move(entities);
  return result;
}

}  // namespace oracle

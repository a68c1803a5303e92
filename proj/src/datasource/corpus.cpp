#include "sere/datasource/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <unordered_set>

#include "json.hpp"
#include "sere/errors.hpp"
#include "sere/text/match.hpp"
#include "sere/text/sentences.hpp"

namespace sere {

namespace {

const std::vector<std::string> kNoLinks;

std::vector<Corpus::DocId> intersect(const std::vector<Corpus::DocId>& a,
                                     const std::vector<Corpus::DocId>& b) {
  std::vector<Corpus::DocId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

Corpus Corpus::build(LanguageCode lang, std::vector<CorpusArticle> articles,
                     const std::vector<std::size_t>& lines) {
  Corpus c;
  c.lang_ = std::move(lang);
  c.articles_ = std::move(articles);
  const auto line_of = [&](std::size_t i) { return i < lines.size() ? lines[i] : i + 1; };

  for (std::size_t i = 0; i < c.articles_.size(); ++i) {
    const auto& a = c.articles_[i];
    const auto [it, inserted] = c.by_title_.emplace(a.title, static_cast<DocId>(i));
    if (!inserted) {
      throw CorpusError(CorpusErrorKind::duplicate_title, line_of(i),
                        "duplicate title '" + a.title + "' (first defined on line " +
                            std::to_string(line_of(it->second)) + ")");
    }
  }

  c.folded_text_.reserve(c.articles_.size());
  c.folded_title_.reserve(c.articles_.size());
  for (std::size_t i = 0; i < c.articles_.size(); ++i) {
    const auto& a = c.articles_[i];
    c.folded_text_.push_back(text::fold(a.text));
    c.folded_title_.push_back(text::fold(a.title));
    std::unordered_set<std::string_view> seen;
    for (auto tok : text::tokens(c.folded_text_.back())) {
      if (seen.insert(tok).second) c.postings_[std::string(tok)].push_back(static_cast<DocId>(i));
    }
    std::unordered_set<std::string_view> linked;
    for (const auto& target : a.links) {
      if (linked.insert(target).second) c.inlinks_[target].push_back(a.title);
    }
  }
  return c;
}

const CorpusArticle* Corpus::find(std::string_view title) const {
  auto it = by_title_.find(std::string(title));
  return it == by_title_.end() ? nullptr : &articles_[it->second];
}

std::vector<Corpus::DocId> Corpus::candidate_docs(std::string_view folded_phrase) const {
  const auto toks = text::tokens(folded_phrase);
  if (toks.empty()) {
    std::vector<DocId> all(articles_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<DocId>(i);
    return all;
  }
  std::vector<DocId> docs;
  bool first = true;
  for (auto tok : toks) {
    auto it = postings_.find(std::string(tok));
    if (it == postings_.end()) return {};
    docs = first ? it->second : intersect(docs, it->second);
    first = false;
    if (docs.empty()) break;
  }
  return docs;
}

std::vector<Corpus::DocId> Corpus::matching_docs(std::string_view phrase) const {
  const auto folded = text::fold(phrase);
  if (folded.empty()) return {};
  std::vector<DocId> out;
  for (auto doc : candidate_docs(folded)) {
    if (text::contains(folded_text_[doc], folded)) out.push_back(doc);
  }
  return out;
}

std::uint64_t Corpus::hit_count(std::string_view phrase) const {
  return matching_docs(phrase).size();
}

std::uint64_t Corpus::cooccurrence(std::string_view phrase_a, std::string_view phrase_b) const {
  return intersect(matching_docs(phrase_a), matching_docs(phrase_b)).size();
}

std::vector<std::string> Corpus::search(std::string_view term, std::size_t limit) const {
  const auto folded = text::fold(term);
  if (folded.empty() || limit == 0) return {};

  struct Ranked {
    int tier;
    std::size_t frequency;
    const std::string* title;
  };
  std::vector<Ranked> ranked;
  std::unordered_set<DocId> placed;
  for (std::size_t i = 0; i < articles_.size(); ++i) {
    const auto& ft = folded_title_[i];
    if (ft == folded) {
      ranked.push_back({0, 0, &articles_[i].title});
      placed.insert(static_cast<DocId>(i));
    } else if (ft.starts_with(folded)) {
      ranked.push_back({1, 0, &articles_[i].title});
      placed.insert(static_cast<DocId>(i));
    }
  }
  for (auto doc : candidate_docs(folded)) {
    if (placed.contains(doc)) continue;
    const auto freq = text::count_matches(folded_text_[doc], folded);
    if (freq > 0) ranked.push_back({2, freq, &articles_[doc].title});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& x, const Ranked& y) {
    if (x.tier != y.tier) return x.tier < y.tier;
    if (x.frequency != y.frequency) return x.frequency > y.frequency;
    return *x.title < *y.title;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < ranked.size() && i < limit; ++i) out.push_back(*ranked[i].title);
  return out;
}

const std::vector<std::string>& Corpus::in_links(std::string_view title) const {
  auto it = inlinks_.find(std::string(title));
  return it == inlinks_.end() ? kNoLinks : it->second;
}

CorpusStats Corpus::stats() const {
  CorpusStats s;
  s.articles = articles_.size();
  s.distinct_tokens = postings_.size();
  for (const auto& [tok, docs] : postings_) s.postings += docs.size();
  for (const auto& a : articles_) s.links += a.links.size();
  s.linked_targets = inlinks_.size();
  return s;
}

namespace {

using nlohmann::json;

std::vector<std::string> read_names(const json& obj, const char* key, std::size_t line,
                                    bool required, bool as_title) {
  std::vector<std::string> out;
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    if (required) {
      throw CorpusError(CorpusErrorKind::missing_field, line,
                        std::string("missing required field '") + key + "'");
    }
    return out;
  }
  if (!it->is_array()) {
    throw CorpusError(CorpusErrorKind::parse, line, std::string("field '") + key + "' must be an array");
  }
  for (const auto& v : *it) {
    if (!v.is_string()) {
      throw CorpusError(CorpusErrorKind::parse, line,
                        std::string("field '") + key + "' must contain strings");
    }
    try {
      out.push_back(as_title ? canonical_title(v.get<std::string>()) : v.get<std::string>());
    } catch (const EmptyInputError&) {
      throw CorpusError(CorpusErrorKind::parse, line,
                        std::string("field '") + key + "' contains a blank entry");
    }
  }
  return out;
}

std::string read_string(const json& obj, const char* key, std::size_t line, bool required) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    if (required) {
      throw CorpusError(CorpusErrorKind::missing_field, line,
                        std::string("missing required field '") + key + "'");
    }
    return {};
  }
  if (!it->is_string()) {
    throw CorpusError(CorpusErrorKind::parse, line, std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

CorpusArticle parse_article(std::string_view line_text, std::size_t line) {
  json obj;
  try {
    obj = json::parse(line_text);
  } catch (const json::parse_error& e) {
    throw CorpusError(CorpusErrorKind::parse, line, std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) throw CorpusError(CorpusErrorKind::parse, line, "expected a JSON object");

  CorpusArticle a;
  try {
    a.title = canonical_title(read_string(obj, "title", line, true));
  } catch (const EmptyInputError&) {
    throw CorpusError(CorpusErrorKind::parse, line, "title is blank");
  }
  a.text = read_string(obj, "text", line, true);
  a.links = read_names(obj, "links", line, true, true);
  a.categories = read_names(obj, "categories", line, true, true);
  a.broader = read_names(obj, "broader", line, false, true);
  a.narrower = read_names(obj, "narrower", line, false, true);
  a.description = read_string(obj, "description", line, false);
  auto thumb = read_string(obj, "thumbnail", line, false);
  if (!thumb.empty()) a.thumbnail = std::move(thumb);
  return a;
}

bool blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

}  // namespace

Corpus parse_corpus(std::istream& in, const LanguageCode& lang) {
  std::vector<CorpusArticle> articles;
  std::vector<std::size_t> lines;
  std::string line_text;
  std::size_t line = 0;
  while (std::getline(in, line_text)) {
    ++line;
    if (blank(line_text)) continue;
    articles.push_back(parse_article(line_text, line));
    lines.push_back(line);
  }
  return Corpus::build(lang, std::move(articles), lines);
}

Corpus ingest_corpus(const std::filesystem::path& path, const LanguageCode& lang) {
  std::ifstream in(path);
  if (!in) throw CorpusError(CorpusErrorKind::io, 0, "cannot open corpus file " + path.string());
  return parse_corpus(in, lang);
}

std::vector<std::string> CorpusProvider::search(std::string_view term, std::size_t limit) const {
  return corpus_->search(term, limit);
}

std::uint64_t CorpusProvider::hit_count(std::string_view phrase) const {
  return corpus_->hit_count(phrase);
}

std::uint64_t CorpusProvider::cooccurrence_count(std::string_view phrase_a,
                                                 std::string_view phrase_b) const {
  return corpus_->cooccurrence(phrase_a, phrase_b);
}

std::uint64_t CorpusProvider::article_count() const { return corpus_->size(); }

std::string CorpusProvider::full_text(std::string_view title) const {
  const auto* a = corpus_->find(title);
  return a ? a->text : std::string{};
}

std::vector<std::string> CorpusProvider::out_links(std::string_view title) const {
  const auto* a = corpus_->find(title);
  return a ? a->links : std::vector<std::string>{};
}

std::vector<std::string> CorpusProvider::in_links(std::string_view title, std::size_t limit) const {
  const auto& all = corpus_->in_links(title);
  return {all.begin(), all.begin() + static_cast<std::ptrdiff_t>(std::min(limit, all.size()))};
}

std::vector<std::string> CorpusProvider::categories(std::string_view title) const {
  const auto* a = corpus_->find(title);
  return a ? a->categories : std::vector<std::string>{};
}

std::vector<std::string> CorpusProvider::broader(std::string_view title) const {
  const auto* a = corpus_->find(title);
  return a ? a->broader : std::vector<std::string>{};
}

std::vector<std::string> CorpusProvider::narrower(std::string_view title, std::size_t limit) const {
  const auto* a = corpus_->find(title);
  if (!a) return {};
  const auto n = std::min(limit, a->narrower.size());
  return {a->narrower.begin(), a->narrower.begin() + static_cast<std::ptrdiff_t>(n)};
}

std::string CorpusProvider::description(std::string_view title) const {
  const auto* a = corpus_->find(title);
  return a ? a->description : std::string{};
}

std::optional<std::string> CorpusProvider::thumbnail(std::string_view title) const {
  const auto* a = corpus_->find(title);
  return a ? a->thumbnail : std::nullopt;
}

std::vector<Passage> CorpusProvider::search_snippets(std::string_view phrase_a,
                                                     std::string_view phrase_b,
                                                     std::size_t limit) const {
  const auto docs = intersect(corpus_->matching_docs(phrase_a), corpus_->matching_docs(phrase_b));
  std::vector<const CorpusArticle*> hits;
  for (auto d : docs) hits.push_back(&corpus_->articles()[d]);
  std::sort(hits.begin(), hits.end(),
            [](const CorpusArticle* x, const CorpusArticle* y) { return x->title < y->title; });

  const auto fa = text::fold(phrase_a);
  const auto fb = text::fold(phrase_b);
  std::vector<Passage> out;
  for (const auto* a : hits) {
    if (out.size() >= limit) break;
    const auto sentences = text::split_sentences(a->text);
    const std::string* chosen = nullptr;
    const std::string* with_b = nullptr;
    const std::string* with_a = nullptr;
    for (const auto& s : sentences) {
      const auto fs = text::fold(s);
      const bool has_a = text::contains(fs, fa);
      const bool has_b = text::contains(fs, fb);
      if (has_a && has_b) {
        chosen = &s;
        break;
      }
      if (has_b && !with_b) with_b = &s;
      if (has_a && !with_a) with_a = &s;
    }
    if (!chosen) chosen = with_b ? with_b : with_a;
    if (chosen) out.push_back({*chosen, a->title});
  }
  return out;
}

}  // namespace sere

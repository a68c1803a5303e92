#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sere/datasource/provider.hpp"
#include "sere/model.hpp"

namespace sere {

struct CorpusArticle {
  std::string title;
  std::string text;
  std::vector<std::string> links;
  std::vector<std::string> categories;
  std::vector<std::string> broader;
  std::vector<std::string> narrower;
  std::string description;
  std::optional<std::string> thumbnail;
};

struct CorpusStats {
  std::size_t articles = 0;
  std::size_t distinct_tokens = 0;
  std::size_t postings = 0;
  std::size_t links = 0;
  std::size_t linked_targets = 0;
};

/// Immutable offline encyclopedia with a token index for phrase queries and a
/// reverse link map.
class Corpus {
 public:
  using DocId = std::uint32_t;

  /// Throws CorpusError(duplicate_title) naming the repeated title; `lines`
  /// optionally maps article index to source line for that message.
  static Corpus build(LanguageCode lang, std::vector<CorpusArticle> articles,
                      const std::vector<std::size_t>& lines = {});

  const LanguageCode& lang() const noexcept { return lang_; }
  std::size_t size() const noexcept { return articles_.size(); }
  const std::vector<CorpusArticle>& articles() const noexcept { return articles_; }
  const CorpusArticle* find(std::string_view title) const;

  /// Folded full text of an article, as seen by the match rule.
  const std::string& folded_text(DocId doc) const { return folded_text_[doc]; }

  /// Articles matching the phrase, ascending by document id.
  std::vector<DocId> matching_docs(std::string_view phrase) const;
  std::uint64_t hit_count(std::string_view phrase) const;
  std::uint64_t cooccurrence(std::string_view phrase_a, std::string_view phrase_b) const;

  /// Exact title matches, then title-prefix matches, then full-text matches
  /// by descending phrase frequency; ties by title. Titles compare folded.
  std::vector<std::string> search(std::string_view term, std::size_t limit) const;

  /// Articles linking to `title`, in corpus order.
  const std::vector<std::string>& in_links(std::string_view title) const;

  CorpusStats stats() const;

 private:
  Corpus() : lang_("en") {}
  std::vector<DocId> candidate_docs(std::string_view folded_phrase) const;

  LanguageCode lang_;
  std::vector<CorpusArticle> articles_;
  std::vector<std::string> folded_text_;
  std::vector<std::string> folded_title_;
  std::unordered_map<std::string, DocId> by_title_;
  std::unordered_map<std::string, std::vector<DocId>> postings_;
  std::unordered_map<std::string, std::vector<std::string>> inlinks_;
};

/// Reads the JSON Lines corpus format. Throws CorpusError with the 1-based
/// line number for malformed lines, missing required keys and duplicates.
Corpus parse_corpus(std::istream& in, const LanguageCode& lang);
Corpus ingest_corpus(const std::filesystem::path& path, const LanguageCode& lang = LanguageCode("en"));

class CorpusProvider final : public Provider {
 public:
  explicit CorpusProvider(std::shared_ptr<const Corpus> corpus) : corpus_(std::move(corpus)) {}

  const Corpus& corpus() const noexcept { return *corpus_; }

  std::string name() const override { return "corpus"; }
  std::vector<std::string> search(std::string_view term, std::size_t limit) const override;
  std::uint64_t hit_count(std::string_view phrase) const override;
  std::uint64_t cooccurrence_count(std::string_view phrase_a,
                                   std::string_view phrase_b) const override;
  std::uint64_t article_count() const override;
  std::string full_text(std::string_view title) const override;
  std::vector<std::string> out_links(std::string_view title) const override;
  std::vector<std::string> in_links(std::string_view title, std::size_t limit) const override;
  std::vector<std::string> categories(std::string_view title) const override;
  std::vector<std::string> broader(std::string_view title) const override;
  std::vector<std::string> narrower(std::string_view title, std::size_t limit) const override;
  std::string description(std::string_view title) const override;
  std::optional<std::string> thumbnail(std::string_view title) const override;
  /// One passage per article matching both phrases, by title: the first
  /// sentence containing both, else the first containing phrase_b, else the
  /// first containing phrase_a.
  std::vector<Passage> search_snippets(std::string_view phrase_a, std::string_view phrase_b,
                                       std::size_t limit) const override;

 private:
  std::shared_ptr<const Corpus> corpus_;
};

}  // namespace sere

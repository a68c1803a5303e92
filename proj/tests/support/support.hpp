#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "sere/datasource/corpus.hpp"
#include "sere/datasource/provider.hpp"
#include "sere/errors.hpp"

namespace support {

inline std::filesystem::path source_path(const std::string& relative) {
  return std::filesystem::path(SERE_SOURCE_DIR) / relative;
}

inline std::filesystem::path demo_corpus() { return source_path("fixtures/demo.jsonl"); }
inline std::filesystem::path replay_dir() { return source_path("tests/fixtures/replay"); }

/// In-memory provider. Every capability reads from the public maps; methods
/// named in `failing` throw a retriable network error instead.
class FakeProvider : public sere::Provider {
 public:
  std::string name() const override { return "fake"; }

  std::map<std::string, std::vector<std::string>> search_results;
  std::map<std::string, std::uint64_t> hits;
  std::map<std::pair<std::string, std::string>, std::uint64_t> pair_hits;
  std::uint64_t total = 1000;
  std::map<std::string, std::string> texts;
  std::map<std::string, std::vector<std::string>> outs;
  std::map<std::string, std::vector<std::string>> ins;
  std::map<std::string, std::vector<std::string>> cats;
  std::map<std::string, std::vector<std::string>> up;
  std::map<std::string, std::vector<std::string>> down;
  std::map<std::string, std::string> descriptions;
  std::map<std::string, std::string> thumbs;
  std::map<std::pair<std::string, std::string>, std::vector<sere::Passage>> passages;
  std::set<std::string> failing;

  std::vector<std::string> search(std::string_view term, std::size_t limit) const override {
    fail_if("search");
    auto it = search_results.find(std::string(term));
    if (it == search_results.end()) return {};
    auto out = it->second;
    if (out.size() > limit) out.resize(limit);
    return out;
  }
  std::uint64_t hit_count(std::string_view phrase) const override {
    fail_if("hit_count");
    auto it = hits.find(std::string(phrase));
    return it == hits.end() ? 0 : it->second;
  }
  std::uint64_t cooccurrence_count(std::string_view a, std::string_view b) const override {
    fail_if("cooccurrence_count");
    auto it = pair_hits.find({std::string(a), std::string(b)});
    if (it == pair_hits.end()) it = pair_hits.find({std::string(b), std::string(a)});
    return it == pair_hits.end() ? 0 : it->second;
  }
  std::uint64_t article_count() const override {
    fail_if("article_count");
    return total;
  }
  std::string full_text(std::string_view title) const override {
    fail_if("full_text");
    return lookup(texts, title);
  }
  std::vector<std::string> out_links(std::string_view title) const override {
    fail_if("out_links");
    return lookup(outs, title);
  }
  std::vector<std::string> in_links(std::string_view title, std::size_t limit) const override {
    fail_if("in_links");
    auto v = lookup(ins, title);
    if (v.size() > limit) v.resize(limit);
    return v;
  }
  std::vector<std::string> categories(std::string_view title) const override {
    fail_if("categories");
    return lookup(cats, title);
  }
  std::vector<std::string> broader(std::string_view title) const override {
    fail_if("broader");
    return lookup(up, title);
  }
  std::vector<std::string> narrower(std::string_view title, std::size_t limit) const override {
    fail_if("narrower");
    auto v = lookup(down, title);
    if (v.size() > limit) v.resize(limit);
    return v;
  }
  std::string description(std::string_view title) const override {
    fail_if("description");
    return lookup(descriptions, title);
  }
  std::optional<std::string> thumbnail(std::string_view title) const override {
    fail_if("thumbnail");
    auto it = thumbs.find(std::string(title));
    if (it == thumbs.end()) return std::nullopt;
    return it->second;
  }
  std::vector<sere::Passage> search_snippets(std::string_view a, std::string_view b,
                                             std::size_t limit) const override {
    fail_if("search_snippets");
    auto it = passages.find({std::string(a), std::string(b)});
    if (it == passages.end()) return {};
    auto out = it->second;
    if (out.size() > limit) out.resize(limit);
    return out;
  }

 private:
  void fail_if(const char* method) const {
    if (failing.count(method)) {
      throw sere::ProviderError(sere::ProviderErrorKind::network, std::string("fake/") + method, "injected failure",
                                true);
    }
  }
  template <class Map>
  static typename Map::mapped_type lookup(const Map& m, std::string_view key) {
    auto it = m.find(std::string(key));
    return it == m.end() ? typename Map::mapped_type{} : it->second;
  }
};

/// Wraps a provider, records the peak number of concurrent calls and holds
/// each call open briefly so that overlapping calls actually overlap.
class InFlightProbe : public sere::Provider {
 public:
  InFlightProbe(std::shared_ptr<const sere::Provider> inner, std::chrono::microseconds hold)
      : inner_(std::move(inner)), hold_(hold) {}

  std::size_t peak() const { return peak_.load(); }
  std::size_t calls() const { return calls_.load(); }

 private:
  template <class Fn>
  auto timed(Fn&& fn) const {
    const auto now = ++current_;
    ++calls_;
    auto seen = peak_.load();
    while (now > seen && !peak_.compare_exchange_weak(seen, now)) {
    }
    struct Leave {
      std::atomic<std::size_t>& c;
      ~Leave() { --c; }
    } leave{current_};
    std::this_thread::sleep_for(hold_);
    return fn();
  }

 public:
  std::string name() const override { return "probe(" + inner_->name() + ")"; }
  std::vector<std::string> search(std::string_view t, std::size_t l) const override {
    return timed([&] { return inner_->search(t, l); });
  }
  std::uint64_t hit_count(std::string_view p) const override {
    return timed([&] { return inner_->hit_count(p); });
  }
  std::uint64_t cooccurrence_count(std::string_view a, std::string_view b) const override {
    return timed([&] { return inner_->cooccurrence_count(a, b); });
  }
  std::uint64_t article_count() const override {
    return timed([&] { return inner_->article_count(); });
  }
  std::string full_text(std::string_view t) const override {
    return timed([&] { return inner_->full_text(t); });
  }
  std::vector<std::string> out_links(std::string_view t) const override {
    return timed([&] { return inner_->out_links(t); });
  }
  std::vector<std::string> in_links(std::string_view t, std::size_t l) const override {
    return timed([&] { return inner_->in_links(t, l); });
  }
  std::vector<std::string> categories(std::string_view t) const override {
    return timed([&] { return inner_->categories(t); });
  }
  std::vector<std::string> broader(std::string_view t) const override {
    return timed([&] { return inner_->broader(t); });
  }
  std::vector<std::string> narrower(std::string_view t, std::size_t l) const override {
    return timed([&] { return inner_->narrower(t, l); });
  }
  std::string description(std::string_view t) const override {
    return timed([&] { return inner_->description(t); });
  }
  std::optional<std::string> thumbnail(std::string_view t) const override {
    return timed([&] { return inner_->thumbnail(t); });
  }
  std::vector<sere::Passage> search_snippets(std::string_view a, std::string_view b,
                                             std::size_t l) const override {
    return timed([&] { return inner_->search_snippets(a, b, l); });
  }

 private:
  std::shared_ptr<const sere::Provider> inner_;
  std::chrono::microseconds hold_;
  mutable std::atomic<std::size_t> current_{0};
  mutable std::atomic<std::size_t> peak_{0};
  mutable std::atomic<std::size_t> calls_{0};
};

/// Random corpus over a small vocabulary so that multi-word phrases recur.
/// Words mix case, digits, punctuation and UTF-8 to exercise the match rule.
struct RandomCorpus {
  std::vector<sere::CorpusArticle> articles;
  std::vector<std::string> vocabulary;
};

inline RandomCorpus make_random_corpus(std::uint32_t seed, std::size_t n_articles) {
  std::mt19937 rng(seed);
  RandomCorpus rc;
  rc.vocabulary = {"euro", "Euro", "EURO", "eurozone", "crisis", "bank", "banks", "Merkel", "kohl", "union",
                   "european", "central", "debt", "Greek", "bail-out", "ECB", "2008", "x2", "über", "Straße",
                   "naïve", "AT&T", "C++", "e.g.", "policy", "the", "of", "and", "in", "a"};
  std::uniform_int_distribution<std::size_t> word(0, rc.vocabulary.size() - 1);
  std::uniform_int_distribution<int> length(5, 120);
  std::uniform_int_distribution<int> sep(0, 19);
  for (std::size_t i = 0; i < n_articles; ++i) {
    sere::CorpusArticle a;
    a.title = "Article " + std::to_string(i);
    const int n = length(rng);
    for (int w = 0; w < n; ++w) {
      if (w > 0) {
        const int s = sep(rng);
        a.text += s == 0 ? ". " : s == 1 ? ",  " : s == 2 ? "\n" : s == 3 ? "-" : s == 4 ? "\t " : " ";
      }
      a.text += rc.vocabulary[word(rng)];
    }
    rc.articles.push_back(std::move(a));
  }
  return rc;
}

/// Phrases of one to three vocabulary words with random case and spacing,
/// plus a share of phrases that occur nowhere.
inline std::vector<std::string> make_random_phrases(const RandomCorpus& rc, std::uint32_t seed, std::size_t n) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> word(0, rc.vocabulary.size() - 1);
  std::uniform_int_distribution<int> words(1, 3);
  std::uniform_int_distribution<int> coin(0, 9);
  std::vector<std::string> out;
  while (out.size() < n) {
    if (coin(rng) == 0) {
      out.push_back("zzz absent " + std::to_string(out.size()));
      continue;
    }
    std::string p;
    const int k = words(rng);
    for (int i = 0; i < k; ++i) {
      if (i > 0) p += coin(rng) == 0 ? "  " : " ";
      auto w = rc.vocabulary[word(rng)];
      if (coin(rng) == 0) std::transform(w.begin(), w.end(), w.begin(), [](char c) {
          return (c >= 'a' && c <= 'z') ? static_cast<char>(c - 32) : c;
        });
      p += w;
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace support

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sere {

/// A text passage returned by an AND-phrase search.
struct Passage {
  std::string text;
  std::string source_title;

  friend bool operator==(const Passage&, const Passage&) = default;
};

/// Uniform access to an encyclopedia backend. Implementations must be safe to
/// call from many threads at once. Capabilities a backend lacks throw
/// ProviderError with kind `unsupported`.
class Provider {
 public:
  virtual ~Provider() = default;

  virtual std::string name() const = 0;

  virtual std::vector<std::string> search(std::string_view term, std::size_t limit) const;
  virtual std::uint64_t hit_count(std::string_view phrase) const;
  virtual std::uint64_t cooccurrence_count(std::string_view phrase_a,
                                           std::string_view phrase_b) const;
  virtual std::uint64_t article_count() const;
  virtual std::string full_text(std::string_view title) const;
  virtual std::vector<std::string> out_links(std::string_view title) const;
  virtual std::vector<std::string> in_links(std::string_view title, std::size_t limit) const;
  virtual std::vector<std::string> categories(std::string_view title) const;
  virtual std::vector<std::string> broader(std::string_view title) const;
  virtual std::vector<std::string> narrower(std::string_view title, std::size_t limit) const;
  virtual std::string description(std::string_view title) const;
  virtual std::optional<std::string> thumbnail(std::string_view title) const;
  virtual std::vector<Passage> search_snippets(std::string_view phrase_a, std::string_view phrase_b,
                                               std::size_t limit) const;

 protected:
  [[noreturn]] void unsupported(const char* capability) const;
};

/// Text-side source (search, counts, links, texts) and semantic-side source
/// (categories and hierarchy). Both may be the same object.
struct Providers {
  std::shared_ptr<const Provider> wiki;
  std::shared_ptr<const Provider> semantic;
};

}  // namespace sere

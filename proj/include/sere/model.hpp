#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sere {

/// Two-letter lowercase Wikipedia edition tag ("en", "de").
class LanguageCode {
 public:
  explicit LanguageCode(std::string_view code);

  const std::string& str() const noexcept { return code_; }
  static bool valid(std::string_view code) noexcept;

  friend bool operator==(const LanguageCode&, const LanguageCode&) = default;
  friend auto operator<=>(const LanguageCode&, const LanguageCode&) = default;

 private:
  std::string code_;
};

/// Full-text hit counts feeding the distance formula.
///
/// `both` is clamped to min(a, b) on construction; `clamped()` reports whether
/// that happened so callers can surface a warning.
class HitCounts {
 public:
  HitCounts(std::uint64_t a, std::uint64_t b, std::uint64_t both, std::uint64_t total);

  std::uint64_t a() const noexcept { return a_; }
  std::uint64_t b() const noexcept { return b_; }
  std::uint64_t both() const noexcept { return both_; }
  std::uint64_t total() const noexcept { return total_; }
  bool clamped() const noexcept { return clamped_; }

 private:
  std::uint64_t a_;
  std::uint64_t b_;
  std::uint64_t both_;
  std::uint64_t total_;
  bool clamped_ = false;
};

struct RelatednessScore {
  double distance = 0.0;  // +infinity when the pair never co-occurs
  double relatedness = 0.0;
  bool cooccurring = false;

  bool infinite() const noexcept;
  friend bool operator==(const RelatednessScore&, const RelatednessScore&) = default;
};

struct Concept {
  std::string title;
  std::string url;
  LanguageCode lang{"en"};
  std::string description;
  std::optional<std::string> thumbnail;

  friend bool operator==(const Concept&, const Concept&) = default;
};

Concept make_concept(const LanguageCode& lang, std::string_view title);

enum class RelationOrigin : std::uint8_t { in_link, out_link, broader, narrower, category_sibling };

const char* to_string(RelationOrigin origin) noexcept;

class OriginSet {
 public:
  OriginSet() = default;
  OriginSet(std::initializer_list<RelationOrigin> origins);

  void insert(RelationOrigin origin) noexcept { bits_ |= bit(origin); }
  bool contains(RelationOrigin origin) const noexcept { return (bits_ & bit(origin)) != 0; }
  bool empty() const noexcept { return bits_ == 0; }
  OriginSet& operator|=(OriginSet other) noexcept {
    bits_ |= other.bits_;
    return *this;
  }
  std::vector<RelationOrigin> items() const;

  friend bool operator==(OriginSet, OriginSet) = default;

 private:
  static std::uint8_t bit(RelationOrigin origin) noexcept {
    return static_cast<std::uint8_t>(1U << static_cast<unsigned>(origin));
  }
  std::uint8_t bits_ = 0;
};

enum class SnippetTrack : std::uint8_t { article_sentence, search_snippet };

const char* to_string(SnippetTrack track) noexcept;
std::optional<SnippetTrack> parse_snippet_track(std::string_view name) noexcept;

struct Snippet {
  std::string text;
  SnippetTrack track = SnippetTrack::article_sentence;
  std::string source_title;

  friend bool operator==(const Snippet&, const Snippet&) = default;
};

struct RelatedEntity {
  Concept subject;
  RelatednessScore score;
  OriginSet origins;
  std::vector<std::string> categories;
  std::optional<std::string> assigned_category;
  std::vector<Snippet> snippets;

  friend bool operator==(const RelatedEntity&, const RelatedEntity&) = default;
};

struct CategoryCount {
  std::string name;
  std::size_t count = 0;

  friend bool operator==(const CategoryCount&, const CategoryCount&) = default;
};

inline constexpr std::string_view kUncategorized = "(uncategorized)";

/// Output fields a caller can select.
enum class Field : std::uint8_t { sr, category, thumbnail, snippets, description };

inline constexpr Field kAllFieldValues[] = {Field::sr, Field::category, Field::thumbnail,
                                            Field::snippets, Field::description};

const char* to_string(Field field) noexcept;

class FieldSet {
 public:
  FieldSet() = default;
  FieldSet(std::initializer_list<Field> fields);

  static FieldSet all() noexcept;
  /// Parses a comma-separated list; blank input selects every field.
  /// Throws UnknownFieldError naming the first unrecognised entry.
  static FieldSet parse(std::string_view csv);

  bool has(Field field) const noexcept { return (bits_ & bit(field)) != 0; }
  void insert(Field field) noexcept { bits_ |= bit(field); }
  bool subset_of(FieldSet other) const noexcept { return (bits_ & ~other.bits_) == 0; }
  std::uint8_t bits() const noexcept { return bits_; }
  /// Field names in declaration order, comma-joined.
  std::string to_csv() const;

  friend bool operator==(FieldSet, FieldSet) = default;

 private:
  static std::uint8_t bit(Field field) noexcept {
    return static_cast<std::uint8_t>(1U << static_cast<unsigned>(field));
  }
  std::uint8_t bits_ = 0;
};

struct ExplorationResult {
  std::string query;
  Concept subject;
  std::vector<RelatedEntity> entities;
  std::vector<CategoryCount> category_index;
  std::chrono::system_clock::time_point generated_at{};
  bool from_cache = false;
  FieldSet fields = FieldSet::all();
  std::vector<std::string> warnings;
  std::size_t inlink_cap = 0;  // in-link cap in force when the result was built
};

/// Underscores to spaces, whitespace collapsed and trimmed, first letter
/// uppercased. Throws EmptyInputError on blank input.
std::string canonical_title(std::string_view raw);

/// Percent-encodes every byte outside the RFC 3986 unreserved set.
std::string percent_encode(std::string_view raw);

std::string article_url(const LanguageCode& lang, std::string_view title);

/// Checks ordering and category-index invariants; returns one message per
/// violation, empty when the result is well formed.
std::vector<std::string> validate(const ExplorationResult& result);

}  // namespace sere

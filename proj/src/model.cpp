#include "sere/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "sere/errors.hpp"

namespace sere {

const char* to_string(ProviderErrorKind kind) noexcept {
  switch (kind) {
    case ProviderErrorKind::network: return "network";
    case ProviderErrorKind::http_status: return "http_status";
    case ProviderErrorKind::malformed_response: return "malformed_response";
    case ProviderErrorKind::rate_limit: return "rate_limit";
    case ProviderErrorKind::unsupported: return "unsupported";
  }
  return "unknown";
}

LanguageCode::LanguageCode(std::string_view code) : code_(code) {
  if (!valid(code)) {
    throw std::invalid_argument("invalid language code '" + std::string(code) + "'");
  }
}

bool LanguageCode::valid(std::string_view code) noexcept {
  return code.size() == 2 &&
         std::all_of(code.begin(), code.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

HitCounts::HitCounts(std::uint64_t a, std::uint64_t b, std::uint64_t both, std::uint64_t total)
    : a_(a), b_(b), both_(both), total_(total) {
  if (total == 0) throw std::invalid_argument("article total must be positive");
  if (total < std::max(a, b)) {
    throw std::invalid_argument("hit count exceeds the article total");
  }
  if (both > std::min(a, b)) {
    both_ = std::min(a, b);
    clamped_ = true;
  }
}

bool RelatednessScore::infinite() const noexcept { return std::isinf(distance); }

Concept make_concept(const LanguageCode& lang, std::string_view title) {
  Concept c;
  c.title = canonical_title(title);
  c.url = article_url(lang, c.title);
  c.lang = lang;
  return c;
}

const char* to_string(RelationOrigin origin) noexcept {
  switch (origin) {
    case RelationOrigin::in_link: return "in_link";
    case RelationOrigin::out_link: return "out_link";
    case RelationOrigin::broader: return "broader";
    case RelationOrigin::narrower: return "narrower";
    case RelationOrigin::category_sibling: return "category_sibling";
  }
  return "unknown";
}

OriginSet::OriginSet(std::initializer_list<RelationOrigin> origins) {
  for (auto o : origins) insert(o);
}

std::vector<RelationOrigin> OriginSet::items() const {
  std::vector<RelationOrigin> out;
  for (auto o : {RelationOrigin::in_link, RelationOrigin::out_link, RelationOrigin::broader,
                 RelationOrigin::narrower, RelationOrigin::category_sibling}) {
    if (contains(o)) out.push_back(o);
  }
  return out;
}

const char* to_string(SnippetTrack track) noexcept {
  return track == SnippetTrack::article_sentence ? "article_sentence" : "search_snippet";
}

std::optional<SnippetTrack> parse_snippet_track(std::string_view name) noexcept {
  if (name == "article_sentence") return SnippetTrack::article_sentence;
  if (name == "search_snippet") return SnippetTrack::search_snippet;
  return std::nullopt;
}

const char* to_string(Field field) noexcept {
  switch (field) {
    case Field::sr: return "sr";
    case Field::category: return "category";
    case Field::thumbnail: return "thumbnail";
    case Field::snippets: return "snippets";
    case Field::description: return "description";
  }
  return "unknown";
}

FieldSet::FieldSet(std::initializer_list<Field> fields) {
  for (auto f : fields) insert(f);
}

FieldSet FieldSet::all() noexcept {
  FieldSet s;
  for (auto f : kAllFieldValues) s.insert(f);
  return s;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\f\v";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

}  // namespace

FieldSet FieldSet::parse(std::string_view csv) {
  if (trim(csv).empty()) return all();
  FieldSet out;
  while (true) {
    const auto comma = csv.find(',');
    const auto item = trim(csv.substr(0, comma));
    if (!item.empty()) {
      auto it = std::find_if(std::begin(kAllFieldValues), std::end(kAllFieldValues),
                             [&](Field f) { return item == to_string(f); });
      if (it == std::end(kAllFieldValues)) throw UnknownFieldError(std::string(item));
      out.insert(*it);
    }
    if (comma == std::string_view::npos) break;
    csv.remove_prefix(comma + 1);
  }
  return out;
}

std::string FieldSet::to_csv() const {
  std::string out;
  for (auto f : kAllFieldValues) {
    if (!has(f)) continue;
    if (!out.empty()) out += ',';
    out += to_string(f);
  }
  return out;
}

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Simple uppercase mapping for code points with a one-to-one uppercase form
// in the Latin-1, Latin Extended-A, Greek and Cyrillic blocks. Anything else
// maps to itself.
char32_t simple_upper(char32_t c) {
  if (c >= U'a' && c <= U'z') return c - 0x20;
  if ((c >= 0xE0 && c <= 0xFE && c != 0xF7)) return c - 0x20;
  if (c == 0xFF) return 0x178;
  if (c >= 0x100 && c <= 0x17F) {
    if (c == 0x131 || c == 0x138 || c == 0x149 || c == 0x17F) return c;
    const bool odd_is_lower = (c <= 0x137) || (c >= 0x14A && c <= 0x177);
    if (odd_is_lower) return (c % 2 == 1) ? c - 1 : c;
    if ((c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E)) return (c % 2 == 0) ? c - 1 : c;
    return c;
  }
  if (c >= 0x3B1 && c <= 0x3CB && c != 0x3C2) return c - 0x20;
  if (c == 0x3C2) return 0x3A3;
  if (c >= 0x430 && c <= 0x44F) return c - 0x20;
  if (c >= 0x450 && c <= 0x45F) return c - 0x50;
  return c;
}

// Decodes one 2-byte UTF-8 sequence at the front of `s`, if that is what it
// holds. All code points handled by simple_upper below U+0800 use two bytes.
void uppercase_first(std::string& s) {
  if (s.empty()) return;
  const auto c0 = static_cast<unsigned char>(s[0]);
  if (c0 < 0x80) {
    if (c0 >= 'a' && c0 <= 'z') s[0] = static_cast<char>(c0 - 0x20);
    return;
  }
  if ((c0 & 0xE0) != 0xC0 || s.size() < 2) return;
  const auto c1 = static_cast<unsigned char>(s[1]);
  if ((c1 & 0xC0) != 0x80) return;
  const char32_t cp = (static_cast<char32_t>(c0 & 0x1F) << 6) | (c1 & 0x3F);
  const char32_t up = simple_upper(cp);
  if (up == cp) return;
  s[0] = static_cast<char>(0xC0 | (up >> 6));
  s[1] = static_cast<char>(0x80 | (up & 0x3F));
}

}  // namespace

std::string canonical_title(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char c : raw) {
    if (c == '_' || is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  if (out.empty()) throw EmptyInputError("title is blank");
  uppercase_first(out);
  return out;
}

std::string percent_encode(std::string_view raw) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(raw.size() * 3);
  for (char ch : raw) {
    auto c = static_cast<unsigned char>(ch);
    const bool unreserved = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                            (c >= '0' && c <= '9') || c == '-' || c == '.' || c == '_' ||
                            c == '~';
    if (unreserved) {
      out += ch;
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

std::string article_url(const LanguageCode& lang, std::string_view title) {
  std::string path(title);
  std::replace(path.begin(), path.end(), ' ', '_');
  return "https://" + lang.str() + ".wikipedia.org/wiki/" + percent_encode(path);
}

std::vector<std::string> validate(const ExplorationResult& result) {
  std::vector<std::string> problems;
  const auto& es = result.entities;
  for (std::size_t i = 1; i < es.size(); ++i) {
    const auto& prev = es[i - 1];
    const auto& cur = es[i];
    const bool ordered =
        prev.score.relatedness > cur.score.relatedness ||
        (prev.score.relatedness == cur.score.relatedness && prev.subject.title < cur.subject.title);
    if (!ordered) {
      problems.push_back("entities " + std::to_string(i - 1) + " and " + std::to_string(i) +
                         " are out of rank order");
    }
  }
  for (const auto& e : es) {
    if (e.assigned_category &&
        std::find(e.categories.begin(), e.categories.end(), *e.assigned_category) ==
            e.categories.end()) {
      problems.push_back("assigned category of '" + e.subject.title + "' is not among its categories");
    }
    if (!(e.score.relatedness >= 0.0 && e.score.relatedness <= 1.0)) {
      problems.push_back("relatedness of '" + e.subject.title + "' is outside [0,1]");
    }
  }
  if (result.fields.has(Field::category)) {
    std::map<std::string, std::size_t> counts;
    for (const auto& e : es) {
      ++counts[e.assigned_category ? *e.assigned_category : std::string(kUncategorized)];
    }
    std::size_t listed = 0;
    for (std::size_t i = 0; i < result.category_index.size(); ++i) {
      const auto& entry = result.category_index[i];
      listed += entry.count;
      auto it = counts.find(entry.name);
      if (it == counts.end() || it->second != entry.count) {
        problems.push_back("category index count for '" + entry.name + "' does not match entities");
      }
      if (i > 0) {
        const auto& prev = result.category_index[i - 1];
        if (prev.count < entry.count || (prev.count == entry.count && !(prev.name < entry.name))) {
          problems.push_back("category index is not sorted at position " + std::to_string(i));
        }
      }
    }
    if (listed != es.size()) problems.push_back("category index counts do not sum to entity count");
  }
  return problems;
}

}  // namespace sere

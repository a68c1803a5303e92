#include "sere/text/sentences.hpp"

#include <algorithm>
#include <array>

namespace sere::text {

namespace {

constexpr std::array<std::string_view, 6> kAbbreviations = {"e.g.", "i.e.", "z.B.",
                                                           "Dr.",  "St.",  "Nr."};

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// ASCII A-Z or a Latin-1 Supplement capital (U+00C0..U+00DE minus U+00D7).
bool starts_uppercase(std::string_view s) {
  if (s.empty()) return false;
  const auto c = static_cast<unsigned char>(s[0]);
  if (c >= 'A' && c <= 'Z') return true;
  if (c == 0xC3 && s.size() > 1) {
    const auto c2 = static_cast<unsigned char>(s[1]);
    return c2 >= 0x80 && c2 <= 0x9E && c2 != 0x97;
  }
  return false;
}

// Whitespace-delimited word that ends at `end` (inclusive of the period).
std::string_view word_ending_at(std::string_view text, std::size_t end) {
  std::size_t start = end;
  while (start > 0 && !is_space(text[start - 1])) --start;
  return text.substr(start, end - start + 1);
}

void push_trimmed(std::vector<std::string>& out, std::string_view s) {
  const auto first = std::find_if_not(s.begin(), s.end(), is_space);
  const auto last = std::find_if_not(s.rbegin(), s.rend(), is_space).base();
  if (first < last) out.emplace_back(first, last);
}

}  // namespace

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t next = i + 1;
    while (next < text.size() && is_space(text[next])) ++next;
    const bool at_end = next == text.size();
    const bool before_capital = next > i + 1 && starts_uppercase(text.substr(next));
    if (!at_end && !before_capital) continue;
    if (c == '.') {
      const auto word = word_ending_at(text, i);
      if (std::find(kAbbreviations.begin(), kAbbreviations.end(), word) != kAbbreviations.end()) {
        continue;
      }
    }
    push_trimmed(out, text.substr(start, i + 1 - start));
    start = next;
    i = next - 1;
  }
  if (start < text.size()) push_trimmed(out, text.substr(start));
  return out;
}

}  // namespace sere::text

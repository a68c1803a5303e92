#include "sere/text/match.hpp"

#include "sere/text/kernels.hpp"

namespace sere::text {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool boundary_ok(std::string_view text, std::string_view phrase, std::size_t pos) {
  const auto first = static_cast<unsigned char>(phrase.front());
  const auto last = static_cast<unsigned char>(phrase.back());
  if (is_word_byte(first) && pos > 0 && is_word_byte(static_cast<unsigned char>(text[pos - 1]))) {
    return false;
  }
  const std::size_t end = pos + phrase.size();
  if (is_word_byte(last) && end < text.size() &&
      is_word_byte(static_cast<unsigned char>(text[end]))) {
    return false;
  }
  return true;
}

}  // namespace

std::string fold(std::string_view text) {
  std::string lowered(text.size(), '\0');
  kernels::ascii_lower(text, lowered);
  std::string out;
  out.reserve(lowered.size());
  bool pending_space = false;
  for (char c : lowered) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

std::size_t count_matches(std::string_view folded_text, std::string_view folded_phrase) {
  if (folded_phrase.empty()) return 0;
  std::size_t count = 0;
  std::size_t pos = kernels::find(folded_text, folded_phrase, 0);
  while (pos != kernels::npos) {
    if (boundary_ok(folded_text, folded_phrase, pos)) ++count;
    pos = kernels::find(folded_text, folded_phrase, pos + 1);
  }
  return count;
}

bool contains(std::string_view folded_text, std::string_view folded_phrase) {
  if (folded_phrase.empty()) return false;
  std::size_t pos = kernels::find(folded_text, folded_phrase, 0);
  while (pos != kernels::npos) {
    if (boundary_ok(folded_text, folded_phrase, pos)) return true;
    pos = kernels::find(folded_text, folded_phrase, pos + 1);
  }
  return false;
}

bool phrase_in(std::string_view text, std::string_view phrase) {
  return contains(fold(text), fold(phrase));
}

std::vector<std::string_view> tokens(std::string_view folded) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < folded.size()) {
    while (i < folded.size() && !is_word_byte(static_cast<unsigned char>(folded[i]))) ++i;
    const std::size_t start = i;
    while (i < folded.size() && is_word_byte(static_cast<unsigned char>(folded[i]))) ++i;
    if (i > start) out.push_back(folded.substr(start, i - start));
  }
  return out;
}

}  // namespace sere::text

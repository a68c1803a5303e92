#pragma once

// Phrase match rule shared by the offline corpus and snippet extraction:
// ASCII case-insensitive, whitespace runs equivalent to a single
// space, and a match may not sit inside a longer alphanumeric token.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sere::text {

/// ASCII letters, digits, and every byte of a multi-byte UTF-8 sequence.
constexpr bool is_word_byte(unsigned char c) noexcept {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

/// Canonical match form: ASCII lowercase, whitespace runs collapsed to one
/// space, leading and trailing whitespace removed.
std::string fold(std::string_view text);

/// Number of offsets at which `phrase` matches `text` (both already folded).
/// Overlapping occurrences each count.
std::size_t count_matches(std::string_view folded_text, std::string_view folded_phrase);

bool contains(std::string_view folded_text, std::string_view folded_phrase);

/// Folds both arguments and tests for a match.
bool phrase_in(std::string_view text, std::string_view phrase);

/// Maximal runs of word bytes in a folded string, in order.
std::vector<std::string_view> tokens(std::string_view folded);

}  // namespace sere::text

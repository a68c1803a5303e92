#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sere::text {

/// Splits at '.', '!' or '?' followed by whitespace and an uppercase letter,
/// or by the end of the text. "e.g.", "i.e.", "z.B.", "Dr.", "St." and "Nr."
/// never end a sentence. Sentences are trimmed; empty ones are dropped.
std::vector<std::string> split_sentences(std::string_view text);

}  // namespace sere::text

#include "sere/text/kernels.hpp"

#include <cstring>

namespace sere::text::kernels::scalar {

void ascii_lower(std::span<const char> in, std::span<char> out) noexcept {
  for (std::size_t i = 0; i < in.size(); ++i) {
    const char c = in[i];
    out[i] = (c >= 'A' && c <= 'Z') ? static_cast<char>(c + ('a' - 'A')) : c;
  }
}

std::size_t find(std::string_view haystack, std::string_view needle, std::size_t from) noexcept {
  const std::size_t n = haystack.size();
  const std::size_t k = needle.size();
  if (from > n) return npos;
  if (k == 0) return from;
  if (k > n - from) return npos;
  for (std::size_t i = from; i + k <= n; ++i) {
    if (haystack[i] == needle[0] && std::memcmp(haystack.data() + i, needle.data(), k) == 0) {
      return i;
    }
  }
  return npos;
}

}  // namespace sere::text::kernels::scalar

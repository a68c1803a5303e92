// Compiled with -mavx2; only reached through the runtime dispatcher after a
// CPU feature check.
#include <immintrin.h>

#include <cstdint>
#include <cstring>

#include "sere/text/kernels.hpp"

namespace sere::text::kernels::avx2 {

void ascii_lower(std::span<const char> in, std::span<char> out) noexcept {
  const std::size_t n = in.size();
  const __m256i below_a = _mm256_set1_epi8('A' - 1);
  const __m256i above_z = _mm256_set1_epi8('Z' + 1);
  const __m256i case_bit = _mm256_set1_epi8(0x20);
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in.data() + i));
    // Signed compares: bytes >= 0x80 are negative and never count as upper.
    const __m256i upper =
        _mm256_and_si256(_mm256_cmpgt_epi8(v, below_a), _mm256_cmpgt_epi8(above_z, v));
    const __m256i lowered = _mm256_or_si256(v, _mm256_and_si256(upper, case_bit));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + i), lowered);
  }
  scalar::ascii_lower(in.subspan(i), out.subspan(i));
}

std::size_t find(std::string_view haystack, std::string_view needle, std::size_t from) noexcept {
  const std::size_t n = haystack.size();
  const std::size_t k = needle.size();
  if (from > n) return npos;
  if (k == 0) return from;
  if (k > n - from) return npos;

  // Candidate filter on the first and last needle byte, 32 positions at a
  // time; survivors are confirmed with memcmp on the interior.
  const char* h = haystack.data();
  const __m256i first = _mm256_set1_epi8(needle[0]);
  const __m256i last = _mm256_set1_epi8(needle[k - 1]);
  std::size_t i = from;
  for (; i + k - 1 + 32 <= n; i += 32) {
    const __m256i block_first = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(h + i));
    const __m256i block_last = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(h + i + k - 1));
    const __m256i eq = _mm256_and_si256(_mm256_cmpeq_epi8(first, block_first),
                                        _mm256_cmpeq_epi8(last, block_last));
    auto mask = static_cast<std::uint32_t>(_mm256_movemask_epi8(eq));
    while (mask != 0) {
      const auto bit = static_cast<std::size_t>(__builtin_ctz(mask));
      if (k <= 2 || std::memcmp(h + i + bit + 1, needle.data() + 1, k - 2) == 0) return i + bit;
      mask &= mask - 1;
    }
  }
  return scalar::find(haystack, needle, i);
}

}  // namespace sere::text::kernels::avx2

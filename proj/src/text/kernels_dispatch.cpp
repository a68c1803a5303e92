#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "sere/text/kernels.hpp"

namespace sere::text::kernels {

const char* to_string(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(SERE_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
  }
  return false;
}

Isa detected_isa() noexcept { return supported(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

namespace {

Isa initial_isa() noexcept {
  const char* forced = std::getenv("SERE_SIMD");
  if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return Isa::scalar;
  return detected_isa();
}

std::atomic<Isa>& active() noexcept {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!supported(isa)) {
    throw std::invalid_argument(std::string("kernel variant not supported: ") + to_string(isa));
  }
  active().store(isa, std::memory_order_relaxed);
}

void ascii_lower(std::span<const char> in, std::span<char> out) noexcept {
#if defined(SERE_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::ascii_lower(in, out);
#endif
  scalar::ascii_lower(in, out);
}

std::size_t find(std::string_view haystack, std::string_view needle, std::size_t from) noexcept {
#if defined(SERE_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::find(haystack, needle, from);
#endif
  return scalar::find(haystack, needle, from);
}

}  // namespace sere::text::kernels

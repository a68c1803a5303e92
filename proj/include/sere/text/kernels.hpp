#pragma once

// Byte-level text kernels behind phrase matching. Every kernel has a scalar
// reference implementation; SIMD variants are selected at runtime from the
// CPU features and must agree with the scalar result on every input.

#include <cstddef>
#include <span>
#include <string_view>

namespace sere::text::kernels {

enum class Isa { scalar, avx2 };

const char* to_string(Isa isa) noexcept;

/// Best variant supported by both this build and the running CPU.
Isa detected_isa() noexcept;
bool supported(Isa isa) noexcept;

/// Variant used by the dispatching entry points below. Starts as
/// detected_isa(), or scalar when SERE_SIMD=scalar is set in the environment.
Isa active_isa() noexcept;
/// Throws std::invalid_argument when the variant is not supported here.
void set_active_isa(Isa isa);

inline constexpr std::size_t npos = std::string_view::npos;

/// Lowercases ASCII A-Z into `out`; all other bytes are copied unchanged.
/// Requires out.size() >= in.size().
void ascii_lower(std::span<const char> in, std::span<char> out) noexcept;

/// First offset >= from at which `needle` occurs in `haystack`, or npos.
std::size_t find(std::string_view haystack, std::string_view needle, std::size_t from = 0) noexcept;

namespace scalar {
void ascii_lower(std::span<const char> in, std::span<char> out) noexcept;
std::size_t find(std::string_view haystack, std::string_view needle, std::size_t from) noexcept;
}  // namespace scalar

#if defined(SERE_HAVE_AVX2)
namespace avx2 {
void ascii_lower(std::span<const char> in, std::span<char> out) noexcept;
std::size_t find(std::string_view haystack, std::string_view needle, std::size_t from) noexcept;
}  // namespace avx2
#endif

}  // namespace sere::text::kernels

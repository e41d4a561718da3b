#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace so42 {

/// The 15 named generators of so(4,2). Enumerator order is the canonical
/// basis order used by every table, vector and matrix stack in the library.
enum class GeneratorId : std::size_t {
  L1, L2, L3,
  A1, A2, A3,
  B1, B2, B3,
  G1, G2, G3, // Gamma
  S, C, D
};

inline constexpr std::size_t kNumGenerators = 15;

constexpr std::size_t index(GeneratorId g) { return static_cast<std::size_t>(g); }
constexpr GeneratorId generator_at(std::size_t i) { return static_cast<GeneratorId>(i); }

/// All generators in canonical order.
constexpr std::array<GeneratorId, kNumGenerators> all_generators()
{
  std::array<GeneratorId, kNumGenerators> out{};
  for (std::size_t i = 0; i < kNumGenerators; ++i) out[i] = generator_at(i);
  return out;
}

/// Canonical short name ("L1", "G3", "S", ...).
std::string_view name(GeneratorId g);

/// Case-insensitive lookup. Accepts "G1", "Gamma1", "Γ1" and an optional
/// trailing prime ("A3'").
std::optional<GeneratorId> parse_generator(std::string_view text);

/// Vector family of a generator: 'L','A','B','G' with component 1..3, or the
/// scalar tag itself with component 0.
struct GeneratorParts {
  char family;
  int component;
};
GeneratorParts parts(GeneratorId g);

} // namespace so42

#include "so42/generator.hpp"

#include <algorithm>
#include <cctype>

namespace so42 {

namespace {

constexpr std::array<std::string_view, kNumGenerators> kNames = {
    "L1", "L2", "L3", "A1", "A2", "A3", "B1", "B2", "B3",
    "G1", "G2", "G3", "S",  "C",  "D"};

std::string normalize(std::string_view text)
{
  std::string s(text);
  // Strip primes (ASCII and U+2032).
  for (std::string_view prime : {std::string_view("′"), std::string_view("'")}) {
    while (s.size() >= prime.size() && s.compare(s.size() - prime.size(), prime.size(), prime) == 0)
      s.erase(s.size() - prime.size());
  }
  // Greek capital gamma, U+0393.
  if (s.rfind("Γ", 0) == 0) s = "G" + s.substr(2);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  if (s.rfind("GAMMA", 0) == 0) s = "G" + s.substr(5);
  return s;
}

} // namespace

std::string_view name(GeneratorId g) { return kNames[index(g)]; }

std::optional<GeneratorId> parse_generator(std::string_view text)
{
  const std::string key = normalize(text);
  for (std::size_t i = 0; i < kNumGenerators; ++i)
    if (kNames[i] == key) return generator_at(i);
  return std::nullopt;
}

GeneratorParts parts(GeneratorId g)
{
  const std::size_t i = index(g);
  if (i < 12) return {"LABG"[i / 3], static_cast<int>(i % 3) + 1};
  return {"SCD"[i - 12], 0};
}

} // namespace so42

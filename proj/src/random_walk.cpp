#include "hhslab/random_walk.hpp"

#include <stdexcept>

namespace hhslab {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

Word random_word(const Group& group, int steps, std::mt19937_64& engine) {
  if (steps < 0) throw std::invalid_argument("steps must be non-negative");
  const auto& letters = group.letters();
  std::vector<Syllable> walk;
  walk.reserve(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    // Plain modulo over a 64-bit draw keeps the stream identical across
    // standard library implementations.
    auto pick = engine() % letters.size();
    walk.push_back({letters[pick].vertex, letters[pick].exponent});
  }
  return group.reduce(walk);
}

Word random_word(const Group& group, int steps, std::uint64_t seed) {
  auto engine = make_engine(seed);
  return random_word(group, steps, engine);
}

}  // namespace hhslab

#pragma once

#include <cstdint>
#include <random>

#include "hhslab/group.hpp"

namespace hhslab {

/// Engine for the (seed, stream) pair; distinct streams give independent
/// reproducible sequences (used for per-trial seeds).
std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream = 0);

/// n-step simple random walk on the symmetric standard generators, never
/// staying put, pushed to normal form.
Word random_word(const Group& group, int steps, std::uint64_t seed);
Word random_word(const Group& group, int steps, std::mt19937_64& engine);

}  // namespace hhslab

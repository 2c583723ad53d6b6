#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace excursion {

using Engine = std::mt19937_64;

/// Engine for replicate `index` of a run seeded with `seed`. Streams depend
/// only on (seed, index), so results do not depend on execution order.
Engine replicate_engine(std::uint64_t seed, std::uint64_t index);

/// Fills `out` with independent standard normal variates.
void fill_normals(Engine& engine, std::span<double> out);

}  // namespace excursion

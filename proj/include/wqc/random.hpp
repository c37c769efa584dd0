#pragma once

#include <cstdint>
#include <random>

#include "wqc/instance.hpp"

namespace wqc {

using Rng = std::mt19937_64;

/// Uniform integer in [0, bound) by rejection; identical on every platform.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

/// Generator for the index-th member of a seeded family of runs.
Rng derived_rng(std::uint64_t seed, std::uint64_t index);

/// Uniformly random unrooted binary topology (random stepwise insertion).
Tree random_tree(const TaxaPtr& taxa, Rng& rng);

/// k random trees, identical topologies merged into one multiplicity.
WqcInstance random_instance(const TaxaPtr& taxa, int k, Rng& rng);

} // namespace wqc

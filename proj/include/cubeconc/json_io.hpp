#pragma once

#include <iosfwd>
#include <string>

#include "cubeconc/distribution.hpp"
#include "cubeconc/set_bounds.hpp"

namespace cubeconc {

// Distribution files: {"n": <int>, "kind": "dense"|"product"|"markov"|"delta_mix",
// "params": {...}}. Dense params carry "probs" (2^n numbers in index order)
// and optionally "seed". All probabilities are written with 17 significant
// digits so tables round-trip exactly.
void write_distribution_json(const CubeDistribution& mu, std::ostream& os);
void write_distribution_json(const CubeDistribution& mu, const std::string& path);
CubeDistribution read_distribution_json(std::istream& is);
CubeDistribution read_distribution_json(const std::string& path);

// Set files: {"n": <int>, "members": [<indices>]} or
// {"n": <int>, "bitmask_hex": "<hex>"} (bit i of the hex integer = membership
// of index i, most significant digit first).
void write_set_json(const CubeSet& a, std::ostream& os);
void write_set_json(const CubeSet& a, const std::string& path);
CubeSet read_set_json(std::istream& is);
CubeSet read_set_json(const std::string& path);

std::string set_bitmask_hex(const CubeSet& a);
CubeSet set_from_bitmask_hex(uint32_t n, const std::string& hex);

} // namespace cubeconc

// ============================================================================
// synthetic.hpp — deterministic synthetic matrix generation
//
// Weight-like data is drawn from N(0, sigma); data-like (post-ReLU) values
// from the half-normal |N(0, sigma)|; `uniform` covers [-sigma*sqrt(3),
// sigma*sqrt(3)] so its standard deviation is also sigma. Sampling is a
// hand-rolled Box-Muller transform over std::mt19937_64, so a given seed
// yields the same matrix on every standards-conforming platform.
// ============================================================================
#pragma once

#include <cstdint>
#include <string>

#include "termrev/quant.hpp"

namespace termrev {

enum class Distribution { normal, half_normal, uniform };

Distribution parse_distribution(const std::string& name);
const char* distribution_name(Distribution d);

// Deterministic given (dist, rows, cols, sigma, seed). Throws
// std::invalid_argument for non-positive dimensions or sigma <= 0.
RealMatrix generate_synthetic(Distribution dist, int rows, int cols,
                              double sigma, uint64_t seed);

}  // namespace termrev

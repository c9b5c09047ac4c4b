#pragma once

#include <cstdint>
#include <random>

namespace pastrami::rng {

/// Uniform double in [0, 1) from the top 53 bits of one mt19937_64 draw.
double uniform01(std::mt19937_64& gen);

/// Inverse standard normal CDF (Acklam's rational approximation,
/// relative error below 1.2e-9). p must be in (0, 1).
double normal_quantile(double p);

/// Draws from Binomial(n, p). Exact CDF inversion while n*min(p,1-p) is
/// small enough to stay in normalized double range; a continuity-corrected
/// normal approximation otherwise. Deterministic given the generator state.
std::uint64_t sample_binomial(std::mt19937_64& gen, std::uint64_t n, double p);

}  // namespace pastrami::rng

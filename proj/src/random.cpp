#include "pastrami/random.hpp"

#include <algorithm>
#include <cmath>

namespace pastrami::rng {

double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Acklam's rational approximation to the inverse normal CDF.
double normal_quantile(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

namespace {

// CDF inversion, safe while n*p is small enough that pmf(0) = (1-p)^n
// stays in normalized double range.
std::uint64_t binomial_by_inversion(std::mt19937_64& gen, std::uint64_t n, double p) {
    const double u = uniform01(gen);
    const double ratio = p / (1.0 - p);
    double pmf = std::exp(static_cast<double>(n) * std::log1p(-p));
    double cdf = pmf;
    std::uint64_t k = 0;
    while (u > cdf && k < n) {
        pmf *= static_cast<double>(n - k) / static_cast<double>(k + 1) * ratio;
        ++k;
        cdf += pmf;
        if (pmf == 0.0) break;
    }
    return k;
}

std::uint64_t binomial_by_normal(std::mt19937_64& gen, std::uint64_t n, double p) {
    double u = uniform01(gen);
    u = std::clamp(u, 1e-300, 1.0 - 1e-16);
    const double mean = static_cast<double>(n) * p;
    const double sd = std::sqrt(mean * (1.0 - p));
    const double draw = std::round(mean + sd * normal_quantile(u));
    if (draw <= 0.0) return 0;
    if (draw >= static_cast<double>(n)) return n;
    return static_cast<std::uint64_t>(draw);
}

}  // namespace

std::uint64_t sample_binomial(std::mt19937_64& gen, std::uint64_t n, double p) {
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    if (p > 0.5) return n - sample_binomial(gen, n, 1.0 - p);
    constexpr double kInversionLimit = 300.0;
    if (static_cast<double>(n) * p <= kInversionLimit)
        return binomial_by_inversion(gen, n, p);
    return binomial_by_normal(gen, n, p);
}

}  // namespace pastrami::rng

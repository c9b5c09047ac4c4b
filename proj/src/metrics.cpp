#include "pastrami/metrics.hpp"

#include <cmath>
#include <string>

#include "pastrami/errors.hpp"

namespace pastrami::metrics {

namespace {

// t_{df,0.025} for df 1..100 (97.5th percentile), 6 decimals.
constexpr double kTQuantile975[100] = {
    12.706205, 4.302653, 3.182446, 2.776445, 2.570582,
    2.446912, 2.364624, 2.306004, 2.262157, 2.228139,
    2.200985, 2.178813, 2.160369, 2.144787, 2.131450,
    2.119905, 2.109816, 2.100922, 2.093024, 2.085963,
    2.079614, 2.073873, 2.068658, 2.063899, 2.059539,
    2.055529, 2.051831, 2.048407, 2.045230, 2.042272,
    2.039513, 2.036933, 2.034515, 2.032245, 2.030108,
    2.028094, 2.026192, 2.024394, 2.022691, 2.021075,
    2.019541, 2.018082, 2.016692, 2.015368, 2.014103,
    2.012896, 2.011741, 2.010635, 2.009575, 2.008559,
    2.007584, 2.006647, 2.005746, 2.004879, 2.004045,
    2.003241, 2.002465, 2.001717, 2.000995, 2.000298,
    1.999624, 1.998972, 1.998341, 1.997730, 1.997138,
    1.996564, 1.996008, 1.995469, 1.994945, 1.994437,
    1.993943, 1.993464, 1.992997, 1.992543, 1.992102,
    1.991673, 1.991254, 1.990847, 1.990450, 1.990063,
    1.989686, 1.989319, 1.988960, 1.988610, 1.988268,
    1.987934, 1.987608, 1.987290, 1.986979, 1.986675,
    1.986377, 1.986086, 1.985802, 1.985523, 1.985251,
    1.984984, 1.984723, 1.984467, 1.984217, 1.983972};

constexpr double kNormalLimit975 = 1.95996;

}  // namespace

void validate_run(const RunObservation& run, double tx_tolerance) {
    if (run.offered_load_pps <= 0.0)
        throw invalid_input("offered_load must be > 0, got " +
                            std::to_string(run.offered_load_pps));
    if (run.duration_s <= 0.0)
        throw invalid_input("duration must be > 0, got " + std::to_string(run.duration_s));
    if (run.offered_count == 0 || run.offered_count < run.delivered_count)
        throw invalid_input("offered_count >= delivered_count >= 0 and > 0 violated: offered=" +
                            std::to_string(run.offered_count) +
                            " delivered=" + std::to_string(run.delivered_count));
    const double nominal = run.offered_load_pps * run.duration_s;
    const double deviation =
        std::abs(static_cast<double>(run.offered_count) - nominal) / nominal;
    if (deviation > tx_tolerance)
        throw invalid_input("offered_count deviates " + std::to_string(deviation) +
                            " from offered_load*duration (tolerance " +
                            std::to_string(tx_tolerance) + ")");
}

double run_plr(const RunObservation& run) {
    if (run.offered_count == 0) throw invalid_input("run_plr: offered_count is 0");
    if (run.delivered_count > run.offered_count)
        throw invalid_input("run_plr: delivered_count exceeds offered_count");
    return static_cast<double>(run.offered_count - run.delivered_count) /
           static_cast<double>(run.offered_count);
}

LoadLevelStats aggregate_level(std::span<const RunObservation> runs) {
    if (runs.empty()) throw invalid_input("aggregate_level: no runs");
    const double load = runs.front().offered_load_pps;
    const double duration = runs.front().duration_s;
    for (const auto& run : runs) {
        if (run.offered_load_pps != load)
            throw invalid_input("aggregate_level: mixed offered loads (" +
                                std::to_string(load) + " vs " +
                                std::to_string(run.offered_load_pps) + ")");
        if (run.duration_s != duration)
            throw invalid_input("aggregate_level: mixed durations");
    }

    const auto k = static_cast<int>(runs.size());
    double plr_sum = 0.0;
    double throughput_sum = 0.0;
    for (const auto& run : runs) {
        plr_sum += run_plr(run);
        throughput_sum += static_cast<double>(run.delivered_count) / run.duration_s;
    }

    LoadLevelStats stats;
    stats.offered_load_pps = load;
    stats.k = k;
    stats.plr = plr_sum / k;
    stats.dr = 1.0 - stats.plr;
    stats.throughput_pps = throughput_sum / k;

    if (k >= 2) {
        double ss = 0.0;
        for (const auto& run : runs) {
            const double d = run_plr(run) - stats.plr;
            ss += d * d;
        }
        const double sigma = std::sqrt(ss / (k - 1));
        const double half_width = t_critical(k - 1) * sigma / std::sqrt(static_cast<double>(k));
        stats.sigma_plr = sigma;
        stats.lcl95 = stats.plr - half_width;
        stats.ucl95 = stats.plr + half_width;
        if (stats.plr > 0.0) stats.delta_ucl95 = (*stats.ucl95 - stats.plr) / stats.plr;
    }
    return stats;
}

double t_critical(long df, long asymptotic_cutoff) {
    if (df < 1) throw invalid_input("t_critical: df must be >= 1, got " + std::to_string(df));
    const long cutoff = std::min<long>(asymptotic_cutoff, 100);
    if (df > cutoff) return kNormalLimit975;
    return kTQuantile975[df - 1];
}

}  // namespace pastrami::metrics

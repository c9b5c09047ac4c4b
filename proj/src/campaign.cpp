#include "pastrami/campaign.hpp"

#include <string>

#include "pastrami/errors.hpp"
#include "pastrami/metrics.hpp"

namespace pastrami {

std::string to_string(Environment e) {
    switch (e) {
        case Environment::bare_metal: return "bare-metal";
        case Environment::virtual_machine: return "virtual-machine";
        case Environment::container: return "container";
    }
    return "bare-metal";
}

std::string to_string(CpuPinning p) {
    switch (p) {
        case CpuPinning::unpinned: return "unpinned";
        case CpuPinning::pin_1_cpu: return "pin-1-cpu";
        case CpuPinning::pin_2_cpu: return "pin-2-cpu";
    }
    return "unpinned";
}

void refresh_stats(LoadLossCurve& curve) {
    curve.stats.clear();
    curve.warnings.clear();
    curve.stats.reserve(curve.levels.size());
    double previous_load = 0.0;
    for (std::size_t i = 0; i < curve.levels.size(); ++i) {
        const auto& level = curve.levels[i];
        if (i > 0 && level.offered_load_pps <= previous_load)
            throw invalid_input("curve: offered loads must be strictly increasing");
        previous_load = level.offered_load_pps;
        for (const auto& run : level.runs)
            if (run.offered_load_pps != level.offered_load_pps)
                throw invalid_input("curve: run offered_load differs from its level");
        curve.stats.push_back(metrics::aggregate_level(level.runs));
        if (curve.metadata.runs >= 1 &&
            level.runs.size() != static_cast<std::size_t>(curve.metadata.runs))
            curve.warnings.push_back(
                "level " + std::to_string(static_cast<long long>(level.offered_load_pps)) +
                " pps has " + std::to_string(level.runs.size()) + " runs, metadata says " +
                std::to_string(curve.metadata.runs));
    }
}

}  // namespace pastrami

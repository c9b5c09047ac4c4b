#pragma once

#include <cstdint>
#include <optional>

namespace pastrami {

/// One repetition of a fixed-load experiment: the traffic generator offered
/// `offered_count` packets at nominal rate `offered_load_pps` over
/// `duration_s` seconds and the system under test forwarded
/// `delivered_count` of them.
struct RunObservation {
    double offered_load_pps = 0.0;
    double duration_s = 0.0;
    std::uint64_t offered_count = 0;
    std::uint64_t delivered_count = 0;
};

/// Aggregated statistics for all repetitions at one offered load.
/// sigma/CI fields are present only for k >= 2; delta_ucl95 additionally
/// requires plr > 0 (the relative measure is undefined at zero loss).
struct LoadLevelStats {
    double offered_load_pps = 0.0;
    int k = 0;
    double plr = 0.0;
    double dr = 0.0;
    double throughput_pps = 0.0;
    std::optional<double> sigma_plr;
    std::optional<double> lcl95;
    std::optional<double> ucl95;
    std::optional<double> delta_ucl95;
};

}  // namespace pastrami

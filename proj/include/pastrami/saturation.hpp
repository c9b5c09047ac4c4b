#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pastrami/campaign.hpp"
#include "pastrami/types.hpp"

namespace pastrami::saturation {

inline constexpr double kDefaultPdrThreshold = 0.005;
inline constexpr double kDefaultEta = 0.1;

enum class Classification { GOOD, BAD, NO_SATURATION };

std::string to_string(Classification c);

/// Throughput Increase Ratio for one consecutive pair of load levels.
struct TirPoint {
    double from_load_pps = 0.0;
    double to_load_pps = 0.0;
    double tir = 0.0;
};

/// Where the loss curve first crosses the PDR threshold.
/// `interpolated_pps` refines the crossing linearly between the bracketing
/// grid points; `grid_load_pps` is the last compliant sampled load. Both are
/// absent when the lowest load already exceeds the threshold. When the sweep
/// never crosses, both equal the top load and sweep_exhausted is set.
struct PdrEstimate {
    std::optional<double> interpolated_pps;
    std::optional<double> grid_load_pps;
    bool sweep_exhausted = false;
};

/// Outcome of the saturation analysis over one sweep.
struct SaturationVerdict {
    PdrEstimate pdr;
    std::optional<std::size_t> potential_sat_index;
    std::vector<TirPoint> tir_series;
    bool entered_saturation = false;
    Classification classification = Classification::NO_SATURATION;
    double eta = kDefaultEta;
    double pdr_threshold = kDefaultPdrThreshold;
    std::string reason;
};

struct PdrAccuracy {
    bool accurate = false;
    std::string reason;
};

/// ΔT/Δ0 between two levels; requires b.offered_load > a.offered_load.
/// Negative values mean declining throughput (trashing).
double tir(const LoadLevelStats& a, const LoadLevelStats& b);

/// Locates PDR@threshold on an aggregated sweep (>= 2 levels, strictly
/// increasing loads).
PdrEstimate pdr_at(const LoadLossCurve& curve, double threshold = kDefaultPdrThreshold);

/// Saturation detection over a completed sweep:
///  1. the first level with PLR > pdr_threshold is the potential saturation
///     point (none -> NO_SATURATION);
///  2. TIR is computed for every consecutive pair from that point on;
///  3. TIR < eta marks the system as entering saturation, a later pair with
///     TIR >= eta clears the mark (the potential point stays fixed);
///  4. GOOD iff saturation is marked at the first pair and persists through
///     the end of the sweep, BAD otherwise. A sweep that ends at the
///     potential point (no pair to verify) is BAD by insufficient evidence.
SaturationVerdict detect_saturation(const LoadLossCurve& curve,
                                    double pdr_threshold = kDefaultPdrThreshold,
                                    double eta = kDefaultEta);

/// PDR@X% is declared accurate exactly for GOOD verdicts; otherwise the
/// reason names the TIR pairs that violated eta (or the missing crossing).
PdrAccuracy assess_pdr_accuracy(const SaturationVerdict& verdict);

}  // namespace pastrami::saturation

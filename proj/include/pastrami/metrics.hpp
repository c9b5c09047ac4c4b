#pragma once

#include <span>
#include <vector>

#include "pastrami/types.hpp"

namespace pastrami::metrics {

/// Default accepted relative deviation of offered_count from
/// offered_load * duration (traffic generators jitter slightly).
inline constexpr double kDefaultTxTolerance = 0.01;

/// Checks the RunObservation invariants; throws invalid_input naming the
/// violated constraint.
void validate_run(const RunObservation& run, double tx_tolerance = kDefaultTxTolerance);

/// Per-run packet loss ratio (offered - delivered) / offered, in [0, 1].
double run_plr(const RunObservation& run);

/// Aggregates K repetitions at one offered load into level statistics:
/// mean PLR, sample standard deviation (K-1 divisor), mean throughput and
/// the 95% Student-t confidence limits. With a single run the sigma/CI
/// fields are absent. Throws invalid_input when runs is empty or loads or
/// durations are mixed.
LoadLevelStats aggregate_level(std::span<const RunObservation> runs);

/// 97.5th percentile of the Student t-distribution with df degrees of
/// freedom. Table-backed for df in [1, 100]; beyond `asymptotic_cutoff`
/// (clamped to 100) the normal limit 1.95996 is returned.
double t_critical(long df, long asymptotic_cutoff = 100);

}  // namespace pastrami::metrics

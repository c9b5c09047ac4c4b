#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pastrami/types.hpp"

namespace pastrami::curves {

enum class CurveMode { ideal, realistic };

/// Anchors of the low-load loss ramp of a realistic curve: PLR is 0 below
/// o_floor_pps, then grows log-linearly from plr_floor to the saturation
/// loss ratio at the saturation load.
struct PreSaturationRamp {
    double plr_floor = 1e-6;
    double o_floor_pps = 0.0;

    bool operator==(const PreSaturationRamp&) const = default;
};

/// Closed-form load-loss curve generator.
///
/// Ideal mode: zero loss up to the saturation load, then the throughput
/// stays pinned at t_sat. Realistic mode adds a pre-saturation loss ramp,
/// a non-zero loss ratio at saturation, and throughput decay beyond the
/// trashing load o_trash_pps with slope t_sat/m_pps.
struct SyntheticModel {
    CurveMode mode = CurveMode::ideal;
    double o_sat_pps = 0.0;
    double plr_at_sat = 0.0;  // 0 in ideal mode
    double o_trash_pps = 0.0;
    double m_pps = 0.0;
    std::optional<PreSaturationRamp> ramp;  // realistic only; defaulted when absent

    double t_sat_pps() const { return o_sat_pps * (1.0 - plr_at_sat); }

    static SyntheticModel ideal(double o_sat_pps);
    static SyntheticModel realistic(double o_sat_pps, double plr_at_sat,
                                    double o_trash_pps, double m_pps,
                                    std::optional<PreSaturationRamp> ramp = std::nullopt);
};

/// Throws invalid_input when the parameter combination violates the model
/// invariants (o_trash < o_sat, non-positive slope, ramp out of range, ...).
void validate_model(const SyntheticModel& model);

/// Ideal loss curve: 0 up to o_sat, then 1 - t_sat/o.
double ideal_plr(double o_pps, const SyntheticModel& model);

/// Realistic throughput beyond saturation: flat at t_sat on
/// (o_sat, o_trash], then linear decay clamped at 0. Requires o > o_sat.
double realistic_throughput(double o_pps, const SyntheticModel& model);

/// Realistic loss curve over the whole load range: 0 below the ramp floor,
/// log-linear ramp up to the saturation loss ratio, then 1 - T(o)/o.
double realistic_plr(double o_pps, const SyntheticModel& model);

/// Model PLR at a load, dispatching on mode.
double model_plr(double o_pps, const SyntheticModel& model);

/// First load at which the realistic throughput reaches 0 (PLR reaches 1);
/// absent for ideal curves, which never lose everything.
std::optional<double> throughput_zero_load(const SyntheticModel& model);

/// Draws k runs per load with binomially distributed delivered counts,
/// reproducible from the seed. Loads must be strictly increasing.
std::vector<RunObservation> sample_campaign(const SyntheticModel& model,
                                            std::span<const double> loads_pps,
                                            double duration_s, int k,
                                            std::uint64_t seed);

/// Noise-free variant: delivered counts are the rounded expected values.
std::vector<RunObservation> noiseless_campaign(const SyntheticModel& model,
                                               std::span<const double> loads_pps,
                                               double duration_s, int k);

}  // namespace pastrami::curves

#include "pastrami/curve_models.hpp"

#include <cmath>
#include <random>
#include <string>

#include "pastrami/errors.hpp"
#include "pastrami/random.hpp"

namespace pastrami::curves {

SyntheticModel SyntheticModel::ideal(double o_sat_pps) {
    SyntheticModel m;
    m.mode = CurveMode::ideal;
    m.o_sat_pps = o_sat_pps;
    m.plr_at_sat = 0.0;
    m.o_trash_pps = o_sat_pps;
    m.m_pps = o_sat_pps;  // unused in ideal mode, kept valid
    return m;
}

SyntheticModel SyntheticModel::realistic(double o_sat_pps, double plr_at_sat,
                                         double o_trash_pps, double m_pps,
                                         std::optional<PreSaturationRamp> ramp) {
    SyntheticModel m;
    m.mode = CurveMode::realistic;
    m.o_sat_pps = o_sat_pps;
    m.plr_at_sat = plr_at_sat;
    m.o_trash_pps = o_trash_pps;
    m.m_pps = m_pps;
    m.ramp = ramp;
    return m;
}

void validate_model(const SyntheticModel& model) {
    if (model.o_sat_pps <= 0.0) throw invalid_input("model: o_sat must be > 0");
    if (model.plr_at_sat < 0.0 || model.plr_at_sat >= 1.0)
        throw invalid_input("model: plr_at_sat must be in [0, 1)");
    if (model.o_trash_pps < model.o_sat_pps)
        throw invalid_input("model: o_trash must be >= o_sat");
    if (model.m_pps <= 0.0) throw invalid_input("model: m must be > 0");
    if (model.mode == CurveMode::ideal) {
        if (model.plr_at_sat != 0.0)
            throw invalid_input("model: ideal mode requires plr_at_sat = 0");
        if (model.ramp) throw invalid_input("model: ideal mode has no pre-saturation ramp");
    }
    if (model.ramp) {
        if (model.ramp->plr_floor < 0.0 || model.ramp->plr_floor > model.plr_at_sat)
            throw invalid_input("model: ramp plr_floor must be in [0, plr_at_sat]");
        if (model.ramp->o_floor_pps <= 0.0 || model.ramp->o_floor_pps >= model.o_sat_pps)
            throw invalid_input("model: ramp o_floor must be in (0, o_sat)");
    }
}

double ideal_plr(double o_pps, const SyntheticModel& model) {
    if (o_pps <= 0.0) throw invalid_input("ideal_plr: offered load must be > 0");
    if (o_pps <= model.o_sat_pps) return 0.0;
    return 1.0 - model.t_sat_pps() / o_pps;
}

double realistic_throughput(double o_pps, const SyntheticModel& model) {
    if (o_pps <= model.o_sat_pps)
        throw invalid_input("realistic_throughput: defined for loads beyond saturation");
    if (o_pps <= model.o_trash_pps) return model.t_sat_pps();
    const double decay = 1.0 - (o_pps - model.o_trash_pps) / model.m_pps;
    return model.t_sat_pps() * std::max(0.0, decay);
}

namespace {

PreSaturationRamp effective_ramp(const SyntheticModel& model) {
    if (model.ramp) return *model.ramp;
    return PreSaturationRamp{1e-6, 0.5 * model.o_sat_pps};
}

}  // namespace

double realistic_plr(double o_pps, const SyntheticModel& model) {
    if (o_pps <= 0.0) throw invalid_input("realistic_plr: offered load must be > 0");
    if (o_pps > model.o_sat_pps) return 1.0 - realistic_throughput(o_pps, model) / o_pps;

    const PreSaturationRamp ramp = effective_ramp(model);
    if (o_pps < ramp.o_floor_pps) return 0.0;
    if (model.plr_at_sat <= 0.0) return 0.0;
    if (ramp.plr_floor <= 0.0) return o_pps == model.o_sat_pps ? model.plr_at_sat : 0.0;

    const double t = (o_pps - ramp.o_floor_pps) / (model.o_sat_pps - ramp.o_floor_pps);
    const double log_plr = std::log10(ramp.plr_floor) +
                           t * (std::log10(model.plr_at_sat) - std::log10(ramp.plr_floor));
    return std::pow(10.0, log_plr);
}

double model_plr(double o_pps, const SyntheticModel& model) {
    return model.mode == CurveMode::ideal ? ideal_plr(o_pps, model)
                                          : realistic_plr(o_pps, model);
}

std::optional<double> throughput_zero_load(const SyntheticModel& model) {
    if (model.mode == CurveMode::ideal) return std::nullopt;
    return model.o_trash_pps + model.m_pps;
}

namespace {

void check_sweep_args(std::span<const double> loads_pps, double duration_s, int k) {
    if (loads_pps.empty()) throw invalid_input("sample_campaign: loads must be non-empty");
    for (std::size_t i = 1; i < loads_pps.size(); ++i)
        if (loads_pps[i] <= loads_pps[i - 1])
            throw invalid_input("sample_campaign: loads must be strictly increasing");
    if (loads_pps.front() <= 0.0) throw invalid_input("sample_campaign: loads must be > 0");
    if (duration_s <= 0.0) throw invalid_input("sample_campaign: duration must be > 0");
    if (k < 1) throw invalid_input("sample_campaign: k must be >= 1");
}

}  // namespace

std::vector<RunObservation> sample_campaign(const SyntheticModel& model,
                                            std::span<const double> loads_pps,
                                            double duration_s, int k,
                                            std::uint64_t seed) {
    validate_model(model);
    check_sweep_args(loads_pps, duration_s, k);

    std::mt19937_64 gen(seed);
    std::vector<RunObservation> runs;
    runs.reserve(loads_pps.size() * static_cast<std::size_t>(k));
    for (const double load : loads_pps) {
        const auto offered = static_cast<std::uint64_t>(std::llround(load * duration_s));
        const double plr = model_plr(load, model);
        for (int i = 0; i < k; ++i) {
            const std::uint64_t lost = rng::sample_binomial(gen, offered, plr);
            runs.push_back({load, duration_s, offered, offered - lost});
        }
    }
    return runs;
}

std::vector<RunObservation> noiseless_campaign(const SyntheticModel& model,
                                               std::span<const double> loads_pps,
                                               double duration_s, int k) {
    validate_model(model);
    check_sweep_args(loads_pps, duration_s, k);

    std::vector<RunObservation> runs;
    runs.reserve(loads_pps.size() * static_cast<std::size_t>(k));
    for (const double load : loads_pps) {
        const auto offered = static_cast<std::uint64_t>(std::llround(load * duration_s));
        const double plr = model_plr(load, model);
        const auto delivered = static_cast<std::uint64_t>(
            std::llround(static_cast<double>(offered) * (1.0 - plr)));
        for (int i = 0; i < k; ++i) runs.push_back({load, duration_s, offered, delivered});
    }
    return runs;
}

}  // namespace pastrami::curves

#include "pastrami/saturation.hpp"

#include <charconv>
#include <cmath>

#include "pastrami/errors.hpp"

namespace pastrami::saturation {

std::string to_string(Classification c) {
    switch (c) {
        case Classification::GOOD: return "GOOD";
        case Classification::BAD: return "BAD";
        case Classification::NO_SATURATION: return "NO_SATURATION";
    }
    return "NO_SATURATION";
}

double tir(const LoadLevelStats& a, const LoadLevelStats& b) {
    if (b.offered_load_pps <= a.offered_load_pps)
        throw invalid_input("tir: second level must have the larger offered load");
    return (b.throughput_pps - a.throughput_pps) / (b.offered_load_pps - a.offered_load_pps);
}

namespace {

void check_sweep(const LoadLossCurve& curve) {
    if (curve.stats.size() != curve.levels.size())
        throw invalid_input("sweep: stats cache out of date, call refresh_stats");
    if (curve.size() < 2) throw invalid_input("sweep: need at least 2 load levels");
    for (std::size_t i = 1; i < curve.stats.size(); ++i)
        if (curve.stats[i].offered_load_pps <= curve.stats[i - 1].offered_load_pps)
            throw invalid_input("sweep: offered loads must be strictly increasing");
}

std::string load_pair_label(const TirPoint& p) {
    auto mpps = [](double pps) {
        char buf[32];
        auto res = std::to_chars(buf, buf + sizeof buf, pps / 1e6);
        return std::string(buf, res.ptr);
    };
    return mpps(p.from_load_pps) + "->" + mpps(p.to_load_pps) + " Mpps";
}

}  // namespace

PdrEstimate pdr_at(const LoadLossCurve& curve, double threshold) {
    check_sweep(curve);
    const auto& stats = curve.stats;

    std::size_t crossing = stats.size();
    for (std::size_t i = 0; i < stats.size(); ++i) {
        if (stats[i].plr > threshold) {
            crossing = i;
            break;
        }
    }

    PdrEstimate estimate;
    if (crossing == stats.size()) {
        estimate.interpolated_pps = stats.back().offered_load_pps;
        estimate.grid_load_pps = stats.back().offered_load_pps;
        estimate.sweep_exhausted = true;
        return estimate;
    }
    if (crossing == 0) return estimate;  // threshold exceeded at the lowest load

    const auto& below = stats[crossing - 1];
    const auto& above = stats[crossing];
    const double span = above.plr - below.plr;  // > 0: below <= threshold < above
    estimate.grid_load_pps = below.offered_load_pps;
    estimate.interpolated_pps =
        below.offered_load_pps + (threshold - below.plr) / span *
                                     (above.offered_load_pps - below.offered_load_pps);
    return estimate;
}

SaturationVerdict detect_saturation(const LoadLossCurve& curve, double pdr_threshold,
                                    double eta) {
    check_sweep(curve);
    if (eta <= 0.0 || eta >= 1.0) throw invalid_input("detect_saturation: eta must be in (0,1)");
    const auto& stats = curve.stats;

    SaturationVerdict verdict;
    verdict.eta = eta;
    verdict.pdr_threshold = pdr_threshold;
    verdict.pdr = pdr_at(curve, pdr_threshold);

    for (std::size_t i = 0; i < stats.size(); ++i) {
        if (stats[i].plr > pdr_threshold) {
            verdict.potential_sat_index = i;
            break;
        }
    }
    if (!verdict.potential_sat_index) {
        verdict.classification = Classification::NO_SATURATION;
        verdict.reason = "sweep never crossed PDR threshold";
        return verdict;
    }

    const std::size_t start = *verdict.potential_sat_index;
    for (std::size_t i = start; i + 1 < stats.size(); ++i)
        verdict.tir_series.push_back({stats[i].offered_load_pps,
                                      stats[i + 1].offered_load_pps,
                                      tir(stats[i], stats[i + 1])});

    if (verdict.tir_series.empty()) {
        verdict.classification = Classification::BAD;
        verdict.reason = "insufficient evidence: no load level beyond the potential "
                         "saturation point";
        return verdict;
    }

    bool consistent = true;  // TIR < eta at the first pair and never cleared
    std::string violations;
    for (const auto& point : verdict.tir_series) {
        if (point.tir < eta) {
            verdict.entered_saturation = true;
        } else {
            verdict.entered_saturation = false;  // clear previous detections
            consistent = false;
            if (!violations.empty()) violations += ", ";
            violations += load_pair_label(point);
        }
    }

    if (consistent) {
        verdict.classification = Classification::GOOD;
    } else {
        verdict.classification = Classification::BAD;
        verdict.reason = "TIR >= eta at " + violations;
    }
    return verdict;
}

PdrAccuracy assess_pdr_accuracy(const SaturationVerdict& verdict) {
    PdrAccuracy result;
    switch (verdict.classification) {
        case Classification::GOOD:
            result.accurate = true;
            result.reason = "saturation detected at the potential saturation point and "
                            "persisting through the sweep";
            break;
        case Classification::BAD:
            result.accurate = false;
            result.reason = verdict.reason;
            break;
        case Classification::NO_SATURATION:
            result.accurate = false;
            result.reason = "sweep never crossed PDR threshold";
            break;
    }
    return result;
}

}  // namespace pastrami::saturation

#pragma once

#include <string>
#include <vector>

#include "pastrami/campaign.hpp"
#include "pastrami/saturation.hpp"

#include "json.hpp"

namespace pastrami::report {

inline constexpr const char* kSchemaVersion = "report-v1";
inline constexpr double kPlrFloor = 1e-6;

/// Everything a rendered report derives from: the aggregated sweep, the
/// verdict, and the checksum tying both to the same raw observations.
struct ReportBundle {
    std::string campaign_id;
    std::string curve_checksum;
    std::string generated_at;  // ISO-8601; caller-supplied so output is reproducible
    std::vector<LoadLevelStats> stats;
    saturation::SaturationVerdict verdict;
    std::vector<std::string> warnings;
};

ReportBundle make_bundle(const LoadLossCurve& curve,
                         const saturation::SaturationVerdict& verdict,
                         std::string campaign_id, std::string generated_at);

struct PlotOptions {
    double width = 840.0;
    double height = 480.0;
    bool dr_panel = true;  // second panel with the linear-scale delivery ratio
    std::string title;
};

/// Maps data coordinates onto the SVG canvas. The loss axis is log10 with a
/// hard floor at kPlrFloor: zero-loss points are drawn on the floor with a
/// distinct marker instead of disappearing at minus infinity.
struct PlotGeometry {
    double x0, x1, y0, y1;          // plot rectangle in svg units (y grows down)
    double load_min_pps, load_max_pps;

    double x_for_load(double load_pps) const;
    double y_for_plr(double plr) const;   // clamps to [kPlrFloor, 1]
};

/// Renders the log-scale load-loss chart (CI whiskers, PDR marker,
/// GOOD/BAD banner, optional delivery-ratio panel) as a self-contained SVG
/// document. Same inputs produce byte-identical output. Throws
/// invalid_input for fewer than two levels.
std::string render_loss_plot(const std::vector<LoadLevelStats>& stats,
                             const saturation::SaturationVerdict& verdict,
                             const PlotOptions& options = {});

/// Machine-readable report with stable key order, schema "report-v1".
nlohmann::ordered_json report_json(const ReportBundle& bundle);

enum class ReportFormat { json, markdown };

std::string emit_report(const ReportBundle& bundle, ReportFormat format);

}  // namespace pastrami::report

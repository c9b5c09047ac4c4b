#include "pastrami/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "pastrami/errors.hpp"
#include "pastrami/ingest.hpp"

namespace pastrami::report {

namespace {

std::string fmt2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string fmtg(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double clamp_plr(double plr) { return std::clamp(plr, kPlrFloor, 1.0); }

}  // namespace

double PlotGeometry::x_for_load(double load_pps) const {
    const double t = (load_pps - load_min_pps) / (load_max_pps - load_min_pps);
    return x0 + t * (x1 - x0);
}

double PlotGeometry::y_for_plr(double plr) const {
    const double decades = -std::log10(clamp_plr(plr));  // 0 at PLR=1, 6 at the floor
    return y0 + decades / 6.0 * (y1 - y0);
}

ReportBundle make_bundle(const LoadLossCurve& curve,
                         const saturation::SaturationVerdict& verdict,
                         std::string campaign_id, std::string generated_at) {
    ReportBundle bundle;
    bundle.campaign_id = std::move(campaign_id);
    bundle.curve_checksum = ingest::curve_checksum(curve);
    bundle.generated_at = std::move(generated_at);
    bundle.stats = curve.stats;
    bundle.verdict = verdict;
    bundle.warnings = curve.warnings;
    return bundle;
}

namespace {

struct Svg {
    std::string body;

    void line(double x1, double y1, double x2, double y2, const std::string& style) {
        body += "<line x1=\"" + fmt2(x1) + "\" y1=\"" + fmt2(y1) + "\" x2=\"" + fmt2(x2) +
                "\" y2=\"" + fmt2(y2) + "\" " + style + "/>\n";
    }
    void circle(double cx, double cy, double r, const std::string& style) {
        body += "<circle cx=\"" + fmt2(cx) + "\" cy=\"" + fmt2(cy) + "\" r=\"" + fmt2(r) +
                "\" " + style + "/>\n";
    }
    void text(double x, double y, const std::string& content, const std::string& attrs) {
        body += "<text x=\"" + fmt2(x) + "\" y=\"" + fmt2(y) + "\" " + attrs + ">" + content +
                "</text>\n";
    }
    void rect(double x, double y, double w, double h, const std::string& style) {
        body += "<rect x=\"" + fmt2(x) + "\" y=\"" + fmt2(y) + "\" width=\"" + fmt2(w) +
                "\" height=\"" + fmt2(h) + "\" " + style + "/>\n";
    }
    void raw(const std::string& s) { body += s; }
};

double nice_step(double span, int target_ticks) {
    const double raw = span / target_ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    double step = 10.0;
    if (norm <= 1.0) step = 1.0;
    else if (norm <= 2.0) step = 2.0;
    else if (norm <= 5.0) step = 5.0;
    return step * mag;
}

constexpr const char* kAxisStyle = "stroke=\"#444444\" stroke-width=\"1\"";
constexpr const char* kGridStyle = "stroke=\"#dddddd\" stroke-width=\"1\"";
constexpr const char* kLabelAttrs =
    "font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\"";

void draw_x_axis(Svg& svg, const PlotGeometry& g, bool labels) {
    svg.line(g.x0, g.y1, g.x1, g.y1, kAxisStyle);
    const double min_mpps = g.load_min_pps / 1e6;
    const double max_mpps = g.load_max_pps / 1e6;
    const double step = nice_step(max_mpps - min_mpps, 6);
    for (double tick = std::ceil(min_mpps / step - 1e-9) * step;
         tick <= max_mpps + 1e-9; tick += step) {
        const double x = g.x_for_load(tick * 1e6);
        svg.line(x, g.y1, x, g.y1 + 4, kAxisStyle);
        if (labels)
            svg.text(x, g.y1 + 17, fmtg(tick),
                     std::string(kLabelAttrs) + " text-anchor=\"middle\"");
    }
}

std::string classification_color(saturation::Classification c) {
    switch (c) {
        case saturation::Classification::GOOD: return "#2e7d32";
        case saturation::Classification::BAD: return "#c62828";
        case saturation::Classification::NO_SATURATION: return "#616161";
    }
    return "#616161";
}

}  // namespace

std::string render_loss_plot(const std::vector<LoadLevelStats>& stats,
                             const saturation::SaturationVerdict& verdict,
                             const PlotOptions& options) {
    if (stats.size() < 2)
        throw invalid_input("render_loss_plot: need at least 2 levels; "
                            "use the tabular report for single-level campaigns");

    const double width = options.width;
    const double plr_panel_height = options.height - 108.0;
    const double total_height = options.dr_panel ? options.height + 220.0 : options.height;

    PlotGeometry plr_panel{72.0, width - 24.0, 48.0, 48.0 + plr_panel_height,
                           stats.front().offered_load_pps, stats.back().offered_load_pps};

    Svg svg;
    svg.raw("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt2(width) +
            "\" height=\"" + fmt2(total_height) + "\" viewBox=\"0 0 " + fmt2(width) + " " +
            fmt2(total_height) + "\">\n");
    svg.rect(0, 0, width, total_height, "fill=\"#ffffff\"");

    const std::string color = classification_color(verdict.classification);

    // title and verdict banner
    if (!options.title.empty())
        svg.text(72, 28, options.title,
                 "font-family=\"sans-serif\" font-size=\"15\" fill=\"#111111\"");
    const std::string banner = verdict.classification == saturation::Classification::NO_SATURATION
                                   ? "NO SATURATION"
                                   : saturation::to_string(verdict.classification);
    svg.text(width - 24, 28, banner,
             "font-family=\"sans-serif\" font-size=\"17\" font-weight=\"bold\" fill=\"" + color +
                 "\" text-anchor=\"end\"");

    svg.rect(plr_panel.x0, plr_panel.y0, plr_panel.x1 - plr_panel.x0,
             plr_panel.y1 - plr_panel.y0,
             "fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\"");

    // log-scale gridlines and labels, one per decade down to the floor
    for (int exponent = 0; exponent >= -6; --exponent) {
        const double y = plr_panel.y_for_plr(std::pow(10.0, exponent));
        if (exponent != 0 && exponent != -6) svg.line(plr_panel.x0, y, plr_panel.x1, y, kGridStyle);
        const std::string label = exponent == 0 ? "1" : "1e" + std::to_string(exponent);
        svg.text(plr_panel.x0 - 8, y + 4, label,
                 std::string(kLabelAttrs) + " text-anchor=\"end\"");
    }
    draw_x_axis(svg, plr_panel, true);
    svg.text(plr_panel.x0 + (plr_panel.x1 - plr_panel.x0) / 2, plr_panel.y1 + 34,
             "Offered load [Mpps]", std::string(kLabelAttrs) + " text-anchor=\"middle\"");
    svg.text(18, plr_panel.y0 + (plr_panel.y1 - plr_panel.y0) / 2, "Packet loss ratio",
             std::string(kLabelAttrs) + " text-anchor=\"middle\" transform=\"rotate(-90 18 " +
                 fmt2(plr_panel.y0 + (plr_panel.y1 - plr_panel.y0) / 2) + ")\"");

    // CI whiskers (clamped to the visible loss range)
    for (const auto& level : stats) {
        if (!level.lcl95 || !level.ucl95) continue;
        const double x = plr_panel.x_for_load(level.offered_load_pps);
        const double y_lo = plr_panel.y_for_plr(*level.ucl95);
        const double y_hi = plr_panel.y_for_plr(*level.lcl95);
        svg.line(x, y_lo, x, y_hi, "stroke=\"#888888\" stroke-width=\"1\"");
        svg.line(x - 3, y_lo, x + 3, y_lo, "stroke=\"#888888\" stroke-width=\"1\"");
        svg.line(x - 3, y_hi, x + 3, y_hi, "stroke=\"#888888\" stroke-width=\"1\"");
    }

    // loss curve: polyline through the clamped positions
    std::string points;
    for (const auto& level : stats) {
        if (!points.empty()) points += ' ';
        points += fmt2(plr_panel.x_for_load(level.offered_load_pps)) + "," +
                  fmt2(plr_panel.y_for_plr(level.plr));
    }
    svg.raw("<polyline points=\"" + points +
            "\" fill=\"none\" stroke=\"#1565c0\" stroke-width=\"1.5\"/>\n");

    // markers: filled circles above the floor, open triangles at/below it
    for (const auto& level : stats) {
        const double x = plr_panel.x_for_load(level.offered_load_pps);
        const double y = plr_panel.y_for_plr(level.plr);
        if (level.plr > kPlrFloor) {
            svg.circle(x, y, 3, "fill=\"#1565c0\"");
        } else {
            svg.raw("<path d=\"M " + fmt2(x - 4) + " " + fmt2(y - 4) + " L " + fmt2(x + 4) +
                    " " + fmt2(y - 4) + " L " + fmt2(x) + " " + fmt2(y + 2) +
                    " Z\" fill=\"none\" stroke=\"#1565c0\" stroke-width=\"1.5\"/>\n");
        }
    }

    // PDR marker
    if (verdict.pdr.interpolated_pps) {
        const double x = plr_panel.x_for_load(*verdict.pdr.interpolated_pps);
        svg.line(x, plr_panel.y0, x, plr_panel.y1,
                 "stroke=\"#6a1b9a\" stroke-width=\"1\" stroke-dasharray=\"5,3\"");
        svg.text(x + 4, plr_panel.y0 + 14, "PDR@" + fmtg(verdict.pdr_threshold * 100) + "%",
                 std::string(kLabelAttrs) + " fill=\"#6a1b9a\"");
    }

    if (options.dr_panel) {
        PlotGeometry dr_panel{72.0, width - 24.0, plr_panel.y1 + 68.0,
                              plr_panel.y1 + 68.0 + 160.0, plr_panel.load_min_pps,
                              plr_panel.load_max_pps};
        const auto y_for_dr = [&](double dr) {
            return dr_panel.y1 - std::clamp(dr, 0.0, 1.0) * (dr_panel.y1 - dr_panel.y0);
        };
        svg.rect(dr_panel.x0, dr_panel.y0, dr_panel.x1 - dr_panel.x0,
                 dr_panel.y1 - dr_panel.y0,
                 "fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"1\"");
        for (int i = 0; i <= 4; ++i) {
            const double dr = i * 0.25;
            const double y = y_for_dr(dr);
            if (i != 0 && i != 4) svg.line(dr_panel.x0, y, dr_panel.x1, y, kGridStyle);
            svg.text(dr_panel.x0 - 8, y + 4, fmtg(dr),
                     std::string(kLabelAttrs) + " text-anchor=\"end\"");
        }
        draw_x_axis(svg, dr_panel, true);
        svg.text(dr_panel.x0 + (dr_panel.x1 - dr_panel.x0) / 2, dr_panel.y1 + 34,
                 "Offered load [Mpps]", std::string(kLabelAttrs) + " text-anchor=\"middle\"");
        svg.text(18, dr_panel.y0 + (dr_panel.y1 - dr_panel.y0) / 2, "Delivery ratio",
                 std::string(kLabelAttrs) + " text-anchor=\"middle\" transform=\"rotate(-90 18 " +
                     fmt2(dr_panel.y0 + (dr_panel.y1 - dr_panel.y0) / 2) + ")\"");

        std::string dr_points;
        for (const auto& level : stats) {
            if (!dr_points.empty()) dr_points += ' ';
            dr_points += fmt2(dr_panel.x_for_load(level.offered_load_pps)) + "," +
                         fmt2(y_for_dr(level.dr));
        }
        svg.raw("<polyline points=\"" + dr_points +
                "\" fill=\"none\" stroke=\"#c62828\" stroke-width=\"1.5\"/>\n");
        for (const auto& level : stats)
            svg.circle(dr_panel.x_for_load(level.offered_load_pps), y_for_dr(level.dr), 3,
                       "fill=\"#c62828\"");
    }

    svg.raw("</svg>\n");
    return svg.body;
}

namespace {

using nlohmann::ordered_json;

ordered_json optional_number(const std::optional<double>& v) {
    if (v) return *v;
    return nullptr;
}

}  // namespace

nlohmann::ordered_json report_json(const ReportBundle& bundle) {
    const auto& verdict = bundle.verdict;
    const auto accuracy = saturation::assess_pdr_accuracy(verdict);

    ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["campaign"] = bundle.campaign_id;
    doc["curve_checksum"] = bundle.curve_checksum;
    doc["generated_at"] = bundle.generated_at;
    doc["pdr_threshold"] = verdict.pdr_threshold;
    doc["eta"] = verdict.eta;
    doc["classification"] = saturation::to_string(verdict.classification);
    doc["accurate"] = accuracy.accurate;
    doc["accuracy_reason"] = accuracy.reason;
    doc["entered_saturation"] = verdict.entered_saturation;
    doc["sweep_exhausted"] = verdict.pdr.sweep_exhausted;
    doc["pdr_load_pps"] = optional_number(verdict.pdr.interpolated_pps);
    doc["pdr_grid_load_pps"] = optional_number(verdict.pdr.grid_load_pps);
    if (verdict.potential_sat_index) {
        doc["potential_sat_index"] = *verdict.potential_sat_index;
        doc["potential_sat_load_pps"] =
            bundle.stats.at(*verdict.potential_sat_index).offered_load_pps;
    } else {
        doc["potential_sat_index"] = nullptr;
        doc["potential_sat_load_pps"] = nullptr;
    }

    doc["levels"] = ordered_json::array();
    for (const auto& level : bundle.stats) {
        ordered_json row;
        row["offered_load_pps"] = level.offered_load_pps;
        row["k"] = level.k;
        row["plr"] = level.plr;
        row["dr"] = level.dr;
        row["throughput_pps"] = level.throughput_pps;
        row["sigma_plr"] = optional_number(level.sigma_plr);
        row["lcl95"] = optional_number(level.lcl95);
        row["ucl95"] = optional_number(level.ucl95);
        row["delta_ucl95"] = optional_number(level.delta_ucl95);
        doc["levels"].push_back(std::move(row));
    }

    doc["tir_series"] = ordered_json::array();
    for (const auto& point : verdict.tir_series) {
        ordered_json row;
        row["from_load_pps"] = point.from_load_pps;
        row["to_load_pps"] = point.to_load_pps;
        row["tir"] = point.tir;
        doc["tir_series"].push_back(std::move(row));
    }

    doc["warnings"] = bundle.warnings;
    return doc;
}

namespace {

std::string markdown_number(const std::optional<double>& v) {
    return v ? fmtg(*v) : std::string("-");
}

std::string markdown_report(const ReportBundle& bundle) {
    const auto& verdict = bundle.verdict;
    const auto accuracy = saturation::assess_pdr_accuracy(verdict);

    std::string md = "# Campaign report: " + bundle.campaign_id + "\n\n";
    md += "- Classification: **" + saturation::to_string(verdict.classification) + "**\n";
    md += "- PDR@" + fmtg(verdict.pdr_threshold * 100) + "%: ";
    if (verdict.pdr.interpolated_pps) {
        md += fmtg(*verdict.pdr.interpolated_pps / 1e6) + " Mpps (grid point " +
              markdown_number(verdict.pdr.grid_load_pps
                                  ? std::optional<double>(*verdict.pdr.grid_load_pps / 1e6)
                                  : std::nullopt) +
              " Mpps)";
        if (verdict.pdr.sweep_exhausted) md += " [sweep exhausted, threshold never exceeded]";
    } else {
        md += "not reached (loss above threshold at the lowest load)";
    }
    md += "\n";
    if (verdict.potential_sat_index)
        md += "- Potential saturation point: " +
              fmtg(bundle.stats.at(*verdict.potential_sat_index).offered_load_pps / 1e6) +
              " Mpps (level " + std::to_string(*verdict.potential_sat_index) + ")\n";
    md += "- Entered saturation: " + std::string(verdict.entered_saturation ? "yes" : "no") +
          "\n";
    md += "- PDR accuracy: " + std::string(accuracy.accurate ? "accurate" : "inaccurate") +
          " (" + accuracy.reason + ")\n";
    md += "- eta: " + fmtg(verdict.eta) + "\n";
    md += "- Curve checksum: " + bundle.curve_checksum + "\n";
    md += "- Generated at: " + bundle.generated_at + "\n";

    md += "\n## Load levels\n\n";
    md += "| Offered load [Mpps] | K | PLR | DR | Throughput [Mpps] | sigma_PLR | LCL95 | "
          "UCL95 | Delta_UCL95 |\n";
    md += "|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& level : bundle.stats) {
        md += "| " + fmtg(level.offered_load_pps / 1e6) + " | " + std::to_string(level.k) +
              " | " + fmtg(level.plr) + " | " + fmtg(level.dr) + " | " +
              fmtg(level.throughput_pps / 1e6) + " | " + markdown_number(level.sigma_plr) +
              " | " + markdown_number(level.lcl95) + " | " + markdown_number(level.ucl95) +
              " | " + markdown_number(level.delta_ucl95) + " |\n";
    }

    if (!verdict.tir_series.empty()) {
        md += "\n## TIR series\n\n";
        md += "| From [Mpps] | To [Mpps] | TIR |\n|---|---|---|\n";
        for (const auto& point : verdict.tir_series)
            md += "| " + fmtg(point.from_load_pps / 1e6) + " | " +
                  fmtg(point.to_load_pps / 1e6) + " | " + fmtg(point.tir) + " |\n";
    }

    if (!bundle.warnings.empty()) {
        md += "\n## Warnings\n\n";
        for (const auto& warning : bundle.warnings) md += "- " + warning + "\n";
    }
    return md;
}

}  // namespace

std::string emit_report(const ReportBundle& bundle, ReportFormat format) {
    if (format == ReportFormat::json) return report_json(bundle).dump(2) + "\n";
    return markdown_report(bundle);
}

}  // namespace pastrami::report

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "pastrami/curve_models.hpp"
#include "pastrami/errors.hpp"
#include "pastrami/ingest.hpp"
#include "pastrami/report.hpp"
#include "pastrami/saturation.hpp"

namespace fs = std::filesystem;
using namespace pastrami;

namespace {

// Exit codes are a stable contract for scripted triage.
constexpr int kExitGood = 0;
constexpr int kExitInputError = 1;
constexpr int kExitBadParams = 2;
constexpr int kExitBad = 3;
constexpr int kExitNoSaturation = 4;

bool color_enabled() { return std::getenv("PASTRAMI_NO_COLOR") == nullptr; }

std::string colored(const std::string& text, const char* code) {
    if (!color_enabled()) return text;
    return std::string("\033[") + code + "m" + text + "\033[0m";
}

std::string classification_label(saturation::Classification c) {
    switch (c) {
        case saturation::Classification::GOOD: return colored("GOOD", "32");
        case saturation::Classification::BAD: return colored("BAD", "31");
        case saturation::Classification::NO_SATURATION: return colored("NO_SATURATION", "33");
    }
    return "?";
}

std::string utc_now_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct AnalyzeConfig {
    double pdr_threshold = saturation::kDefaultPdrThreshold;
    double eta = saturation::kDefaultEta;
    double tx_tolerance = metrics::kDefaultTxTolerance;
    std::optional<std::string> out_dir;
    std::vector<std::string> formats = {"json", "md", "svg"};
    unsigned parallel = 1;
};

struct AnalysisResult {
    int exit_code = kExitInputError;
    std::string line;  // one-line summary for stdout
};

AnalysisResult analyze_one(const fs::path& campaign_dir, const AnalyzeConfig& config) {
    AnalysisResult result;
    try {
        LoadLossCurve curve = ingest::read_campaign(campaign_dir, config.tx_tolerance);
        const auto verdict =
            saturation::detect_saturation(curve, config.pdr_threshold, config.eta);

        const std::string campaign_id = campaign_dir.filename().string().empty()
                                            ? campaign_dir.string()
                                            : campaign_dir.filename().string();
        const auto bundle =
            report::make_bundle(curve, verdict, campaign_id, utc_now_iso8601());

        const fs::path out_dir = config.out_dir ? fs::path(*config.out_dir) / campaign_id
                                                : campaign_dir;
        fs::create_directories(out_dir);
        const auto want = [&](const char* f) {
            return std::find(config.formats.begin(), config.formats.end(), f) !=
                   config.formats.end();
        };
        const auto write_file = [](const fs::path& path, const std::string& content) {
            std::ofstream out(path, std::ios::binary);
            if (!out) throw io_error("cannot open " + path.string() + " for writing");
            out << content;
        };
        if (want("json"))
            write_file(out_dir / "report.json",
                       report::emit_report(bundle, report::ReportFormat::json));
        if (want("md"))
            write_file(out_dir / "report.md",
                       report::emit_report(bundle, report::ReportFormat::markdown));
        if (want("svg")) {
            report::PlotOptions options;
            options.title = campaign_id;
            write_file(out_dir / "loss_curve.svg",
                       report::render_loss_plot(curve.stats, verdict, options));
        }

        std::string pdr = "-";
        if (verdict.pdr.interpolated_pps) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.4f Mpps", *verdict.pdr.interpolated_pps / 1e6);
            pdr = buf;
        }
        result.line = campaign_id + ": " + classification_label(verdict.classification) +
                      "  PDR@" + std::to_string(config.pdr_threshold * 100).substr(0, 3) +
                      "% = " + pdr;
        switch (verdict.classification) {
            case saturation::Classification::GOOD: result.exit_code = kExitGood; break;
            case saturation::Classification::BAD: result.exit_code = kExitBad; break;
            case saturation::Classification::NO_SATURATION:
                result.exit_code = kExitNoSaturation;
                break;
        }
    } catch (const ingest_error& e) {
        result.line = campaign_dir.string() + ": input error: " + e.what();
        result.exit_code = kExitInputError;
    } catch (const std::exception& e) {
        result.line = campaign_dir.string() + ": error: " + e.what();
        result.exit_code = kExitInputError;
    }
    return result;
}

int combine_exit_codes(const std::vector<AnalysisResult>& results) {
    bool any_error = false, any_bad = false, any_nosat = false;
    for (const auto& r : results) {
        any_error |= r.exit_code == kExitInputError;
        any_bad |= r.exit_code == kExitBad;
        any_nosat |= r.exit_code == kExitNoSaturation;
    }
    if (any_error) return kExitInputError;
    if (any_bad) return kExitBad;
    if (any_nosat) return kExitNoSaturation;
    return kExitGood;
}

int cmd_analyze(const std::vector<std::string>& paths, const AnalyzeConfig& config) {
    std::vector<AnalysisResult> results(paths.size());
    const unsigned workers =
        std::max(1u, std::min<unsigned>(config.parallel, paths.size()));
    if (workers == 1) {
        for (std::size_t i = 0; i < paths.size(); ++i)
            results[i] = analyze_one(paths[i], config);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < paths.size();
                     i = next.fetch_add(1))
                    results[i] = analyze_one(paths[i], config);
            });
        for (auto& t : pool) t.join();
    }
    for (const auto& r : results) {
        if (r.exit_code == kExitInputError)
            std::cerr << r.line << "\n";
        else
            std::cout << r.line << "\n";
    }
    return combine_exit_codes(results);
}

std::vector<double> parse_loads_spec(const std::string& spec) {
    // start:stop:step in Mpps, inclusive stop
    double start = 0, stop = 0, step = 0;
    const auto first = spec.find(':');
    const auto second = spec.find(':', first + 1);
    if (first == std::string::npos || second == std::string::npos)
        throw invalid_input("loads spec must be start:stop:step (Mpps)");
    try {
        start = std::stod(spec.substr(0, first));
        stop = std::stod(spec.substr(first + 1, second - first - 1));
        step = std::stod(spec.substr(second + 1));
    } catch (const std::exception&) {
        throw invalid_input("loads spec must be numeric start:stop:step (Mpps)");
    }
    if (start <= 0 || step <= 0 || stop < start)
        throw invalid_input("loads spec requires 0 < start <= stop and step > 0");
    std::vector<double> loads_pps;
    const auto count = static_cast<std::size_t>((stop - start) / step + 1e-9);
    for (std::size_t i = 0; i <= count; ++i)
        loads_pps.push_back(std::llround((start + step * static_cast<double>(i)) * 1e6));
    return loads_pps;
}

struct SynthConfig {
    std::string mode = "ideal";
    double o_sat_mpps = 1.0;
    double plr_at_sat = 0.0;
    std::optional<double> o_trash_mpps;
    std::optional<double> m_mpps;
    std::optional<double> plr_floor;
    std::optional<double> o_floor_mpps;
    std::string loads_spec;
    int k = 50;
    double duration_s = 10.0;
    std::uint64_t seed = 0;
    bool noiseless = false;
    std::string out_dir;
};

int cmd_synth(const SynthConfig& config) {
    curves::SyntheticModel model;
    try {
        if (config.mode == "ideal") {
            model = curves::SyntheticModel::ideal(config.o_sat_mpps * 1e6);
            if (config.plr_at_sat != 0.0 || config.o_trash_mpps || config.m_mpps ||
                config.plr_floor || config.o_floor_mpps)
                throw invalid_input("ideal mode takes no loss/trash/ramp parameters");
        } else if (config.mode == "realistic") {
            if (!config.o_trash_mpps || !config.m_mpps)
                throw invalid_input("realistic mode requires --o-trash and --m");
            std::optional<curves::PreSaturationRamp> ramp;
            if (config.plr_floor || config.o_floor_mpps) {
                curves::PreSaturationRamp r;
                r.plr_floor = config.plr_floor.value_or(1e-6);
                r.o_floor_pps = config.o_floor_mpps.value_or(0.5 * config.o_sat_mpps) * 1e6;
                ramp = r;
            }
            model = curves::SyntheticModel::realistic(
                config.o_sat_mpps * 1e6, config.plr_at_sat,
                *config.o_trash_mpps * 1e6, *config.m_mpps * 1e6, ramp);
        } else {
            throw invalid_input("mode must be ideal or realistic");
        }
        curves::validate_model(model);

        const auto loads = parse_loads_spec(config.loads_spec);
        const auto runs =
            config.noiseless
                ? curves::noiseless_campaign(model, loads, config.duration_s, config.k)
                : curves::sample_campaign(model, loads, config.duration_s, config.k,
                                          config.seed);

        LoadLossCurve curve;
        curve.metadata.experiment_class = ExperimentClass::other("synthetic");
        curve.metadata.testbed = "synthetic";
        curve.metadata.environment = Environment::bare_metal;
        curve.metadata.kernel_version = "n/a";
        curve.metadata.runs = config.k;
        curve.metadata.duration_s = config.duration_s;
        curve.metadata.date = utc_now_iso8601().substr(0, 10);
        curve.metadata.version = "1";
        curve.metadata.notes =
            std::string(config.mode) + " model, o_sat=" + std::to_string(config.o_sat_mpps) +
            " Mpps, seed=" + std::to_string(config.seed) +
            (config.noiseless ? ", noiseless" : "");
        for (const auto& run : runs) {
            const double load = run.offered_load_pps;
            if (curve.levels.empty() || curve.levels.back().offered_load_pps != load)
                curve.levels.push_back({load, {}});
            curve.levels.back().runs.push_back(run);
        }
        refresh_stats(curve);
        ingest::write_campaign(curve, config.out_dir);
        std::cout << "wrote " << curve.levels.size() << " levels x " << config.k
                  << " runs to " << config.out_dir << "\n";
        return kExitGood;
    } catch (const invalid_input& e) {
        std::cerr << "synth: invalid parameters: " << e.what() << "\n";
        return kExitBadParams;
    } catch (const std::exception& e) {
        std::cerr << "synth: " << e.what() << "\n";
        return kExitInputError;
    }
}

int cmd_compare(const std::vector<std::string>& paths, const AnalyzeConfig& config) {
    struct Row {
        std::string campaign;
        std::string classification;
        std::string pdr;
        std::string max_delta;
        bool caution = false;
    };
    std::vector<Row> rows;
    bool any_failed = false;
    for (const auto& path : paths) {
        Row row;
        row.campaign = fs::path(path).filename().string();
        try {
            LoadLossCurve curve = ingest::read_campaign(path, config.tx_tolerance);
            const auto verdict =
                saturation::detect_saturation(curve, config.pdr_threshold, config.eta);
            row.classification = saturation::to_string(verdict.classification);
            row.caution = verdict.classification != saturation::Classification::GOOD;
            if (verdict.pdr.interpolated_pps) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.4f", *verdict.pdr.interpolated_pps / 1e6);
                row.pdr = buf;
            } else {
                row.pdr = "-";
            }
            double max_delta = -1.0;
            for (const auto& level : curve.stats)
                if (level.delta_ucl95) max_delta = std::max(max_delta, *level.delta_ucl95);
            if (max_delta >= 0.0) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.4g", max_delta);
                row.max_delta = buf;
            } else {
                row.max_delta = "-";
            }
        } catch (const std::exception& e) {
            std::cerr << path << ": " << e.what() << "\n";
            any_failed = true;
            continue;
        }
        rows.push_back(std::move(row));
    }
    if (any_failed) return kExitInputError;

    std::printf("%-24s %-14s %12s %14s\n", "campaign", "classification", "PDR [Mpps]",
                "max dUCL95");
    for (const auto& row : rows) {
        std::printf("%-24s %-14s %12s %14s%s\n", row.campaign.c_str(),
                    row.classification.c_str(), row.pdr.c_str(), row.max_delta.c_str(),
                    row.caution ? "  (!) PDR unreliable: not a GOOD sweep" : "");
    }
    return kExitGood;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Load-sweep analysis for software-router benchmarking campaigns"};
    app.require_subcommand(1);

    AnalyzeConfig analyze_config;
    std::vector<std::string> analyze_paths;
    auto* analyze = app.add_subcommand("analyze", "Analyze measurement campaigns");
    analyze->add_option("campaigns", analyze_paths, "Campaign directories")
        ->required()
        ->expected(-1);
    analyze->add_option("--pdr-threshold", analyze_config.pdr_threshold, "PDR loss threshold")
        ->capture_default_str();
    analyze->add_option("--eta", analyze_config.eta, "TIR saturation threshold")
        ->capture_default_str();
    analyze
        ->add_option("--tx-tolerance", analyze_config.tx_tolerance,
                     "Accepted offered_count deviation from offered_load*duration")
        ->capture_default_str();
    std::string analyze_out;
    analyze->add_option("--out", analyze_out, "Output directory (default: campaign dir)");
    analyze
        ->add_option("--format", analyze_config.formats,
                     "Artifacts to write (json, md, svg)")
        ->delimiter(',')
        ->capture_default_str();
    analyze->add_option("--parallel", analyze_config.parallel, "Analyze N campaigns concurrently")
        ->capture_default_str();

    SynthConfig synth_config;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic campaign");
    synth->add_option("--mode", synth_config.mode, "Curve model: ideal or realistic")
        ->capture_default_str();
    synth->add_option("--o-sat", synth_config.o_sat_mpps, "Saturation offered load [Mpps]")
        ->required();
    synth->add_option("--plr-at-sat", synth_config.plr_at_sat, "Loss ratio at saturation")
        ->capture_default_str();
    synth->add_option("--o-trash", synth_config.o_trash_mpps,
                      "Trashing threshold [Mpps] (realistic)");
    synth->add_option("--m", synth_config.m_mpps, "Throughput decay constant [Mpps] (realistic)");
    synth->add_option("--plr-floor", synth_config.plr_floor,
                      "Pre-saturation ramp floor loss ratio (realistic)");
    synth->add_option("--o-floor", synth_config.o_floor_mpps,
                      "Load where the loss ramp starts [Mpps] (realistic)");
    synth->add_option("--loads", synth_config.loads_spec, "Sweep grid start:stop:step [Mpps]")
        ->required();
    synth->add_option("--k", synth_config.k, "Runs per load level")->capture_default_str();
    synth->add_option("--duration", synth_config.duration_s, "Run duration [s]")
        ->capture_default_str();
    synth->add_option("--seed", synth_config.seed, "RNG seed")->required();
    synth->add_flag("--noiseless", synth_config.noiseless,
                    "Use exact expected counts instead of binomial noise");
    synth->add_option("--out", synth_config.out_dir, "Campaign directory to write")->required();

    AnalyzeConfig compare_config;
    std::vector<std::string> compare_paths;
    auto* compare = app.add_subcommand("compare", "Compare analyzed campaigns side by side");
    compare->add_option("campaigns", compare_paths, "Campaign directories (>= 2)")
        ->required()
        ->expected(-1);
    compare->add_option("--pdr-threshold", compare_config.pdr_threshold, "PDR loss threshold")
        ->capture_default_str();
    compare->add_option("--eta", compare_config.eta, "TIR saturation threshold")
        ->capture_default_str();
    compare
        ->add_option("--tx-tolerance", compare_config.tx_tolerance,
                     "Accepted offered_count deviation from offered_load*duration")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInputError;
    }

    if (analyze->parsed()) {
        if (!analyze_out.empty()) analyze_config.out_dir = analyze_out;
        return cmd_analyze(analyze_paths, analyze_config);
    }
    if (synth->parsed()) return cmd_synth(synth_config);
    if (compare->parsed()) {
        if (compare_paths.size() < 2) {
            std::cerr << "compare: need at least 2 campaign directories\n";
            return kExitInputError;
        }
        return cmd_compare(compare_paths, compare_config);
    }
    return kExitInputError;
}

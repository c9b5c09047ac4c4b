#include "pastrami/ingest.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <system_error>

#include "pastrami/errors.hpp"

namespace pastrami::ingest {

namespace {

using nlohmann::ordered_json;

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string encode_experiment_class(const ExperimentClass& c) {
    switch (c.kind) {
        case ExperimentClass::Kind::ipv6_routing: return "ipv6-routing";
        case ExperimentClass::Kind::ebpf_routing: return "ebpf-routing";
        case ExperimentClass::Kind::other: return c.other_name;
    }
    return "ipv6-routing";
}

ExperimentClass decode_experiment_class(const std::string& s) {
    if (s == "ipv6-routing") return ExperimentClass::ipv6_routing();
    if (s == "ebpf-routing") return ExperimentClass::ebpf_routing();
    return ExperimentClass::other(s);
}

ordered_json encode_ring_buffer(const NicRingBuffer& b) {
    switch (b.kind) {
        case NicRingBuffer::Kind::small_512: return "small-512";
        case NicRingBuffer::Kind::large_4096: return "large-4096";
        case NicRingBuffer::Kind::custom: return b.packets;
    }
    return "small-512";
}

constexpr const char* kMetadataRule = "metadata schema";

[[noreturn]] void metadata_error(const std::string& file, const std::string& detail) {
    throw ingest_error(file, std::nullopt, kMetadataRule, detail);
}

NicRingBuffer decode_ring_buffer(const std::string& file, const ordered_json& v) {
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "small-512") return NicRingBuffer::small();
        if (s == "large-4096") return NicRingBuffer::large();
        metadata_error(file, "nic_ring_buffer must be small-512, large-4096 or a packet count");
    }
    if (v.is_number_unsigned() || v.is_number_integer()) {
        const auto n = v.get<std::int64_t>();
        if (n <= 0) metadata_error(file, "nic_ring_buffer packet count must be > 0");
        return NicRingBuffer::custom(static_cast<std::uint32_t>(n));
    }
    metadata_error(file, "nic_ring_buffer must be a string or a packet count");
}

Environment decode_environment(const std::string& file, const std::string& s) {
    if (s == "bare-metal") return Environment::bare_metal;
    if (s == "virtual-machine") return Environment::virtual_machine;
    if (s == "container") return Environment::container;
    metadata_error(file, "environment must be bare-metal, virtual-machine or container, got \"" + s + "\"");
}

CpuPinning decode_cpu_pinning(const std::string& file, const std::string& s) {
    if (s == "unpinned") return CpuPinning::unpinned;
    if (s == "pin-1-cpu") return CpuPinning::pin_1_cpu;
    if (s == "pin-2-cpu") return CpuPinning::pin_2_cpu;
    metadata_error(file, "cpu_pinning must be unpinned, pin-1-cpu or pin-2-cpu, got \"" + s + "\"");
}

const ordered_json& require_key(const std::string& file, const ordered_json& obj,
                                const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) metadata_error(file, std::string("missing key \"") + key + "\"");
    return *it;
}

std::string require_string(const std::string& file, const ordered_json& obj, const char* key) {
    const auto& v = require_key(file, obj, key);
    if (!v.is_string()) metadata_error(file, std::string("key \"") + key + "\" must be a string");
    return v.get<std::string>();
}

ExperimentMetadata parse_metadata(const std::string& file, const ordered_json& obj) {
    if (!obj.is_object()) metadata_error(file, "top-level value must be an object");

    ExperimentMetadata md;
    md.experiment_class = decode_experiment_class(require_string(file, obj, "experiment_class"));
    md.testbed = require_string(file, obj, "testbed");
    md.environment = decode_environment(file, require_string(file, obj, "environment"));
    md.kernel_version = require_string(file, obj, "kernel_version");
    md.cpu_pinning = decode_cpu_pinning(file, require_string(file, obj, "cpu_pinning"));
    md.nic_ring_buffer = decode_ring_buffer(file, require_key(file, obj, "nic_ring_buffer"));

    const auto& runs = require_key(file, obj, "runs");
    if (!runs.is_number_integer() && !runs.is_number_unsigned())
        metadata_error(file, "runs must be an integer");
    md.runs = runs.get<int>();
    if (md.runs < 1) metadata_error(file, "runs must be >= 1");

    const auto& duration = require_key(file, obj, "duration_s");
    if (!duration.is_number()) metadata_error(file, "duration_s must be a number");
    md.duration_s = duration.get<double>();
    if (md.duration_s <= 0.0) metadata_error(file, "duration_s must be > 0");

    const auto& packet_size = require_key(file, obj, "packet_size_bytes");
    if (!packet_size.is_number_integer() && !packet_size.is_number_unsigned())
        metadata_error(file, "packet_size_bytes must be an integer");
    md.packet_size_bytes = packet_size.get<int>();
    if (md.packet_size_bytes <= 0) metadata_error(file, "packet_size_bytes must be > 0");

    md.date = require_string(file, obj, "date");
    md.version = require_string(file, obj, "version");
    md.notes = obj.contains("notes") && obj["notes"].is_string()
                   ? obj["notes"].get<std::string>()
                   : std::string{};

    static constexpr const char* known[] = {
        "experiment_class", "testbed", "environment", "kernel_version",
        "cpu_pinning",      "nic_ring_buffer", "runs", "duration_s",
        "packet_size_bytes", "date", "version", "notes"};
    for (const auto& [key, value] : obj.items()) {
        bool is_known = false;
        for (const char* k : known) is_known = is_known || key == k;
        if (!is_known) md.extra[key] = value;
    }
    return md;
}

struct CsvRow {
    std::uint64_t offered_load_pps;
    std::uint64_t run_index;
    double duration_s;
    std::uint64_t offered_count;
    std::uint64_t delivered_count;
};

constexpr const char* kRowFormatRule = "row format";
constexpr const char* kCountsRule = "offered_count >= delivered_count >= 0 and > 0";
constexpr const char* kSortRule = "rows sorted by (offered_load_pps, run_index)";
constexpr const char* kLoadRule = "offered_load > 0";
constexpr const char* kDurationRule = "duration > 0";
constexpr const char* kTxToleranceRule = "offered_count within tx_tolerance of offered_load*duration";

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

template <typename T>
T parse_field(const std::string& file, std::size_t row, const std::string& field,
              const char* name) {
    T value{};
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ingest_error(file, row, kRowFormatRule,
                           std::string(name) + " is not a valid number: \"" + field + "\"");
    return value;
}

CsvRow parse_row(const std::string& file, std::size_t row, const std::string& line) {
    const auto fields = split_fields(line);
    if (fields.size() != 5)
        throw ingest_error(file, row, kRowFormatRule,
                           "expected 5 comma-separated fields, got " +
                               std::to_string(fields.size()));
    CsvRow out;
    out.offered_load_pps = parse_field<std::uint64_t>(file, row, fields[0], "offered_load_pps");
    out.run_index = parse_field<std::uint64_t>(file, row, fields[1], "run_index");
    out.duration_s = parse_field<double>(file, row, fields[2], "duration_s");
    out.offered_count = parse_field<std::uint64_t>(file, row, fields[3], "offered_count");
    out.delivered_count = parse_field<std::uint64_t>(file, row, fields[4], "delivered_count");
    return out;
}

void validate_row(const std::string& file, std::size_t row, const CsvRow& r,
                  double tx_tolerance) {
    if (r.offered_load_pps == 0) throw ingest_error(file, row, kLoadRule, "offered_load_pps is 0");
    if (r.duration_s <= 0.0)
        throw ingest_error(file, row, kDurationRule,
                           "duration_s must be > 0, got " + format_double(r.duration_s));
    if (r.offered_count == 0 || r.offered_count < r.delivered_count)
        throw ingest_error(file, row, kCountsRule,
                           "offered=" + std::to_string(r.offered_count) +
                               " delivered=" + std::to_string(r.delivered_count));
    const double nominal = static_cast<double>(r.offered_load_pps) * r.duration_s;
    const double deviation =
        std::abs(static_cast<double>(r.offered_count) - nominal) / nominal;
    if (deviation > tx_tolerance)
        throw ingest_error(file, row, kTxToleranceRule,
                           "offered_count " + std::to_string(r.offered_count) +
                               " deviates " + format_double(deviation) + " from " +
                               format_double(nominal) + " (tolerance " +
                               format_double(tx_tolerance) + ")");
}

}  // namespace

std::string canonical_metadata_json(const ExperimentMetadata& metadata) {
    ordered_json obj;
    obj["experiment_class"] = encode_experiment_class(metadata.experiment_class);
    obj["testbed"] = metadata.testbed;
    obj["environment"] = to_string(metadata.environment);
    obj["kernel_version"] = metadata.kernel_version;
    obj["cpu_pinning"] = to_string(metadata.cpu_pinning);
    obj["nic_ring_buffer"] = encode_ring_buffer(metadata.nic_ring_buffer);
    obj["runs"] = metadata.runs;
    obj["duration_s"] = metadata.duration_s;
    obj["packet_size_bytes"] = metadata.packet_size_bytes;
    obj["date"] = metadata.date;
    obj["version"] = metadata.version;
    obj["notes"] = metadata.notes;
    for (const auto& [key, value] : metadata.extra.items()) obj[key] = value;
    return obj.dump(2) + "\n";
}

std::string canonical_runs_csv(const LoadLossCurve& curve) {
    std::string out = kRunsHeader;
    out += '\n';
    for (const auto& level : curve.levels) {
        const auto load = static_cast<std::uint64_t>(std::llround(level.offered_load_pps));
        for (std::size_t i = 0; i < level.runs.size(); ++i) {
            const auto& run = level.runs[i];
            out += std::to_string(load);
            out += ',';
            out += std::to_string(i);
            out += ',';
            out += format_double(run.duration_s);
            out += ',';
            out += std::to_string(run.offered_count);
            out += ',';
            out += std::to_string(run.delivered_count);
            out += '\n';
        }
    }
    return out;
}

std::string curve_checksum(const LoadLossCurve& curve) {
    const std::string csv = canonical_runs_csv(curve);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const unsigned char c : csv) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, hash, 16);
    std::string hex(buf, res.ptr);
    hex.insert(0, 16 - hex.size(), '0');
    return "fnv1a64:" + hex;
}

LoadLossCurve read_campaign(const std::filesystem::path& dir, double tx_tolerance) {
    namespace fs = std::filesystem;
    const fs::path metadata_path = dir / kMetadataFile;
    const fs::path runs_path = dir / kRunsFile;
    if (!fs::exists(dir))
        throw ingest_error(dir.string(), std::nullopt, "campaign directory present",
                           "no such directory");
    if (!fs::exists(metadata_path))
        throw ingest_error(metadata_path.string(), std::nullopt, "file present", "missing file");
    if (!fs::exists(runs_path))
        throw ingest_error(runs_path.string(), std::nullopt, "file present", "missing file");

    LoadLossCurve curve;
    {
        std::ifstream in(metadata_path);
        if (!in) throw io_error("cannot open " + metadata_path.string());
        ordered_json obj;
        try {
            obj = ordered_json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ingest_error(metadata_path.string(), std::nullopt, "valid JSON", e.what());
        }
        curve.metadata = parse_metadata(metadata_path.string(), obj);
    }

    std::ifstream in(runs_path);
    if (!in) throw io_error("cannot open " + runs_path.string());
    const std::string file = runs_path.string();

    std::string line;
    std::size_t row = 0;
    if (!std::getline(in, line))
        throw ingest_error(file, 1, "header", "empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    row = 1;
    if (line != kRunsHeader)
        throw ingest_error(file, 1, "header",
                           "expected \"" + std::string(kRunsHeader) + "\", got \"" + line + "\"");

    bool have_previous = false;
    CsvRow previous{};
    std::vector<std::string> duration_warnings;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            if (in.peek() == std::char_traits<char>::eof()) break;
            throw ingest_error(file, row, kRowFormatRule, "blank row");
        }
        const CsvRow parsed = parse_row(file, row, line);
        validate_row(file, row, parsed, tx_tolerance);

        if (have_previous) {
            const bool ordered =
                parsed.offered_load_pps > previous.offered_load_pps ||
                (parsed.offered_load_pps == previous.offered_load_pps &&
                 parsed.run_index > previous.run_index);
            if (!ordered)
                throw ingest_error(file, row, kSortRule,
                                   "row is not strictly after the previous one");
        }

        const auto load = static_cast<double>(parsed.offered_load_pps);
        if (curve.levels.empty() || curve.levels.back().offered_load_pps != load)
            curve.levels.push_back({load, {}});
        curve.levels.back().runs.push_back(
            {load, parsed.duration_s, parsed.offered_count, parsed.delivered_count});

        if (parsed.duration_s != curve.metadata.duration_s)
            duration_warnings.push_back("row " + std::to_string(row) + ": duration " +
                                        format_double(parsed.duration_s) +
                                        " differs from metadata duration " +
                                        format_double(curve.metadata.duration_s));
        previous = parsed;
        have_previous = true;
    }
    if (curve.levels.empty())
        throw ingest_error(file, row + 1, kRowFormatRule, "no data rows");

    refresh_stats(curve);
    for (auto& w : duration_warnings) curve.warnings.push_back(std::move(w));
    return curve;
}

void write_campaign(const LoadLossCurve& curve, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("cannot create directory " + dir.string() + ": " + ec.message());

    const auto write_file = [](const fs::path& path, const std::string& content) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw io_error("cannot open " + path.string() + " for writing");
        out << content;
        if (!out) throw io_error("write failed for " + path.string());
    };
    write_file(dir / kMetadataFile, canonical_metadata_json(curve.metadata));
    write_file(dir / kRunsFile, canonical_runs_csv(curve));
}

}  // namespace pastrami::ingest

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pastrami/types.hpp"

#include "json.hpp"

namespace pastrami {

enum class Environment { bare_metal, virtual_machine, container };
enum class CpuPinning { unpinned, pin_1_cpu, pin_2_cpu };

struct ExperimentClass {
    enum class Kind { ipv6_routing, ebpf_routing, other };
    Kind kind = Kind::ipv6_routing;
    std::string other_name;  // set when kind == other

    static ExperimentClass ipv6_routing() { return {Kind::ipv6_routing, {}}; }
    static ExperimentClass ebpf_routing() { return {Kind::ebpf_routing, {}}; }
    static ExperimentClass other(std::string name) { return {Kind::other, std::move(name)}; }

    bool operator==(const ExperimentClass&) const = default;
};

struct NicRingBuffer {
    enum class Kind { small_512, large_4096, custom };
    Kind kind = Kind::small_512;
    std::uint32_t packets = 512;

    static NicRingBuffer small() { return {Kind::small_512, 512}; }
    static NicRingBuffer large() { return {Kind::large_4096, 4096}; }
    static NicRingBuffer custom(std::uint32_t n) { return {Kind::custom, n}; }

    bool operator==(const NicRingBuffer&) const = default;
};

/// Experiment-configuration record attached to every campaign.
/// Unknown JSON keys survive a read/write round trip via `extra`.
struct ExperimentMetadata {
    ExperimentClass experiment_class;
    std::string testbed = "local";
    Environment environment = Environment::bare_metal;
    std::string kernel_version;
    CpuPinning cpu_pinning = CpuPinning::unpinned;
    NicRingBuffer nic_ring_buffer;
    int runs = 50;
    double duration_s = 10.0;
    int packet_size_bytes = 64;
    std::string date;  // ISO-8601
    std::string version;
    std::string notes;
    nlohmann::ordered_json extra = nlohmann::ordered_json::object();

    bool operator==(const ExperimentMetadata&) const = default;
};

std::string to_string(Environment e);
std::string to_string(CpuPinning p);

/// A full load sweep: per-level raw observations plus the aggregated stats
/// cache. Offered loads are strictly increasing. Constraint violations that
/// are tolerated (per-level K drift, duration drift vs. metadata) land in
/// `warnings`.
struct LoadLossCurve {
    struct Level {
        double offered_load_pps = 0.0;
        std::vector<RunObservation> runs;
    };

    ExperimentMetadata metadata;
    std::vector<Level> levels;
    std::vector<LoadLevelStats> stats;
    std::vector<std::string> warnings;

    std::size_t size() const { return levels.size(); }
};

/// Recomputes the stats cache from the raw observations. Resets `warnings`
/// and repopulates the K-mismatch ones, so callers append their own
/// afterwards. Throws invalid_input on malformed levels.
void refresh_stats(LoadLossCurve& curve);

}  // namespace pastrami

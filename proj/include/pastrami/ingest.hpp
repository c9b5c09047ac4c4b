#pragma once

#include <filesystem>
#include <string>

#include "pastrami/campaign.hpp"
#include "pastrami/metrics.hpp"

namespace pastrami::ingest {

inline constexpr const char* kMetadataFile = "metadata.json";
inline constexpr const char* kRunsFile = "runs.csv";
inline constexpr const char* kRunsHeader =
    "offered_load_pps,run_index,duration_s,offered_count,delivered_count";

/// Reads and validates a campaign directory (metadata.json + runs.csv) and
/// aggregates the stats cache. Throws ingest_error with file/row/rule
/// context on any schema or invariant violation; tolerated inconsistencies
/// (per-level K drift, duration drift) are recorded as curve warnings.
LoadLossCurve read_campaign(const std::filesystem::path& dir,
                            double tx_tolerance = metrics::kDefaultTxTolerance);

/// Writes the campaign in canonical form: fixed metadata key order, rows
/// sorted by (offered_load_pps, run_index), '\n' newlines, no trailing
/// whitespace. Two writes of the same curve produce identical bytes.
void write_campaign(const LoadLossCurve& curve, const std::filesystem::path& dir);

/// The exact bytes write_campaign puts into runs.csv.
std::string canonical_runs_csv(const LoadLossCurve& curve);

/// The exact bytes write_campaign puts into metadata.json.
std::string canonical_metadata_json(const ExperimentMetadata& metadata);

/// FNV-1a 64 over the canonical runs.csv bytes; links reports to the
/// exact observations they were computed from.
std::string curve_checksum(const LoadLossCurve& curve);

}  // namespace pastrami::ingest

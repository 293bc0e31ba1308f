#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "driftlap/verify.hpp"

namespace driftlap {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

const char* to_string(Space space);

// Provenance block embedded in every report: which subcommand ran, the full
// resolved configuration, tool version, seed, wall-clock timestamp, and an
// FNV-1a hash of the canonical configuration dump.  The timestamp is the only
// volatile field.
struct RunManifest {
    std::string subcommand;
    nlohmann::json config;
    std::string version = kToolVersion;
    std::uint64_t seed = 0;
    std::string timestamp;
    std::string config_hash;
};

std::string iso_timestamp_utc();
std::string fnv1a_hex(std::string_view bytes);

nlohmann::json config_to_json(const SweepConfig& cfg);
RunManifest make_manifest(const std::string& subcommand, nlohmann::json config,
                          std::uint64_t seed);

// include_volatile == false drops wall times and the manifest timestamp,
// leaving a canonical form that must be byte-identical across runs and thread
// counts for equal seeds.
nlohmann::json manifest_to_json(const RunManifest& man, bool include_volatile = true);
nlohmann::json report_to_json(const ResidualReport& rep, const RunManifest& man,
                              bool include_volatile = true);
nlohmann::json delta_to_json(const DeltaMassEstimate& est, const RunManifest& man,
                             double stability_tol, bool include_volatile = true);
nlohmann::json diagram_to_json(const DiagramReport& rep, const RunManifest& man,
                               bool include_volatile = true);

// Schema stability: records and the pass flag parsed back from a serialized
// report, bit-identical statistics included.  The config inside the manifest
// is not reconstructed.
ResidualReport report_from_json(const nlohmann::json& j);

// Flat projections with one row per record (resp. per ladder entry).
std::string report_to_csv(const ResidualReport& rep);
std::string delta_to_csv(const DeltaMassEstimate& est);

} // namespace driftlap

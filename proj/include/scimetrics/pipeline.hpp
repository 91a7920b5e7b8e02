#pragma once

#include "scimetrics/config.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace scimetrics {

/// Pipeline steps in dependency order. `report` runs all of them.
inline constexpr std::string_view kSubcommands[] = {"ingest", "embed", "label",  "train", "fuse",
                                                    "score",  "regress", "series", "map", "report"};

/// Runs one subcommand and rewrites the output manifest. Throws ConfigError,
/// DataError or MissingArtifact.
void run_step(std::string_view subcommand, const RunConfig& config);

/// run_step with exceptions mapped to exit codes: 0 success, 2 configuration
/// error, 3 data error (including a missing prerequisite artifact).
int run(std::string_view subcommand, const RunConfig& config);

struct ManifestEntry {
    std::string path;  // relative to the output directory
    std::uintmax_t bytes = 0;
    std::string sha256;
};

/// Lists every file under `out` except the manifest itself, sorted by path,
/// and writes it to <out>/manifest.tsv.
std::vector<ManifestEntry> write_manifest(const std::filesystem::path& out);
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& out);

/// Writes corpus.jsonl and registry.jsonl of a synthetic corpus into `dir`.
void write_synthetic_corpus(std::size_t papers, std::uint64_t seed, const std::filesystem::path& dir);

}  // namespace scimetrics

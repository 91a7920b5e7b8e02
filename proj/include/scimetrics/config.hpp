#pragma once

#include "scimetrics/econometrics.hpp"
#include "scimetrics/mapviz.hpp"
#include "scimetrics/probe.hpp"
#include "scimetrics/simetrics.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace scimetrics {

enum class CutoffCriterion { F1, Youden };

/// Everything a pipeline run depends on. Defaults mirror the constants of the
/// method: 5-year windows, 0.7/0.2/0.1 splits, 20 bins, 50 PCA dimensions,
/// 24 clusters.
struct RunConfig {
    std::filesystem::path corpus;
    std::filesystem::path registry;
    /// Empty: <out>/embeddings.bin, produced by the synthetic embedder in `embed`/`report`.
    std::filesystem::path embeddings;
    std::filesystem::path out = "out";
    /// Optional per-paper probability files that replace the probe outputs.
    std::filesystem::path journal_probs;
    std::filesystem::path author_probs;
    /// Optional second classification (paper_id<TAB>label) for crosstabs.
    std::filesystem::path external_classes;

    YearRange years{};
    WindowSpec windows{};
    EdgePolicy edge_policy = EdgePolicy::Drop;
    CitationNormalization citations = CitationNormalization::YearMean;

    std::uint64_t seed = 7;  // split seed
    ProbeHyper probe{};
    double grid_step = 0.001;
    CutoffCriterion cutoff_criterion = CutoffCriterion::F1;
    /// "heldout" evaluates classifiers on validation+test entries, "all" on every labeled entry.
    std::string table_sample = "heldout";

    std::uint32_t embed_dim = 128;
    std::uint64_t embed_seed = 11;

    std::size_t bins = 20;
    int pca_dims = 50;
    int clusters = 24;
    TsneOptions tsne{};

    unsigned threads = 1;

    std::filesystem::path embeddings_path() const { return embeddings.empty() ? out / "embeddings.bin" : embeddings; }
};

/// Applies `key = value` lines ('#' starts a comment). Throws ConfigError on
/// unknown keys or malformed values.
void apply_config_text(RunConfig& config, std::string_view text, std::string_view origin = "config");
void apply_config_file(RunConfig& config, const std::filesystem::path& path);
void apply_config_value(RunConfig& config, std::string_view key, std::string_view value);

/// Checks invariants (window order, step range, ...). Throws ConfigError.
void validate(const RunConfig& config);

}  // namespace scimetrics

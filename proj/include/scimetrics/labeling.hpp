#pragma once

#include "scimetrics/corpus.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace scimetrics {

enum class LabelSource { JournalBased, AuthorBased };

std::string_view source_name(LabelSource s) noexcept;
LabelSource parse_source(std::string_view s);

struct LabeledEntry {
    std::string paper_id;
    int label = 0;  // 1 = health economics
    bool operator==(const LabeledEntry&) const = default;
};

struct ExcludedEntry {
    std::string paper_id;
    std::string reason;
    bool operator==(const ExcludedEntry&) const = default;
};

struct LabeledSet {
    LabelSource source = LabelSource::JournalBased;
    std::vector<LabeledEntry> entries;
    std::vector<ExcludedEntry> excluded;

    std::size_t size() const noexcept { return entries.size(); }
    std::size_t positives() const noexcept;
};

enum class AuthorLabel { Health, NonHealth, Unlabeled };

struct AuthorRecord {
    std::size_t health_field = 0;  // category-1 publications
    std::size_t other_field = 0;   // category-3 publications
    AuthorLabel label = AuthorLabel::Unlabeled;
};

/// Per-author field-journal counts and the resulting label. Authors that
/// publish only in general-interest journals are present as Unlabeled.
using AuthorLabelMap = std::map<std::string, AuthorRecord, std::less<>>;

/// Category-1 papers -> 1, category-3 papers -> 0, category-2 papers excluded.
LabeledSet label_journal_based(const Corpus& corpus);

/// Health iff the category-1 share of field-journal publications is strictly
/// above one half.
AuthorLabelMap classify_authors(const Corpus& corpus);

/// Labels category-2 papers whose authors are unanimously and fully labeled.
LabeledSet label_author_based(const Corpus& corpus, const AuthorLabelMap& authors);

struct DatasetSplit {
    LabeledSet train;
    LabeledSet validation;
    LabeledSet test;
};

/// Stratified, seed-deterministic 0.7/0.2/0.1 partition. Sizes are
/// floor(0.7n), floor(0.2n) and the remainder.
DatasetSplit split_dataset(const LabeledSet& set, std::uint64_t seed);

void save_labeled_set(const LabeledSet& set, const std::filesystem::path& path);
/// Writes excluded entries with their reasons.
void save_excluded(const LabeledSet& set, const std::filesystem::path& path);
LabeledSet load_labeled_set(const std::filesystem::path& path);
void save_author_labels(const AuthorLabelMap& authors, const std::filesystem::path& path);

}  // namespace scimetrics

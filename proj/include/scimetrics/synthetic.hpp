#pragma once

#include "scimetrics/corpus.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace scimetrics {

struct SyntheticCorpusOptions {
    std::size_t papers = 2000;
    int first_year = 1994;
    int last_year = 2023;
    std::uint64_t seed = 2024;
};

struct SyntheticCorpus {
    Corpus corpus;
    /// Latent topic of each paper (1 = health), the ground truth the labels approximate.
    std::map<std::string, int, std::less<>> planted_health;
};

/// Registry with the three journal categories; journals that are both
/// general-interest outlets and non-health field journals are listed under
/// both categories.
std::vector<Journal> synthetic_registry_records();

/// Corpus with two planted topic vocabularies (health / other economics),
/// drifting sub-topic mixtures over time, topic-consistent author pools and
/// heavy-tailed citation counts. Deterministic in the options.
SyntheticCorpus generate_synthetic_corpus(const SyntheticCorpusOptions& options = {});

}  // namespace scimetrics

#include "scimetrics/labeling.hpp"

#include "scimetrics/errors.hpp"
#include "scimetrics/util.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <tuple>

namespace scimetrics {

std::string_view source_name(LabelSource s) noexcept {
    return s == LabelSource::JournalBased ? "journal" : "author";
}

LabelSource parse_source(std::string_view s) {
    if (s == "journal") return LabelSource::JournalBased;
    if (s == "author") return LabelSource::AuthorBased;
    throw DataError(fmt::format("unknown label source '{}'", s));
}

std::size_t LabeledSet::positives() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [](const LabeledEntry& e) { return e.label == 1; }));
}

LabeledSet label_journal_based(const Corpus& corpus) {
    const auto& reg = corpus.registry();
    if (!reg.has_category(JournalCategory::HealthField) || !reg.has_category(JournalCategory::OtherField))
        throw DataError("journal-based labeling needs at least one category-1 and one category-3 journal");
    LabeledSet set;
    set.source = LabelSource::JournalBased;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const Paper& p = corpus.paper(i);
        switch (corpus.category_of(i)) {
            case JournalCategory::HealthField: set.entries.push_back({p.id, 1}); break;
            case JournalCategory::OtherField: set.entries.push_back({p.id, 0}); break;
            case JournalCategory::GeneralInterest: set.excluded.push_back({p.id, "general-interest"}); break;
        }
    }
    return set;
}

AuthorLabelMap classify_authors(const Corpus& corpus) {
    AuthorLabelMap authors;
    for (const auto& [author, papers] : corpus.author_index()) {
        AuthorRecord rec;
        for (std::size_t i : papers) {
            const auto c = corpus.category_of(i);
            if (c == JournalCategory::HealthField) ++rec.health_field;
            else if (c == JournalCategory::OtherField) ++rec.other_field;
        }
        const std::size_t denom = rec.health_field + rec.other_field;
        if (denom == 0) rec.label = AuthorLabel::Unlabeled;
        // share > 1/2 without floating point
        else if (2 * rec.health_field > denom) rec.label = AuthorLabel::Health;
        else rec.label = AuthorLabel::NonHealth;
        authors.emplace(author, rec);
    }
    return authors;
}

LabeledSet label_author_based(const Corpus& corpus, const AuthorLabelMap& authors) {
    LabeledSet set;
    set.source = LabelSource::AuthorBased;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (corpus.category_of(i) != JournalCategory::GeneralInterest) continue;
        const Paper& p = corpus.paper(i);
        std::size_t health = 0, non_health = 0, unlabeled = 0;
        for (const auto& a : p.author_ids) {
            auto it = authors.find(a);
            const AuthorLabel l = it == authors.end() ? AuthorLabel::Unlabeled : it->second.label;
            if (l == AuthorLabel::Health) ++health;
            else if (l == AuthorLabel::NonHealth) ++non_health;
            else ++unlabeled;
        }
        if (unlabeled == 0 && health > 0 && non_health == 0) set.entries.push_back({p.id, 1});
        else if (unlabeled == 0 && non_health > 0 && health == 0) set.entries.push_back({p.id, 0});
        else set.excluded.push_back({p.id, "mixed-or-unlabeled"});
    }
    return set;
}

DatasetSplit split_dataset(const LabeledSet& set, std::uint64_t seed) {
    const std::size_t n = set.entries.size();
    if (n < 10) throw DataError(fmt::format("labeled set of {} entries is too small to split", n));

    // Shuffle each label stratum independently, then order all entries by
    // their relative position inside the stratum. Cutting that order at
    // 70%/90% gives every split a proportional share of both labels.
    std::vector<std::size_t> strata[2];
    for (std::size_t i = 0; i < n; ++i) strata[set.entries[i].label == 1 ? 1 : 0].push_back(i);
    Rng rng(seed);
    rng.shuffle(strata[0]);
    rng.shuffle(strata[1]);

    struct Slot {
        std::size_t num, den;  // fractional position (2r+1)/(2m)
        int label;
        std::size_t entry;
    };
    std::vector<Slot> order;
    order.reserve(n);
    for (int label = 0; label < 2; ++label) {
        const std::size_t m = strata[label].size();
        for (std::size_t r = 0; r < m; ++r) order.push_back({2 * r + 1, 2 * m, label, strata[label][r]});
    }
    std::sort(order.begin(), order.end(), [](const Slot& a, const Slot& b) {
        const auto lhs = static_cast<unsigned __int128>(a.num) * b.den;
        const auto rhs = static_cast<unsigned __int128>(b.num) * a.den;
        if (lhs != rhs) return lhs < rhs;
        return a.label > b.label;
    });

    const std::size_t n_train = n * 7 / 10;
    const std::size_t n_val = n * 2 / 10;
    DatasetSplit out;
    out.train.source = out.validation.source = out.test.source = set.source;
    for (std::size_t k = 0; k < n; ++k) {
        const LabeledEntry& e = set.entries[order[k].entry];
        if (k < n_train) out.train.entries.push_back(e);
        else if (k < n_train + n_val) out.validation.entries.push_back(e);
        else out.test.entries.push_back(e);
    }
    return out;
}

void save_labeled_set(const LabeledSet& set, const std::filesystem::path& path) {
    std::string out = "paper_id\tlabel\tsource\n";
    for (const auto& e : set.entries) out += fmt::format("{}\t{}\t{}\n", e.paper_id, e.label, source_name(set.source));
    write_file(path, out);
}

void save_excluded(const LabeledSet& set, const std::filesystem::path& path) {
    std::string out = "paper_id\treason\n";
    for (const auto& e : set.excluded) out += fmt::format("{}\t{}\n", e.paper_id, e.reason);
    write_file(path, out);
}

LabeledSet load_labeled_set(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MissingArtifact(path.string());
    LabeledSet set;
    std::string line;
    std::size_t lineno = 0;
    bool have_source = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1 && line.rfind("paper_id", 0) == 0) continue;
        if (trim(line).empty()) continue;
        const auto fields = split(trim(line), '\t');
        if (fields.size() != 3 || (fields[1] != "0" && fields[1] != "1"))
            throw DataError(fmt::format("{} line {}: expected paper_id<TAB>label<TAB>source", path.string(), lineno));
        const LabelSource src = parse_source(fields[2]);
        if (have_source && src != set.source)
            throw DataError(fmt::format("{} line {}: mixed label sources", path.string(), lineno));
        set.source = src;
        have_source = true;
        set.entries.push_back({fields[0], fields[1] == "1" ? 1 : 0});
    }
    return set;
}

void save_author_labels(const AuthorLabelMap& authors, const std::filesystem::path& path) {
    std::string out = "author_id\thealth_field\tother_field\tlabel\n";
    for (const auto& [id, rec] : authors) {
        const char* l = rec.label == AuthorLabel::Health ? "Health"
                        : rec.label == AuthorLabel::NonHealth ? "NonHealth"
                                                               : "Unlabeled";
        out += fmt::format("{}\t{}\t{}\t{}\n", id, rec.health_field, rec.other_field, l);
    }
    write_file(path, out);
}

}  // namespace scimetrics

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scimetrics {

/// Journal taxonomy. Numeric values match the registry file encoding.
enum class JournalCategory : int {
    HealthField = 1,      // health economics field journals
    GeneralInterest = 2,  // prestigious journals whose remit includes health
    OtherField = 3,       // field journals of non-health fields
};

std::string_view category_name(JournalCategory c) noexcept;

struct Journal {
    std::string id;
    std::string name;
    JournalCategory category = JournalCategory::OtherField;
    /// Outlet group used for share-by-outlet series ("top5", "general", ...).
    /// Empty means "use the category name".
    std::string group;

    bool operator==(const Journal&) const = default;
};

/// Registry of journals keyed by id.
///
/// A journal listed under several categories is resolved by precedence
/// OtherField > HealthField > GeneralInterest, so that journals that are both
/// general-interest outlets and non-health field journals act as the
/// non-health labeling pole.
class JournalRegistry {
public:
    void add(Journal journal);
    const Journal* find(std::string_view id) const;
    const Journal& at(std::string_view id) const;
    const std::map<std::string, Journal, std::less<>>& journals() const noexcept { return journals_; }
    std::size_t size() const noexcept { return journals_.size(); }
    bool has_category(JournalCategory c) const;

private:
    std::map<std::string, Journal, std::less<>> journals_;
};

struct Paper {
    std::string id;
    std::string title;
    std::string abstract;
    std::string journal_id;
    std::vector<std::string> author_ids;
    int year = 0;
    std::int64_t citations = 0;

    /// Input text for embedding: title and abstract joined by a space.
    std::string text() const;

    bool operator==(const Paper&) const = default;
};

struct YearRange {
    int first = 1994;
    int last = 2023;
    bool contains(int y) const noexcept { return y >= first && y <= last; }
};

/// Immutable, validated publication corpus with year/journal/author indices.
/// Indices hold positions into papers().
class Corpus {
public:
    Corpus() = default;
    /// Validates every invariant; throws DataError naming the offending record.
    Corpus(std::vector<Paper> papers, JournalRegistry registry, YearRange range = {});

    const std::vector<Paper>& papers() const noexcept { return papers_; }
    const JournalRegistry& registry() const noexcept { return registry_; }
    std::size_t size() const noexcept { return papers_.size(); }
    bool empty() const noexcept { return papers_.empty(); }
    const Paper& paper(std::size_t i) const { return papers_.at(i); }

    std::optional<std::size_t> index_of(std::string_view id) const;
    const Journal& journal_of(std::size_t i) const { return registry_.at(papers_[i].journal_id); }
    JournalCategory category_of(std::size_t i) const { return journal_of(i).category; }

    std::span<const std::size_t> papers_in_year(int year) const;
    std::span<const std::size_t> papers_in_journal(std::string_view journal_id) const;
    std::span<const std::size_t> papers_by_author(std::string_view author_id) const;

    const std::map<int, std::vector<std::size_t>>& year_index() const noexcept { return by_year_; }
    const std::map<std::string, std::vector<std::size_t>, std::less<>>& journal_index() const noexcept { return by_journal_; }
    const std::map<std::string, std::vector<std::size_t>, std::less<>>& author_index() const noexcept { return by_author_; }

    /// Configured admissible year range.
    YearRange range() const noexcept { return range_; }
    /// Smallest and largest publication year present; requires a nonempty corpus.
    int min_year() const;
    int max_year() const;

private:
    std::vector<Paper> papers_;
    JournalRegistry registry_;
    YearRange range_;
    std::map<std::string, std::size_t, std::less<>> by_id_;
    std::map<int, std::vector<std::size_t>> by_year_;
    std::map<std::string, std::vector<std::size_t>, std::less<>> by_journal_;
    std::map<std::string, std::vector<std::size_t>, std::less<>> by_author_;
};

JournalRegistry load_registry(const std::filesystem::path& path);
void save_registry(const JournalRegistry& registry, const std::filesystem::path& path);

/// Reads a JSON-lines corpus and a JSON-lines registry.
Corpus load_corpus(const std::filesystem::path& path, const std::filesystem::path& registry_path,
                   YearRange range = {});
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

struct CorpusStats {
    std::size_t total = 0;
    std::map<JournalCategory, std::size_t> by_category;
    /// Every year between the first and last observed year, gaps included as zeros.
    std::map<int, std::map<JournalCategory, std::size_t>> by_year;
};

CorpusStats corpus_stats(const Corpus& corpus);
std::string format_corpus_stats(const CorpusStats& stats);

}  // namespace scimetrics

#include "scimetrics/corpus.hpp"

#include "scimetrics/errors.hpp"
#include "scimetrics/util.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace scimetrics {

using nlohmann::json;

std::string_view category_name(JournalCategory c) noexcept {
    switch (c) {
        case JournalCategory::HealthField: return "HealthField";
        case JournalCategory::GeneralInterest: return "GeneralInterest";
        case JournalCategory::OtherField: return "OtherField";
    }
    return "?";
}

namespace {

int precedence(JournalCategory c) {
    switch (c) {
        case JournalCategory::OtherField: return 3;
        case JournalCategory::HealthField: return 2;
        case JournalCategory::GeneralInterest: return 1;
    }
    return 0;
}

JournalCategory parse_category(const json& v, std::size_t line) {
    if (!v.is_number_integer()) throw DataError(fmt::format("registry line {}: category must be 1, 2 or 3", line));
    const int c = v.get<int>();
    if (c < 1 || c > 3) throw DataError(fmt::format("registry line {}: category {} not in {{1,2,3}}", line, c));
    return static_cast<JournalCategory>(c);
}

template <class T>
T required(const json& obj, const char* key, std::size_t line, const char* what) {
    auto it = obj.find(key);
    if (it == obj.end()) throw DataError(fmt::format("{} line {}: missing key '{}'", what, line, key));
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw DataError(fmt::format("{} line {}: key '{}' has the wrong type", what, line, key));
    }
}

}  // namespace

void JournalRegistry::add(Journal journal) {
    auto it = journals_.find(journal.id);
    if (it == journals_.end()) {
        journals_.emplace(journal.id, std::move(journal));
        return;
    }
    Journal& existing = it->second;
    if (precedence(journal.category) > precedence(existing.category)) existing.category = journal.category;
    if (existing.name.empty()) existing.name = journal.name;
    if (existing.group.empty()) existing.group = journal.group;
}

const Journal* JournalRegistry::find(std::string_view id) const {
    auto it = journals_.find(id);
    return it == journals_.end() ? nullptr : &it->second;
}

const Journal& JournalRegistry::at(std::string_view id) const {
    if (const Journal* j = find(id)) return *j;
    throw DataError(fmt::format("unknown journal '{}'", id));
}

bool JournalRegistry::has_category(JournalCategory c) const {
    return std::any_of(journals_.begin(), journals_.end(), [c](const auto& kv) { return kv.second.category == c; });
}

std::string Paper::text() const { return abstract.empty() ? title : title + " " + abstract; }

Corpus::Corpus(std::vector<Paper> papers, JournalRegistry registry, YearRange range)
    : papers_(std::move(papers)), registry_(std::move(registry)), range_(range) {
    for (std::size_t i = 0; i < papers_.size(); ++i) {
        const Paper& p = papers_[i];
        if (p.id.empty()) throw DataError(fmt::format("paper at position {} has an empty id", i));
        if (!by_id_.emplace(p.id, i).second) throw DataError(fmt::format("duplicate paper id '{}'", p.id));
        if (p.title.empty()) throw DataError(fmt::format("paper '{}' has an empty title", p.id));
        if (!registry_.find(p.journal_id))
            throw DataError(fmt::format("paper '{}' references unknown journal '{}'", p.id, p.journal_id));
        if (!range_.contains(p.year))
            throw DataError(fmt::format("paper '{}' has year {} outside {}-{}", p.id, p.year, range_.first, range_.last));
        if (p.citations < 0) throw DataError(fmt::format("paper '{}' has negative citations", p.id));
        std::set<std::string_view> seen;
        for (const auto& a : p.author_ids) {
            if (a.empty()) throw DataError(fmt::format("paper '{}' has an empty author id", p.id));
            if (!seen.insert(a).second) throw DataError(fmt::format("paper '{}' lists author '{}' twice", p.id, a));
            by_author_[a].push_back(i);
        }
        by_year_[p.year].push_back(i);
        by_journal_[p.journal_id].push_back(i);
    }
}

std::optional<std::size_t> Corpus::index_of(std::string_view id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

namespace {
template <class Map, class Key>
std::span<const std::size_t> lookup(const Map& m, const Key& k) {
    auto it = m.find(k);
    if (it == m.end()) return {};
    return it->second;
}
}  // namespace

std::span<const std::size_t> Corpus::papers_in_year(int year) const { return lookup(by_year_, year); }
std::span<const std::size_t> Corpus::papers_in_journal(std::string_view id) const { return lookup(by_journal_, id); }
std::span<const std::size_t> Corpus::papers_by_author(std::string_view id) const { return lookup(by_author_, id); }

int Corpus::min_year() const {
    if (by_year_.empty()) throw DataError("empty corpus has no year range");
    return by_year_.begin()->first;
}

int Corpus::max_year() const {
    if (by_year_.empty()) throw DataError("empty corpus has no year range");
    return by_year_.rbegin()->first;
}

JournalRegistry load_registry(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open registry " + path.string());
    JournalRegistry registry;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw DataError(fmt::format("registry line {}: malformed record ({})", lineno, e.what()));
        }
        if (!obj.is_object()) throw DataError(fmt::format("registry line {}: record is not an object", lineno));
        Journal j;
        j.id = required<std::string>(obj, "id", lineno, "registry");
        if (j.id.empty()) throw DataError(fmt::format("registry line {}: empty id", lineno));
        j.name = obj.value("name", j.id);
        j.category = parse_category(obj.contains("category") ? obj["category"] : json(), lineno);
        j.group = obj.value("group", std::string{});
        registry.add(std::move(j));
    }
    return registry;
}

void save_registry(const JournalRegistry& registry, const std::filesystem::path& path) {
    std::string out;
    for (const auto& [id, j] : registry.journals()) {
        json obj{{"id", j.id}, {"name", j.name}, {"category", static_cast<int>(j.category)}};
        if (!j.group.empty()) obj["group"] = j.group;
        out += obj.dump();
        out += '\n';
    }
    write_file(path, out);
}

Corpus load_corpus(const std::filesystem::path& path, const std::filesystem::path& registry_path, YearRange range) {
    JournalRegistry registry = load_registry(registry_path);
    std::ifstream in(path);
    if (!in) throw DataError("cannot open corpus " + path.string());
    std::vector<Paper> papers;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw DataError(fmt::format("corpus line {}: malformed record ({})", lineno, e.what()));
        }
        if (!obj.is_object()) throw DataError(fmt::format("corpus line {}: record is not an object", lineno));
        Paper p;
        p.id = required<std::string>(obj, "id", lineno, "corpus");
        p.title = required<std::string>(obj, "title", lineno, "corpus");
        p.abstract = obj.value("abstract", std::string{});
        p.journal_id = required<std::string>(obj, "journal", lineno, "corpus");
        p.author_ids = required<std::vector<std::string>>(obj, "authors", lineno, "corpus");
        p.year = required<int>(obj, "year", lineno, "corpus");
        p.citations = required<std::int64_t>(obj, "citations", lineno, "corpus");
        if (p.citations < 0) throw DataError(fmt::format("corpus line {}: negative citations", lineno));
        if (!registry.find(p.journal_id))
            throw DataError(fmt::format("corpus line {}: unknown journal '{}'", lineno, p.journal_id));
        papers.push_back(std::move(p));
    }
    return Corpus(std::move(papers), std::move(registry), range);
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
    std::string out;
    for (const Paper& p : corpus.papers()) {
        json obj{{"id", p.id},         {"title", p.title},     {"abstract", p.abstract}, {"journal", p.journal_id},
                 {"authors", p.author_ids}, {"year", p.year}, {"citations", p.citations}};
        out += obj.dump();
        out += '\n';
    }
    write_file(path, out);
}

CorpusStats corpus_stats(const Corpus& corpus) {
    CorpusStats stats;
    stats.total = corpus.size();
    constexpr JournalCategory all[] = {JournalCategory::HealthField, JournalCategory::GeneralInterest,
                                       JournalCategory::OtherField};
    for (auto c : all) stats.by_category[c] = 0;
    if (corpus.empty()) return stats;
    for (int y = corpus.min_year(); y <= corpus.max_year(); ++y)
        for (auto c : all) stats.by_year[y][c] = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto c = corpus.category_of(i);
        ++stats.by_category[c];
        ++stats.by_year[corpus.paper(i).year][c];
    }
    return stats;
}

std::string format_corpus_stats(const CorpusStats& stats) {
    std::string out = "year\tHealthField\tGeneralInterest\tOtherField\ttotal\n";
    for (const auto& [year, counts] : stats.by_year) {
        std::size_t row = 0;
        for (const auto& [c, n] : counts) row += n;
        out += fmt::format("{}\t{}\t{}\t{}\t{}\n", year, counts.at(JournalCategory::HealthField),
                           counts.at(JournalCategory::GeneralInterest), counts.at(JournalCategory::OtherField), row);
    }
    out += fmt::format("all\t{}\t{}\t{}\t{}\n", stats.by_category.at(JournalCategory::HealthField),
                       stats.by_category.at(JournalCategory::GeneralInterest),
                       stats.by_category.at(JournalCategory::OtherField), stats.total);
    return out;
}

}  // namespace scimetrics

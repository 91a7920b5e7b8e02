#include "support.hpp"

#include "scimetrics/errors.hpp"
#include "scimetrics/labeling.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace scimetrics;
using namespace testing;

namespace {

Corpus author_corpus() {
    // h1: 3 health, 1 other -> Health; n1: 1 and 1 -> NonHealth (tie); g1 only general-interest -> Unlabeled
    std::vector<Paper> papers = {
        make_paper("f1", "JHE", 2000, {"h1"}),
        make_paper("f2", "JHE", 2001, {"h1", "h2"}),
        make_paper("f3", "JHE", 2002, {"h1", "n1"}),
        make_paper("f4", "JEconometrics", 2003, {"h1", "n1", "n2"}),
        make_paper("g_health", "AER", 2004, {"h1", "h2"}),
        make_paper("g_other", "AER", 2004, {"n2"}),
        make_paper("g_mixed", "AER", 2004, {"h1", "n2"}),
        make_paper("g_unlabeled", "AER", 2005, {"h1", "g1"}),
        make_paper("g_tie", "AER", 2005, {"n1"}),
    };
    return Corpus(papers, three_journal_registry());
}

}  // namespace

TEST_CASE("journal-based labels follow the journal category") {
    const Corpus c = author_corpus();
    const LabeledSet s = label_journal_based(c);
    CHECK(s.size() == 4);
    CHECK(s.positives() == 3);
    for (const auto& e : s.entries) CHECK(e.label == (e.paper_id == "f4" ? 0 : 1));
    CHECK(s.excluded.size() == 5);
    for (const auto& e : s.excluded) CHECK(e.reason == "general-interest");
}

TEST_CASE("author classification uses a strict majority of field-journal papers") {
    const AuthorLabelMap a = classify_authors(author_corpus());
    CHECK(a.at("h1").health_field == 3);
    CHECK(a.at("h1").other_field == 1);
    CHECK(a.at("h1").label == AuthorLabel::Health);
    CHECK(a.at("n1").label == AuthorLabel::NonHealth);  // 1 of 2 is not more than half
    CHECK(a.at("n2").label == AuthorLabel::NonHealth);
    CHECK(a.at("g1").label == AuthorLabel::Unlabeled);
}

TEST_CASE("author-based labels need unanimous and fully labeled authors") {
    const Corpus c = author_corpus();
    const LabeledSet s = label_author_based(c, classify_authors(c));
    std::map<std::string, int> got;
    for (const auto& e : s.entries) got[e.paper_id] = e.label;
    CHECK(got == std::map<std::string, int>{{"g_health", 1}, {"g_other", 0}, {"g_tie", 0}});
    std::set<std::string> excluded;
    for (const auto& e : s.excluded) {
        excluded.insert(e.paper_id);
        CHECK(e.reason == "mixed-or-unlabeled");
    }
    CHECK(excluded == std::set<std::string>{"g_mixed", "g_unlabeled"});
}

TEST_CASE("labeling rules never cross journal categories") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Paper> papers;
        const char* journals[] = {"JHE", "AER", "JEconometrics"};
        for (int i = 0; i < 80; ++i) {
            std::vector<std::string> authors;
            for (std::size_t k = 0, m = 1 + rng.below(3); k < m; ++k) {
                std::string a = "a" + std::to_string(rng.below(15));
                if (std::find(authors.begin(), authors.end(), a) == authors.end()) authors.push_back(a);
            }
            papers.push_back(make_paper("p" + std::to_string(i), journals[rng.below(3)], 2000, authors));
        }
        const Corpus c(papers, three_journal_registry());
        for (const auto& e : label_journal_based(c).entries)
            CHECK(c.category_of(*c.index_of(e.paper_id)) != JournalCategory::GeneralInterest);
        const LabeledSet a = label_author_based(c, classify_authors(c));
        for (const auto& e : a.entries)
            CHECK(c.category_of(*c.index_of(e.paper_id)) == JournalCategory::GeneralInterest);

        // reordering the corpus leaves author labels unchanged
        std::vector<Paper> shuffled = papers;
        rng.shuffle(shuffled);
        const AuthorLabelMap x = classify_authors(c), y = classify_authors(Corpus(shuffled, three_journal_registry()));
        REQUIRE(x.size() == y.size());
        for (const auto& [id, rec] : x) {
            CHECK(y.at(id).label == rec.label);
            CHECK(y.at(id).health_field == rec.health_field);
        }
    }
}

namespace {

LabeledSet make_set(std::size_t n, std::size_t positives) {
    LabeledSet s;
    for (std::size_t i = 0; i < n; ++i) s.entries.push_back({"e" + std::to_string(i), i < positives ? 1 : 0});
    return s;
}

}  // namespace

TEST_CASE("split sizes are floor(0.7n), floor(0.2n) and the remainder") {
    const DatasetSplit a = split_dataset(make_set(100, 30), 7);
    CHECK(a.train.size() == 70);
    CHECK(a.validation.size() == 20);
    CHECK(a.test.size() == 10);
    const DatasetSplit b = split_dataset(make_set(101, 30), 7);
    CHECK(b.train.size() == 70);
    CHECK(b.validation.size() == 20);
    CHECK(b.test.size() == 11);
    const DatasetSplit c = split_dataset(make_set(100, 30), 7);
    CHECK(c.train.entries == a.train.entries);
    CHECK(c.test.entries == a.test.entries);
    CHECK_THROWS_WITH_AS(split_dataset(make_set(9, 4), 1), doctest::Contains("too small to split"), DataError);
}

TEST_CASE("property: splits partition the set and are stratified") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 10 + rng.below(300);
        const std::size_t pos = rng.below(n + 1);
        const LabeledSet s = make_set(n, pos);
        const DatasetSplit d = split_dataset(s, rng.next());
        CHECK(d.train.size() == n * 7 / 10);
        CHECK(d.validation.size() == n * 2 / 10);
        CHECK(d.train.size() + d.validation.size() + d.test.size() == n);
        std::set<std::string> seen;
        for (const auto* part : {&d.train, &d.validation, &d.test})
            for (const auto& e : part->entries) CHECK(seen.insert(e.paper_id).second);
        CHECK(seen.size() == n);
        if (pos >= 10 && n - pos >= 10) {
            for (const auto* part : {&d.train, &d.validation, &d.test}) {
                CHECK(part->positives() > 0);
                CHECK(part->positives() < part->size());
            }
        }
    }
}

TEST_CASE("labeled set files round trip") {
    TempDir dir("labels");
    LabeledSet s = make_set(12, 5);
    s.source = LabelSource::AuthorBased;
    save_labeled_set(s, dir.path / "s.tsv");
    const LabeledSet back = load_labeled_set(dir.path / "s.tsv");
    CHECK(back.entries == s.entries);
    CHECK(back.source == LabelSource::AuthorBased);
    CHECK_THROWS_AS(load_labeled_set(dir.path / "missing.tsv"), MissingArtifact);
}

#include "support.hpp"

#include "scimetrics/errors.hpp"
#include "scimetrics/simetrics.hpp"

#include <doctest.h>

#include <cmath>

using namespace scimetrics;
using namespace testing;

TEST_CASE("score arithmetic") {
    CHECK(*quality(0.6, 0.4) == doctest::Approx(0.2));
    CHECK(*novelty(0.5, 0.4) == doctest::Approx(0.1));
    CHECK(*impact(0.6, 0.5) == doctest::Approx(0.1));
    CHECK_FALSE(quality(std::nullopt, 0.4));
    CHECK_FALSE(novelty(0.5, std::nullopt));
    CHECK_FALSE(impact(std::nullopt, std::nullopt));
}

TEST_CASE("identical embeddings give unit similarities and zero scores") {
    std::vector<Paper> papers;
    for (int y = 2000; y < 2012; ++y)
        for (int k = 0; k < 3; ++k) papers.push_back(make_paper(std::to_string(y) + "_" + std::to_string(k), "JHE", y));
    const Corpus corpus(papers, three_journal_registry());
    EmbeddingMatrix emb(4);
    const double v[] = {0.3, -1.0, 2.0, 0.5};
    for (const auto& p : corpus.papers()) emb.set(p.id, std::span<const double>(v));
    const PaperScores s = compute_scores(corpus, emb);
    std::size_t complete = 0;
    for (const auto& r : s) {
        if (!(r.q && r.n && r.i)) continue;
        ++complete;
        CHECK(*r.bs == doctest::Approx(1.0));
        CHECK(*r.fs == doctest::Approx(1.0));
        CHECK(*r.ps == doctest::Approx(1.0));
        CHECK(std::abs(*r.q) < 1e-12);
        CHECK(std::abs(*r.n) < 1e-12);
        CHECK(std::abs(*r.i) < 1e-12);
    }
    CHECK(complete == 6);  // 2005..2006 have full five-year windows on both sides
}

TEST_CASE("hand-computed three-year corpus") {
    std::vector<Paper> papers = {make_paper("a", "JHE", 2000), make_paper("b", "JHE", 2001),
                                 make_paper("c", "JHE", 2001), make_paper("d", "JHE", 2002)};
    const Corpus corpus(papers, three_journal_registry());
    EmbeddingMatrix emb(2);
    const double va[] = {1, 0}, vb[] = {1, 1}, vc[] = {0, 1}, vd[] = {-1, 1};
    emb.set("a", std::span<const double>(va));
    emb.set("b", std::span<const double>(vb));
    emb.set("c", std::span<const double>(vc));
    emb.set("d", std::span<const double>(vd));
    const SimilarityScorer s(corpus, emb, {-1, -1, 1, 1}, EdgePolicy::Drop);
    // b: backward mean a=(1,0) -> cos 1/sqrt2; forward d -> cos 0; same year c -> cos 1/sqrt2
    const ScoreRow r = s.score(*corpus.index_of("b"));
    CHECK(*r.bs == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(*r.fs == doctest::Approx(0.0));
    CHECK(*r.ps == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(*r.q == doctest::Approx(-1 / std::sqrt(2.0)));
    CHECK(*r.n == doctest::Approx(0.0));
    // final-year paper has no forward window; first-year paper has no backward window
    CHECK_FALSE(s.forward_similarity("d"));
    CHECK_FALSE(s.backward_similarity("a"));
    CHECK_FALSE(s.contemporaneous_similarity("a"));
}

TEST_CASE("edge policy: drop versus shorten") {
    Rng rng(8);
    const auto rc = random_corpus(rng, 80, 4, 10);
    const SimilarityScorer drop(rc.corpus, rc.emb, {}, EdgePolicy::Drop);
    const SimilarityScorer shorten(rc.corpus, rc.emb, {}, EdgePolicy::Shorten);
    for (std::size_t i = 0; i < rc.corpus.size(); ++i) {
        const int y = rc.corpus.paper(i).year;
        const bool full_back = y - 5 >= rc.corpus.min_year();
        const bool full_fwd = y + 5 <= rc.corpus.max_year();
        if (!full_back) CHECK_FALSE(drop.backward_similarity(i));
        if (!full_fwd) CHECK_FALSE(drop.forward_similarity(i));
        if (y > rc.corpus.min_year()) CHECK(shorten.backward_similarity(i).has_value());
        if (full_back) CHECK(drop.backward_similarity(i) == shorten.backward_similarity(i));
    }
    CHECK(parse_edge_policy("shorten") == EdgePolicy::Shorten);
    CHECK(edge_policy_name(EdgePolicy::Drop) == "drop");
    CHECK_THROWS(parse_edge_policy("trim"));
}

TEST_CASE("property: Q equals N plus I and similarities stay in [-1, 1]") {
    Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const auto rc = random_corpus(rng, 50 + rng.below(100), 2 + static_cast<std::uint32_t>(rng.below(10)),
                                      11 + static_cast<int>(rng.below(5)));
        for (const auto& r : compute_scores(rc.corpus, rc.emb, {}, EdgePolicy::Shorten)) {
            for (const Score& x : {r.bs, r.fs, r.ps})
                if (x) CHECK(std::abs(*x) <= 1.0);
            CHECK(r.q.has_value() == (r.bs && r.fs));
            if (r.q && r.n && r.i) CHECK(std::abs(*r.q - (*r.n + *r.i)) < 1e-12);
        }
    }
}

TEST_CASE("property: scores do not depend on corpus order or thread count") {
    Rng rng(10);
    const auto rc = random_corpus(rng, 120, 5, 12);
    std::vector<Paper> shuffled = rc.corpus.papers();
    rng.shuffle(shuffled);
    const Corpus other(shuffled, rc.corpus.registry(), rc.corpus.range());
    const PaperScores a = compute_scores(rc.corpus, rc.emb);
    const PaperScores b = compute_scores(other, rc.emb);
    std::map<std::string, const ScoreRow*> by_id;
    for (const auto& r : b) by_id[r.paper_id] = &r;
    for (const auto& r : a) {
        const ScoreRow& o = *by_id.at(r.paper_id);
        for (auto [x, y] : {std::pair{r.bs, o.bs}, std::pair{r.fs, o.fs}, std::pair{r.ps, o.ps}}) {
            REQUIRE(x.has_value() == y.has_value());
            if (x) CHECK(std::abs(*x - *y) < 1e-12);
        }
    }
    set_worker_threads(4);
    const PaperScores c = compute_scores(rc.corpus, rc.emb);
    set_worker_threads(1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].bs == c[i].bs);
        CHECK(a[i].q == c[i].q);
    }
}

TEST_CASE("standardize examples") {
    const std::vector<double> z = standardize(std::vector<double>{1, 2, 3});
    CHECK(z[0] == doctest::Approx(-1.0));
    CHECK(z[1] == doctest::Approx(0.0));
    CHECK(z[2] == doctest::Approx(1.0));
    CHECK_THROWS_AS(standardize(std::vector<double>{4, 4, 4}), DataError);
    const std::vector<Score> with_missing = {1.0, std::nullopt, 3.0};
    const auto zs = standardize(with_missing);
    CHECK_FALSE(zs[1]);
    CHECK(*zs[0] == doctest::Approx(-1 / std::sqrt(2.0)));

    Rng rng(12);
    std::vector<double> v(200);
    for (auto& x : v) x = 3 * rng.normal() + 7;
    const auto once = standardize(v);
    const auto twice = standardize(once);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(once[i] - twice[i]) < 1e-12);
}

TEST_CASE("decomposition in quality SD units") {
    PaperScores s(2);
    s[0] = {"x", 2000, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    s[1] = {"y", 2000, 0.0, 2.0, 1.0, 2.0, 1.0, 1.0};
    const QualityDecomposition d = decompose_in_quality_sd(s);
    CHECK(d.quality_sd == doctest::Approx(std::sqrt(2.0)));
    CHECK(*d.novelty_scaled[0] == 0.0);
    CHECK(*d.novelty_scaled[1] == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(*d.impact_scaled[1] == doctest::Approx(1 / std::sqrt(2.0)));
}

TEST_CASE("score files keep Missing as empty fields") {
    TempDir dir("scores");
    PaperScores s(2);
    s[0] = {"a", 2000, std::nullopt, 0.5, 0.25, std::nullopt, std::nullopt, 0.25};
    s[1] = {"b", 2001, 0.1, 0.3, 0.2, 0.3 - 0.1, 0.2 - 0.1, 0.3 - 0.2};
    save_scores(s, dir.path / "s.tsv");
    CHECK(read_file(dir.path / "s.tsv").find("a\t2000\t\t0.5\t0.25\t\t\t0.25\n") != std::string::npos);
    const PaperScores back = load_scores(dir.path / "s.tsv");
    REQUIRE(back.size() == 2);
    CHECK_FALSE(back[0].bs);
    CHECK(back[1].q == s[1].q);
    CHECK(back[1].year == 2001);
}

// Shared fixtures and reference implementations for the test binaries.
#pragma once

#include "scimetrics/corpus.hpp"
#include "scimetrics/embed_store.hpp"
#include "scimetrics/util.hpp"

#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <unistd.h>

namespace testing {

using namespace scimetrics;

inline JournalRegistry three_journal_registry() {
    JournalRegistry reg;
    reg.add({"JHE", "Journal of Health Economics", JournalCategory::HealthField, "field"});
    reg.add({"AER", "American Economic Review", JournalCategory::GeneralInterest, "top5"});
    reg.add({"JEconometrics", "Journal of Econometrics", JournalCategory::OtherField, "field"});
    return reg;
}

inline Paper make_paper(std::string id, std::string journal, int year, std::vector<std::string> authors = {},
                        std::int64_t citations = 0) {
    Paper p;
    p.id = std::move(id);
    p.title = "title of " + p.id;
    p.abstract = "abstract";
    p.journal_id = std::move(journal);
    p.author_ids = std::move(authors);
    p.year = year;
    p.citations = citations;
    return p;
}

/// Random corpus with `years` consecutive years starting at 2000 and one
/// random unit-free vector per paper.
struct RandomCorpus {
    Corpus corpus;
    EmbeddingMatrix emb;
};

inline RandomCorpus random_corpus(Rng& rng, std::size_t n, std::uint32_t dim, int years, int first_year = 2000) {
    std::vector<Paper> papers;
    const char* journals[] = {"JHE", "AER", "JEconometrics"};
    for (std::size_t i = 0; i < n; ++i) {
        const int year = first_year + static_cast<int>(rng.below(static_cast<std::size_t>(years)));
        papers.push_back(make_paper("q" + std::to_string(i), journals[rng.below(3)], year, {},
                                    static_cast<std::int64_t>(rng.below(50))));
    }
    RandomCorpus rc{Corpus(std::move(papers), three_journal_registry(), {first_year - 100, first_year + 100}),
                    EmbeddingMatrix(dim)};
    for (const Paper& p : rc.corpus.papers()) {
        std::vector<double> v(dim);
        for (auto& x : v) x = rng.normal();
        v[0] += 0.5;  // keeps the window means away from zero
        rc.emb.set(p.id, std::span<const double>(v));
    }
    return rc;
}

/// Window mean by explicit enumeration of every paper (no per-year sums).
inline std::optional<std::vector<double>> brute_window_mean(const Corpus& corpus, const EmbeddingMatrix& emb,
                                                            std::size_t i, int a, int b) {
    const int t = corpus.paper(i).year;
    std::vector<double> sum(emb.dim(), 0.0);
    std::size_t count = 0;
    for (std::size_t j = 0; j < corpus.size(); ++j) {
        if (j == i) continue;
        const int d = corpus.paper(j).year - t;
        if (d < a || d > b) continue;
        const auto v = emb.at(corpus.paper(j).id);
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += v[k];
        ++count;
    }
    if (count == 0) return std::nullopt;
    for (auto& x : sum) x /= static_cast<double>(count);
    return sum;
}

/// Cosine written out term by term.
inline double brute_cosine(std::span<const float> v, const std::vector<double>& w) {
    double dot = 0, nv = 0, nw = 0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        dot += v[k] * w[k];
        nv += static_cast<double>(v[k]) * v[k];
        nw += w[k] * w[k];
    }
    return dot / std::sqrt(nv * nw);
}

/// Solves A x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> gauss_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t c = n; c-- > 0;) {
        double s = b[c];
        for (std::size_t k = c + 1; k < n; ++k) s -= a[c][k] * x[k];
        x[c] = s / a[c][c];
    }
    return x;
}

/// OLS through the normal equations X'X b = X'y; rows of `x` are observations.
inline std::vector<double> normal_equations(const std::vector<std::vector<double>>& x, const std::vector<double>& y) {
    const std::size_t k = x.front().size();
    std::vector<std::vector<double>> xtx(k, std::vector<double>(k, 0.0));
    std::vector<double> xty(k, 0.0);
    for (std::size_t r = 0; r < x.size(); ++r)
        for (std::size_t i = 0; i < k; ++i) {
            xty[i] += x[r][i] * y[r];
            for (std::size_t j = 0; j < k; ++j) xtx[i][j] += x[r][i] * x[r][j];
        }
    return gauss_solve(xtx, xty);
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("scimetrics_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

}  // namespace testing

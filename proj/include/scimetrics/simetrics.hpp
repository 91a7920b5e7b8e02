#pragma once

#include "scimetrics/corpus.hpp"
#include "scimetrics/embed_store.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace scimetrics {

using Score = std::optional<double>;

/// Year offsets of the backward, contemporaneous and forward windows.
struct WindowSpec {
    int backward_from = -5, backward_to = -1;
    int forward_from = 1, forward_to = 5;
};

/// How to treat papers whose backward/forward window extends past the
/// corpus's first or last year.
enum class EdgePolicy {
    Drop,     // Missing unless the whole window lies inside the observed years
    Shorten,  // use whatever part of the window is observed
};

EdgePolicy parse_edge_policy(std::string_view s);
std::string_view edge_policy_name(EdgePolicy p) noexcept;

struct ScoreRow {
    std::string paper_id;
    int year = 0;
    Score bs, fs, ps;
    Score q, n, i;
};

using PaperScores = std::vector<ScoreRow>;

Score quality(Score fs, Score bs);      // FS - BS
Score novelty(Score ps, Score bs);      // PS - BS
Score impact(Score fs, Score ps);       // FS - PS

/// Backward/forward/contemporaneous similarity for papers of one corpus.
/// Per-year embedding sums are built once at construction.
class SimilarityScorer {
public:
    SimilarityScorer(const Corpus& corpus, const EmbeddingMatrix& emb, WindowSpec windows = {},
                     EdgePolicy policy = EdgePolicy::Drop);

    Score backward_similarity(std::size_t i) const;
    Score forward_similarity(std::size_t i) const;
    Score contemporaneous_similarity(std::size_t i) const;
    ScoreRow score(std::size_t i) const;

    Score backward_similarity(std::string_view paper_id) const { return backward_similarity(position(paper_id)); }
    Score forward_similarity(std::string_view paper_id) const { return forward_similarity(position(paper_id)); }
    Score contemporaneous_similarity(std::string_view paper_id) const {
        return contemporaneous_similarity(position(paper_id));
    }

private:
    std::size_t position(std::string_view paper_id) const;
    Score similarity(std::size_t i, int a, int b) const;

    const Corpus* corpus_;
    const EmbeddingMatrix* emb_;
    YearSums sums_;
    WindowSpec windows_;
    EdgePolicy policy_;
    int first_year_ = 0, last_year_ = 0;
};

/// Scores every paper in corpus order; parallel over papers.
PaperScores compute_scores(const Corpus& corpus, const EmbeddingMatrix& emb, WindowSpec windows = {},
                           EdgePolicy policy = EdgePolicy::Drop);

/// Mean 0, sample standard deviation 1 over the present values; Missing stays
/// Missing. Throws DataError with fewer than two values or zero variance.
std::vector<Score> standardize(std::span<const Score> values);
std::vector<double> standardize(std::span<const double> values);

struct QualityDecomposition {
    double quality_sd = 0.0;
    /// Per paper in input order; present only where Q, N and I all are.
    std::vector<Score> novelty_scaled, impact_scaled, quality_scaled;
};

/// Divides N, I and Q by the sample SD of Q over complete papers, so that any
/// subset mean of Q/sd(Q) equals the mean of scaled N plus the mean of scaled I.
QualityDecomposition decompose_in_quality_sd(const PaperScores& scores);

void save_scores(const PaperScores& scores, const std::filesystem::path& path);
PaperScores load_scores(const std::filesystem::path& path);

}  // namespace scimetrics

#pragma once

#include "scimetrics/corpus.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scimetrics {

/// Per-paper embedding vectors of a fixed dimension, stored as 32-bit floats.
/// Every stored vector is finite and has nonzero norm.
class EmbeddingMatrix {
public:
    explicit EmbeddingMatrix(std::uint32_t dim = 0) : dim_(dim) {}

    std::uint32_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return ids_.size(); }
    bool empty() const noexcept { return ids_.empty(); }

    /// Inserts or replaces. Throws DataError on length mismatch, non-finite
    /// component or zero vector.
    void set(std::string id, std::span<const float> v);
    void set(std::string id, std::span<const double> v);

    bool contains(std::string_view id) const { return row_.find(id) != row_.end(); }
    /// Throws DataError for an unknown id.
    std::span<const float> at(std::string_view id) const;
    std::optional<std::span<const float>> find(std::string_view id) const;

    const std::vector<std::string>& ids() const noexcept { return ids_; }
    std::span<const float> row(std::size_t r) const { return {data_.data() + r * dim_, dim_}; }

    bool operator==(const EmbeddingMatrix& o) const;

private:
    std::uint32_t dim_;
    std::vector<std::string> ids_;
    std::vector<float> data_;
    std::map<std::string, std::size_t, std::less<>> row_;
};

/// sim(v, w) = v.w / (|v| |w|), accumulated in double.
/// Throws DataError on dimension mismatch or a zero-norm argument.
double cosine_similarity(std::span<const double> v, std::span<const double> w);
double cosine_similarity(std::span<const float> v, std::span<const double> w);
double cosine_similarity(std::span<const float> v, std::span<const float> w);

/// Mean embedding of papers j != i with a <= year(j) - year(i) <= b.
/// Papers without an embedding are not part of any window.
/// Returns nullopt for an empty window.
std::optional<std::vector<double>> window_mean(const Corpus& corpus, const EmbeddingMatrix& emb,
                                               std::string_view paper_id, int a, int b);

/// Per-year sums and counts of embedded papers; answers window means in
/// O(window years * dim) instead of enumerating papers.
class YearSums {
public:
    YearSums(const Corpus& corpus, const EmbeddingMatrix& emb);

    /// Same contract as window_mean for the paper at corpus position i.
    std::optional<std::vector<double>> window_mean(std::size_t i, int a, int b) const;

private:
    const Corpus* corpus_;
    const EmbeddingMatrix* emb_;
    std::uint32_t dim_;
    std::map<int, std::vector<double>> sum_;
    std::map<int, std::size_t> count_;
};

/// Deterministic bag-of-tokens embedding: each lower-cased alphanumeric token
/// is hashed to a pseudo-random Gaussian direction, the directions are summed
/// and the sum normalized to unit length. Throws DataError for text without
/// tokens or dim < 2.
std::vector<double> synthetic_embed(std::string_view text, std::uint32_t dim, std::uint64_t seed);

std::vector<std::string> tokenize(std::string_view text);

/// Embeds every paper of the corpus with synthetic_embed on title + abstract.
EmbeddingMatrix embed_corpus_synthetic(const Corpus& corpus, std::uint32_t dim, std::uint64_t seed);

struct EmbeddingLoadOptions {
    /// If set, the header dimension must equal this.
    std::optional<std::uint32_t> expected_dim;
    /// If set, ids absent from the corpus are skipped with a warning.
    const Corpus* corpus = nullptr;
};

/// Binary format: "EMB1", u32 dim, then records (u16 id length, id bytes,
/// dim f32). All integers and floats little-endian.
EmbeddingMatrix load_embeddings(const std::filesystem::path& path, const EmbeddingLoadOptions& options = {});
void save_embeddings(const EmbeddingMatrix& emb, const std::filesystem::path& path);

/// Warnings emitted by the most recent load_embeddings call on this thread.
std::size_t last_embedding_load_warnings() noexcept;

}  // namespace scimetrics

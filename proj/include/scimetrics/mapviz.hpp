#pragma once

#include "scimetrics/embed_store.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace scimetrics {

using Point2 = std::array<double, 2>;

struct PcaResult {
    Eigen::VectorXd mean;          // d
    Eigen::MatrixXd components;    // k x d, orthonormal rows
    Eigen::MatrixXd scores;        // n x k
    std::vector<double> explained_variance;  // eigenvalues, non-increasing
    std::vector<double> explained_share;     // eigenvalue / total variance
};

/// Rows of `data` are observations. Projects the centred data onto the top-k
/// eigenvectors of the sample covariance. Component signs are fixed so that
/// the largest-magnitude loading is positive.
PcaResult pca(const Eigen::MatrixXd& data, int k);

/// Stacks embeddings in the order of `ids` (double precision).
Eigen::MatrixXd stack_embeddings(const EmbeddingMatrix& emb, const std::vector<std::string>& ids);

struct TsneOptions {
    double perplexity = 30.0;
    int iterations = 1000;
    std::uint64_t seed = 42;
    double early_exaggeration = 12.0;
    int exaggeration_iterations = 250;
    /// Defaults to n / 12.
    std::optional<double> learning_rate;
    int kl_every = 50;
};

struct TsneResult {
    std::vector<Point2> coords;
    std::vector<std::pair<int, double>> kl_trace;  // (iteration, KL); first entry is the initialization
    double initial_kl = 0.0;
    double final_kl = 0.0;
    /// max over points of |perplexity(P_i) - target| after calibration
    double perplexity_error = 0.0;
};

/// Row-conditional Gaussian affinities calibrated to `perplexity` by bisection
/// on the precision. Returns the n x n matrix P(j|i) (zero diagonal).
Eigen::MatrixXd conditional_affinities(const Eigen::MatrixXd& points, double perplexity,
                                       double* max_perplexity_error = nullptr);

/// Exact t-SNE (no tree or grid approximation) into two dimensions.
/// Throws DataError when n < 10 or perplexity >= (n - 1) / 3.
TsneResult tsne(const Eigen::MatrixXd& points, const TsneOptions& options = {});

/// Ward-linkage agglomerative clustering cut at k clusters. Labels are
/// 0..k-1, numbered by each cluster's lowest member index.
std::vector<int> ward_cluster(const Eigen::MatrixXd& points, int k);
std::vector<int> ward_cluster(const std::vector<Point2>& points, int k);

struct ClusterSummary {
    int label = 0;
    std::string modal_journal;
    std::vector<std::pair<std::string, std::size_t>> top_journals;  // up to five, by count
    std::size_t size = 0;
};

struct MergedClusters {
    std::vector<int> labels;
    std::vector<ClusterSummary> clusters;
};

/// Unions clusters whose most common journal coincides (ties toward the
/// smaller journal id) and relabels the result 0..m-1 by lowest original label.
MergedClusters merge_by_top_journal(const std::vector<int>& labels, const std::vector<std::string>& journals);

}  // namespace scimetrics

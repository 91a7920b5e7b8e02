#include "scimetrics/errors.hpp"
#include "scimetrics/mapviz.hpp"

#include <fmt/format.h>

namespace scimetrics {

PcaResult pca(const Eigen::MatrixXd& data, int k) {
    const Eigen::Index n = data.rows(), d = data.cols();
    if (n < 2) throw DataError("pca needs at least two observations");
    if (k < 1 || k > std::min<Eigen::Index>(n - 1, d))
        throw DataError(fmt::format("pca: k={} must lie in [1, min(n-1, d)] = [1, {}]", k, std::min<Eigen::Index>(n - 1, d)));

    PcaResult r;
    r.mean = data.colwise().mean().transpose();
    const Eigen::MatrixXd centred = data.rowwise() - r.mean.transpose();
    const Eigen::MatrixXd cov = (centred.transpose() * centred) / static_cast<double>(n - 1);
    const double total = cov.trace();
    if (!(total > 0.0)) throw DataError("pca of degenerate data: all observations are equal");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) throw DataError("pca: eigendecomposition failed");
    // eigenvalues come back ascending
    r.components.resize(k, d);
    for (int c = 0; c < k; ++c) {
        const Eigen::Index col = d - 1 - c;
        Eigen::VectorXd v = eig.eigenvectors().col(col);
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v[arg] < 0) v = -v;
        r.components.row(c) = v.transpose();
        const double lambda = std::max(0.0, eig.eigenvalues()[col]);
        r.explained_variance.push_back(lambda);
        r.explained_share.push_back(lambda / total);
    }
    r.scores = centred * r.components.transpose();
    return r;
}

Eigen::MatrixXd stack_embeddings(const EmbeddingMatrix& emb, const std::vector<std::string>& ids) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(ids.size()), emb.dim());
    for (std::size_t r = 0; r < ids.size(); ++r) {
        const auto v = emb.at(ids[r]);
        for (std::uint32_t c = 0; c < emb.dim(); ++c) m(static_cast<Eigen::Index>(r), c) = v[c];
    }
    return m;
}

}  // namespace scimetrics

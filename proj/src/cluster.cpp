#include "scimetrics/errors.hpp"
#include "scimetrics/mapviz.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

namespace scimetrics {

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

struct Merge {
    std::size_t a, b;
    double height;
};

// Nearest-neighbour chain on a Lance-Williams updated squared-distance matrix.
// Ward linkage is reducible, so sorting the chain's merges by height yields
// the same hierarchy as the greedy closest-pair algorithm.
std::vector<Merge> ward_merges(const Eigen::MatrixXd& x) {
    const std::size_t n = static_cast<std::size_t>(x.rows());
    std::vector<double> d(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            d[i * n + j] = (x.row(static_cast<Eigen::Index>(i)) - x.row(static_cast<Eigen::Index>(j))).squaredNorm();
    std::vector<std::size_t> size(n, 1);
    std::vector<bool> active(n, true);
    std::vector<std::size_t> chain;
    std::vector<Merge> merges;
    merges.reserve(n ? n - 1 : 0);

    std::size_t remaining = n;
    while (remaining > 1) {
        if (chain.empty()) {
            for (std::size_t i = 0; i < n; ++i)
                if (active[i]) {
                    chain.push_back(i);
                    break;
                }
        }
        while (true) {
            const std::size_t a = chain.back();
            const std::size_t prev = chain.size() >= 2 ? chain[chain.size() - 2] : n;
            // nearest active neighbour; the chain predecessor wins ties
            std::size_t best = prev;
            double best_d = prev < n ? d[a * n + prev] : std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < n; ++j) {
                if (!active[j] || j == a) continue;
                if (d[a * n + j] < best_d) {
                    best_d = d[a * n + j];
                    best = j;
                }
            }
            if (best == prev) break;
            chain.push_back(best);
        }
        const std::size_t b = chain.back();
        chain.pop_back();
        const std::size_t a = chain.back();
        chain.pop_back();
        const std::size_t keep = std::min(a, b), drop = std::max(a, b);
        merges.push_back({keep, drop, d[a * n + b]});

        const double na = static_cast<double>(size[keep]), nb = static_cast<double>(size[drop]);
        const double dab = d[a * n + b];
        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == keep || k == drop) continue;
            const double nk = static_cast<double>(size[k]);
            const double v = ((na + nk) * d[keep * n + k] + (nb + nk) * d[drop * n + k] - nk * dab) / (na + nb + nk);
            d[keep * n + k] = d[k * n + keep] = v;
        }
        active[drop] = false;
        size[keep] += size[drop];
        --remaining;
    }
    return merges;
}

std::vector<int> cut(std::size_t n, std::vector<Merge> merges, int k) {
    std::stable_sort(merges.begin(), merges.end(), [](const Merge& l, const Merge& r) { return l.height < r.height; });
    UnionFind uf(n);
    for (std::size_t m = 0; m + static_cast<std::size_t>(k) < n; ++m) uf.unite(merges[m].a, merges[m].b);
    std::map<std::size_t, int> label_of_root;
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto root = uf.find(i);
        auto it = label_of_root.emplace(root, static_cast<int>(label_of_root.size())).first;
        labels[i] = it->second;
    }
    return labels;
}

}  // namespace

std::vector<int> ward_cluster(const Eigen::MatrixXd& points, int k) {
    const auto n = static_cast<std::size_t>(points.rows());
    if (k < 1) throw DataError("cluster count must be positive");
    if (n < static_cast<std::size_t>(k)) throw DataError(fmt::format("cannot form {} clusters from {} points", k, n));
    return cut(n, ward_merges(points), k);
}

std::vector<int> ward_cluster(const std::vector<Point2>& points, int k) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(points.size()), 2);
    for (std::size_t i = 0; i < points.size(); ++i) {
        m(static_cast<Eigen::Index>(i), 0) = points[i][0];
        m(static_cast<Eigen::Index>(i), 1) = points[i][1];
    }
    return ward_cluster(m, k);
}

namespace {

std::vector<std::pair<std::string, std::size_t>> journal_ranking(const std::map<std::string, std::size_t>& counts) {
    std::vector<std::pair<std::string, std::size_t>> v(counts.begin(), counts.end());
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    return v;
}

}  // namespace

MergedClusters merge_by_top_journal(const std::vector<int>& labels, const std::vector<std::string>& journals) {
    if (labels.size() != journals.size()) throw DataError("labels and journals differ in length");
    std::map<int, std::map<std::string, std::size_t>> counts;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (journals[i].empty()) throw DataError(fmt::format("point {} has no journal", i));
        ++counts[labels[i]][journals[i]];
    }
    // modal journal -> lowest original label carrying it
    std::map<std::string, int> owner;
    std::map<int, int> root;
    for (const auto& [label, jc] : counts) {
        const std::string modal = journal_ranking(jc).front().first;
        root[label] = owner.emplace(modal, label).first->second;
    }
    std::map<int, int> dense;
    for (const auto& [label, r] : root) dense.emplace(r, static_cast<int>(dense.size()));

    MergedClusters out;
    out.labels.resize(labels.size());
    std::vector<std::map<std::string, std::size_t>> merged(dense.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int m = dense.at(root.at(labels[i]));
        out.labels[i] = m;
        ++merged[static_cast<std::size_t>(m)][journals[i]];
    }
    for (std::size_t m = 0; m < merged.size(); ++m) {
        ClusterSummary s;
        s.label = static_cast<int>(m);
        auto ranking = journal_ranking(merged[m]);
        for (const auto& [j, c] : ranking) s.size += c;
        s.modal_journal = ranking.front().first;
        if (ranking.size() > 5) ranking.resize(5);
        s.top_journals = std::move(ranking);
        out.clusters.push_back(std::move(s));
    }
    return out;
}

}  // namespace scimetrics

#include "scimetrics/errors.hpp"
#include "scimetrics/mapviz.hpp"
#include "scimetrics/util.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>

namespace scimetrics {

namespace {

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& x) {
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd d(n, n);
    parallel_for(static_cast<std::size_t>(n), worker_threads(), [&](std::size_t ii) {
        const auto i = static_cast<Eigen::Index>(ii);
        for (Eigen::Index j = 0; j < n; ++j) d(i, j) = (x.row(i) - x.row(j)).squaredNorm();
    });
    return d;
}

// Fills row i of P with exp(-beta * (d - dmin)), normalized; returns entropy in nats.
double row_entropy(const Eigen::MatrixXd& dist, Eigen::Index i, double beta, double dmin, Eigen::MatrixXd& p) {
    const Eigen::Index n = dist.rows();
    double sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double v = j == i ? 0.0 : std::exp(-beta * (dist(i, j) - dmin));
        p(i, j) = v;
        sum += v;
    }
    double h = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        const double q = p(i, j) / sum;
        p(i, j) = q;
        if (q > 0.0) h -= q * std::log(q);
    }
    return h;
}

double kl_divergence(const Eigen::MatrixXd& p, const std::vector<Point2>& y) {
    const std::size_t n = y.size();
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) {
                const double dx = y[i][0] - y[j][0], dy = y[i][1] - y[j][1];
                z += 1.0 / (1.0 + dx * dx + dy * dy);
            }
    double kl = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double pij = p(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));  // symmetric
            if (i == j || pij <= 0.0) continue;
            const double dx = y[i][0] - y[j][0], dy = y[i][1] - y[j][1];
            const double q = (1.0 / (1.0 + dx * dx + dy * dy)) / z;
            kl += pij * std::log(pij / std::max(q, std::numeric_limits<double>::min()));
        }
    return kl;
}

}  // namespace

Eigen::MatrixXd conditional_affinities(const Eigen::MatrixXd& points, double perplexity, double* max_perplexity_error) {
    const Eigen::Index n = points.rows();
    const Eigen::MatrixXd dist = squared_distances(points);
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    const double target = std::log(perplexity);
    std::vector<double> err(static_cast<std::size_t>(n), 0.0);

    parallel_for(static_cast<std::size_t>(n), worker_threads(), [&](std::size_t ii) {
        const auto i = static_cast<Eigen::Index>(ii);
        double dmin = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < n; ++j)
            if (j != i) dmin = std::min(dmin, dist(i, j));
        // bracket the precision, then bisect
        double lo = 0.0, hi = std::numeric_limits<double>::infinity();
        double beta = 1.0;
        double h = row_entropy(dist, i, beta, dmin, p);
        for (int it = 0; it < 500; ++it) {
            if (std::abs(std::exp(h) - perplexity) < 1e-6) break;
            if (h > target) {
                lo = beta;
                beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
            } else {
                hi = beta;
                beta = 0.5 * (beta + lo);
            }
            h = row_entropy(dist, i, beta, dmin, p);
        }
        err[ii] = std::abs(std::exp(h) - perplexity);
    });
    if (max_perplexity_error) {
        double m = 0.0;
        for (double e : err) m = std::max(m, e);
        *max_perplexity_error = m;
    }
    return p;
}

TsneResult tsne(const Eigen::MatrixXd& points, const TsneOptions& opt) {
    const Eigen::Index n = points.rows();
    if (n < 10) throw DataError(fmt::format("t-SNE needs at least 10 points, got {}", n));
    if (!(opt.perplexity > 0.0) || opt.perplexity >= static_cast<double>(n - 1) / 3.0)
        throw DataError(fmt::format("perplexity {} infeasible for n={} (must be below {})", opt.perplexity, n,
                                    static_cast<double>(n - 1) / 3.0));
    if (opt.iterations < 0) throw ConfigError("t-SNE iterations must be non-negative");

    TsneResult res;
    Eigen::MatrixXd p = conditional_affinities(points, opt.perplexity, &res.perplexity_error);
    p = (p + p.transpose()).eval();
    p /= p.sum();

    const auto un = static_cast<std::size_t>(n);
    const double eta = opt.learning_rate.value_or(static_cast<double>(n) / 12.0);
    std::vector<Point2> y(un), update(un, Point2{0, 0}), gains(un, Point2{1, 1}), grad(un);
    Rng rng(opt.seed);
    for (auto& pt : y) pt = {rng.normal() * 1e-4, rng.normal() * 1e-4};

    res.initial_kl = kl_divergence(p, y);
    res.kl_trace.emplace_back(0, res.initial_kl);

    std::vector<double> num(un * un);
    for (int iter = 0; iter < opt.iterations; ++iter) {
        const double exaggeration = iter < opt.exaggeration_iterations ? opt.early_exaggeration : 1.0;
        const double momentum = iter < 250 ? 0.5 : 0.8;

        double z = 0.0;
        for (std::size_t i = 0; i < un; ++i) {
            num[i * un + i] = 0.0;
            for (std::size_t j = i + 1; j < un; ++j) {
                const double dx = y[i][0] - y[j][0], dy = y[i][1] - y[j][1];
                const double q = 1.0 / (1.0 + dx * dx + dy * dy);
                num[i * un + j] = num[j * un + i] = q;
                z += 2.0 * q;
            }
        }
        parallel_for(un, worker_threads(), [&](std::size_t i) {
            double gx = 0.0, gy = 0.0;
            for (std::size_t j = 0; j < un; ++j) {
                if (i == j) continue;
                const double q = num[i * un + j];
                // P is symmetric; (j, i) walks the column-major storage contiguously
                const double m = (exaggeration * p(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) - q / z) * q;
                gx += m * (y[i][0] - y[j][0]);
                gy += m * (y[i][1] - y[j][1]);
            }
            grad[i] = {4.0 * gx, 4.0 * gy};
        });
        for (std::size_t i = 0; i < un; ++i)
            for (int c = 0; c < 2; ++c) {
                const bool same_sign = (grad[i][c] > 0) == (update[i][c] > 0);
                gains[i][c] = same_sign ? gains[i][c] * 0.8 : gains[i][c] + 0.2;
                gains[i][c] = std::max(gains[i][c], 0.01);
                update[i][c] = momentum * update[i][c] - eta * gains[i][c] * grad[i][c];
                y[i][c] += update[i][c];
            }
        Point2 mean{0, 0};
        for (const auto& pt : y) {
            mean[0] += pt[0];
            mean[1] += pt[1];
        }
        for (auto& pt : y) {
            pt[0] -= mean[0] / static_cast<double>(un);
            pt[1] -= mean[1] / static_cast<double>(un);
        }
        if (opt.kl_every > 0 && (iter + 1) % opt.kl_every == 0 && iter + 1 < opt.iterations)
            res.kl_trace.emplace_back(iter + 1, kl_divergence(p, y));
    }
    res.final_kl = kl_divergence(p, y);
    res.kl_trace.emplace_back(opt.iterations, res.final_kl);
    res.coords = std::move(y);
    return res;
}

}  // namespace scimetrics

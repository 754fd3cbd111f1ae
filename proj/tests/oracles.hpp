#pragma once

// Brute-force reference implementations used only by the tests. They share no code
// with the library's search or fitting paths.

#include "hubness/embedding.hpp"
#include "hubness/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

using hubness::EmbeddingSet;

inline double euclidean(const EmbeddingSet& a, std::size_t i, const EmbeddingSet& b, std::size_t j) {
    double s = 0.0;
    for (std::size_t d = 0; d < a.cols(); ++d) {
        const double diff = a(i, d) - b(j, d);
        s += diff * diff;
    }
    return std::sqrt(s);
}

struct Graph {
    std::vector<std::vector<std::size_t>> indices;
    std::vector<std::vector<double>> distances;
};

/// Full sort of a materialized distance row per query; ties by ascending index.
inline Graph knn_from_matrix(const std::vector<std::vector<double>>& dist, std::size_t k,
                             bool exclude_self) {
    Graph g;
    for (std::size_t q = 0; q < dist.size(); ++q) {
        std::vector<std::pair<double, std::size_t>> row;
        for (std::size_t i = 0; i < dist[q].size(); ++i) {
            if (exclude_self && i == q) continue;
            row.emplace_back(dist[q][i], i);
        }
        std::sort(row.begin(), row.end());
        std::vector<std::size_t> idx;
        std::vector<double> d;
        for (std::size_t j = 0; j < k; ++j) {
            idx.push_back(row[j].second);
            d.push_back(row[j].first);
        }
        g.indices.push_back(idx);
        g.distances.push_back(d);
    }
    return g;
}

inline std::vector<std::vector<double>> distance_matrix(const EmbeddingSet& q, const EmbeddingSet& x) {
    std::vector<std::vector<double>> m(q.rows(), std::vector<double>(x.rows()));
    for (std::size_t i = 0; i < q.rows(); ++i) {
        for (std::size_t j = 0; j < x.rows(); ++j) m[i][j] = euclidean(q, i, x, j);
    }
    return m;
}

inline Graph knn(const EmbeddingSet& q, const EmbeddingSet& x, std::size_t k, bool exclude_self) {
    return knn_from_matrix(distance_matrix(q, x), k, exclude_self);
}

inline std::vector<std::size_t> k_occurrence(const Graph& g, std::size_t n) {
    std::vector<std::size_t> counts(n, 0);
    for (std::size_t p = 0; p < n; ++p) {
        for (const auto& row : g.indices) counts[p] += static_cast<std::size_t>(std::count(row.begin(), row.end(), p));
    }
    return counts;
}

/// Standard normal CDF by composite Simpson integration of the density from -12 to z.
inline double normal_cdf_quadrature(double z) {
    if (z <= -12.0) return 0.0;
    const double lo = -12.0;
    const int n = 200000;
    const double h = (z - lo) / n;
    auto pdf = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI); };
    double s = pdf(lo) + pdf(z);
    for (int i = 1; i < n; ++i) s += pdf(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

inline double survival(double d, double mu, double sigma) {
    if (sigma == 0.0) return d < mu ? 1.0 : 0.0;
    return 1.0 - normal_cdf_quadrature((d - mu) / sigma);
}

/// Mean and population standard deviation of distances from each point to all others.
inline std::pair<std::vector<double>, std::vector<double>> distance_moments(const EmbeddingSet& x) {
    const auto dist = distance_matrix(x, x);
    std::vector<double> mu(x.rows()), sigma(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < x.rows(); ++j) if (j != i) s += dist[i][j];
        mu[i] = s / static_cast<double>(x.rows() - 1);
        double v = 0.0;
        for (std::size_t j = 0; j < x.rows(); ++j) if (j != i) v += (dist[i][j] - mu[i]) * (dist[i][j] - mu[i]);
        sigma[i] = std::sqrt(v / static_cast<double>(x.rows() - 1));
    }
    return {mu, sigma};
}

/// Mutual Proximity matrix from independently evaluated survival functions, in long double.
inline std::vector<std::vector<double>> mp_matrix(const EmbeddingSet& x, const std::vector<double>& mu,
                                                  const std::vector<double>& sigma) {
    auto surv = [](long double d, long double m, long double s) -> long double {
        if (s == 0.0L) return d < m ? 1.0L : 0.0L;
        return 0.5L * std::erfc((d - m) / (s * std::sqrt(2.0L)));
    };
    const auto dist = distance_matrix(x, x);
    std::vector<std::vector<double>> out(x.rows(), std::vector<double>(x.rows()));
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.rows(); ++j) {
            const long double p = surv(dist[i][j], mu[i], sigma[i]) * surv(dist[i][j], mu[j], sigma[j]);
            out[i][j] = static_cast<double>(1.0L - p);
        }
    }
    return out;
}

/// Distance from each point to its m-th nearest other point.
inline std::vector<double> local_scales(const EmbeddingSet& x, std::size_t m) {
    const Graph g = knn(x, x, m, true);
    std::vector<double> s;
    for (const auto& row : g.distances) s.push_back(row[m - 1]);
    return s;
}

inline std::vector<std::vector<double>> ls_matrix(const EmbeddingSet& x, const std::vector<double>& sigma) {
    const auto dist = distance_matrix(x, x);
    std::vector<std::vector<double>> out(x.rows(), std::vector<double>(x.rows()));
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.rows(); ++j) {
            const long double d = dist[i][j];
            const long double scale = static_cast<long double>(sigma[i]) * sigma[j];
            out[i][j] = static_cast<double>(1.0L - std::exp(-d * d / scale));
        }
    }
    return out;
}

/// Majority vote with nearest-tied-class rule over a sorted neighbor list.
inline int vote(const std::vector<std::size_t>& nbrs, const std::vector<int>& labels, std::size_t k) {
    std::map<int, std::size_t> count;
    for (std::size_t j = 0; j < k; ++j) ++count[labels[nbrs[j]]];
    std::size_t best = 0;
    for (const auto& [l, c] : count) best = std::max(best, c);
    for (std::size_t j = 0; j < k; ++j) {
        if (count[labels[nbrs[j]]] == best) return labels[nbrs[j]];
    }
    return -1;
}

inline std::vector<int> classify(const EmbeddingSet& train, const EmbeddingSet& test, std::size_t k) {
    const Graph g = knn(test, train, k, false);
    std::vector<int> out;
    for (const auto& row : g.indices) out.push_back(vote(row, *train.labels(), k));
    return out;
}

/// Exact binomial tail 2 * sum_{i <= min(b,c)} C(n,i) / 2^n, clipped at 1.
inline double mcnemar_binomial(std::size_t b, std::size_t c) {
    const std::size_t n = b + c;
    if (n == 0) return 1.0;
    long double total = 0.0L;
    long double coeff = 1.0L;
    for (std::size_t i = 0; i <= std::min(b, c); ++i) {
        if (i > 0) coeff = coeff * static_cast<long double>(n - i + 1) / static_cast<long double>(i);
        total += coeff;
    }
    const long double p = 2.0L * total / std::pow(2.0L, static_cast<long double>(n));
    return static_cast<double>(std::min<long double>(1.0L, p));
}

inline EmbeddingSet random_set(std::size_t m, std::size_t dim, std::uint64_t seed, double scale = 1.0) {
    hubness::Rng rng(seed);
    std::vector<double> v(m * dim);
    for (double& x : v) x = scale * rng.uniform(-1.0, 1.0);
    return EmbeddingSet(m, dim, std::move(v));
}

inline EmbeddingSet line(std::initializer_list<double> xs, std::vector<int> labels = {}) {
    std::vector<double> v(xs);
    const std::size_t m = v.size();
    if (labels.empty()) return EmbeddingSet(m, 1, std::move(v));
    return EmbeddingSet(m, 1, std::move(v), std::move(labels));
}

} // namespace oracle

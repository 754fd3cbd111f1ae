#pragma once

// Blocked brute-force neighbor selection shared by the primary and secondary searches.

#include "hubness/embedding.hpp"
#include "hubness/error.hpp"
#include "hubness/knn.hpp"
#include "hubness/parallel.hpp"

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace hubness::detail {

inline double squared_distance(const double* a, const double* b, std::size_t D) {
    double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    std::size_t t = 0;
    for (; t + 8 <= D; t += 8) {
        for (std::size_t u = 0; u < 8; ++u) {
            const double diff = a[t + u] - b[t + u];
            acc[u] += diff * diff;
        }
    }
    for (std::size_t u = 0; t < D; ++t, ++u) {
        const double diff = a[t] - b[t];
        acc[u] += diff * diff;
    }
    return ((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7]));
}

/// Bounded max-heap of (score, index); the root is the current worst kept neighbor.
class TopK {
public:
    explicit TopK(std::size_t k) : k_(k) { items_.reserve(k); }

    void offer(double score, std::size_t index) {
        const std::pair<double, std::size_t> item{score, index};
        if (items_.size() < k_) {
            items_.push_back(item);
            std::push_heap(items_.begin(), items_.end());
        } else if (item < items_.front()) {
            std::pop_heap(items_.begin(), items_.end());
            items_.back() = item;
            std::push_heap(items_.begin(), items_.end());
        }
    }

    template <typename Finish>
    void write(std::size_t* idx, double* dist, Finish&& finish) {
        std::sort(items_.begin(), items_.end());
        for (std::size_t j = 0; j < items_.size(); ++j) {
            idx[j] = items_[j].second;
            dist[j] = finish(items_[j].first);
        }
    }

private:
    std::size_t k_;
    std::vector<std::pair<double, std::size_t>> items_;
};

inline void check_knn_args(const EmbeddingSet& query, const EmbeddingSet& index, std::size_t k,
                           bool exclude_self) {
    if (query.cols() != index.cols()) {
        throw InvalidArgument("dimension mismatch: query D=" + std::to_string(query.cols()) +
                              ", index D=" + std::to_string(index.cols()));
    }
    if (exclude_self && query.rows() != index.rows()) {
        throw InvalidArgument("self exclusion requires query and index of equal size");
    }
    const std::size_t available = index.rows() - (exclude_self ? 1 : 0);
    if (k < 1 || k > available) {
        throw InvalidArgument("k=" + std::to_string(k) + " out of range [1, " +
                              std::to_string(available) + "]");
    }
}

constexpr std::size_t kQueryBlock = 32;
constexpr std::size_t kIndexBlock = 128;

/// score(squared_distance, query_row, index_row) -> ranking value (smaller is nearer);
/// finish(score) -> reported distance.
template <typename Score, typename Finish>
NeighborGraph blocked_knn(const EmbeddingSet& query, const EmbeddingSet& index, std::size_t k,
                          bool exclude_self, Score&& score, Finish&& finish) {
    check_knn_args(query, index, k, exclude_self);
    const std::size_t nq = query.rows();
    const std::size_t ni = index.rows();
    const std::size_t D = query.cols();
    const double* qv = query.values().data();
    const double* iv = index.values().data();

    NeighborGraph graph;
    graph.k = k;
    graph.indices.resize(nq * k);
    graph.distances.resize(nq * k);

    // Same point set and one worker: visit each unordered pair once.
    const bool symmetric = exclude_self && &query == &index && num_threads() == 1;
    if (symmetric) {
        std::vector<TopK> heaps(nq, TopK(k));
        for (std::size_t qb = 0; qb < nq; qb += kQueryBlock) {
            const std::size_t qe = std::min(nq, qb + kQueryBlock);
            for (std::size_t ib = qb; ib < ni; ib += kIndexBlock) {
                const std::size_t ie = std::min(ni, ib + kIndexBlock);
                for (std::size_t q = qb; q < qe; ++q) {
                    const double* a = qv + q * D;
                    for (std::size_t i = std::max(ib, q + 1); i < ie; ++i) {
                        const double sq = squared_distance(a, iv + i * D, D);
                        heaps[q].offer(score(sq, q, i), i);
                        heaps[i].offer(score(sq, i, q), q);
                    }
                }
            }
        }
        for (std::size_t q = 0; q < nq; ++q) {
            heaps[q].write(&graph.indices[q * k], &graph.distances[q * k], finish);
        }
        return graph;
    }

    parallel_for(nq, kQueryBlock, [&](std::size_t begin, std::size_t end) {
        for (std::size_t qb = begin; qb < end; qb += kQueryBlock) {
            const std::size_t qe = std::min(end, qb + kQueryBlock);
            std::vector<TopK> heaps(qe - qb, TopK(k));
            for (std::size_t ib = 0; ib < ni; ib += kIndexBlock) {
                const std::size_t ie = std::min(ni, ib + kIndexBlock);
                for (std::size_t q = qb; q < qe; ++q) {
                    const double* a = qv + q * D;
                    TopK& heap = heaps[q - qb];
                    for (std::size_t i = ib; i < ie; ++i) {
                        if (exclude_self && i == q) continue;
                        heap.offer(score(squared_distance(a, iv + i * D, D), q, i), i);
                    }
                }
            }
            for (std::size_t q = qb; q < qe; ++q) {
                heaps[q - qb].write(&graph.indices[q * k], &graph.distances[q * k], finish);
            }
        }
    });
    return graph;
}

} // namespace hubness::detail

#pragma once

#include "hubness/embedding.hpp"
#include "hubness/knn.hpp"

#include <cstddef>
#include <vector>

namespace hubness {

/// N_k(x): how often each index point appears in the neighbor lists of a graph.
struct KOccurrence {
    std::size_t k = 0;
    std::vector<std::size_t> counts;

    std::size_t size() const { return counts.size(); }
};

struct HubnessReport {
    std::size_t k = 0;
    std::size_t n_points = 0;
    double k_skewness = 0.0;
    double robinhood = 0.0;
    std::size_t antihub_count = 0;
    std::size_t max_k_occurrence = 0;
};

KOccurrence k_occurrence(const NeighborGraph& graph, std::size_t n_index_points);

/// Population (Fisher-Pearson, biased) skewness m3 / m2^1.5 of the counts; 0 when the
/// counts have zero variance.
double k_skewness(const KOccurrence& occ);

/// Robin Hood score: sum |N_k(x) - k| / (2k(m - 1)).
double robinhood(const KOccurrence& occ);

/// Whether a point may count as its own neighbor when a set is queried against itself.
/// `include` matches querying a fitted index with the same matrix, where each point is
/// (barring exact duplicates) its own first neighbor and only k-1 other points are counted.
enum class SelfMatch { exclude, include };

/// Hubness summary of a self-query neighbor graph over `n_points` points.
HubnessReport hubness_report(const NeighborGraph& graph, std::size_t n_points);

/// Euclidean hubness of `points` queried against themselves.
HubnessReport hubness_report(const EmbeddingSet& points, std::size_t k,
                             SelfMatch self = SelfMatch::exclude);

} // namespace hubness

#pragma once

#include "hubness/embedding.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace hubness {

/// Ordered k-nearest-neighbor lists for a set of query rows.
///
/// Row q holds the indices (into the index set) of its k nearest neighbors, nearest
/// first, with distance ties broken by ascending index.
struct NeighborGraph {
    std::size_t k = 0;
    std::vector<std::size_t> indices;
    std::vector<double> distances;

    std::size_t rows() const { return k == 0 ? 0 : indices.size() / k; }
    std::span<const std::size_t> neighbors(std::size_t q) const { return {indices.data() + q * k, k}; }
    std::span<const double> neighbor_distances(std::size_t q) const {
        return {distances.data() + q * k, k};
    }
};

/// Squared Euclidean distance. This is the single distance kernel used by every
/// search in the library, so equal inputs give bit-identical distances everywhere.
double squared_distance(std::span<const double> a, std::span<const double> b);

/// Exact Euclidean k-NN of every `query` row among the `index` rows.
///
/// With `exclude_self`, query row i and index row i are taken to be the same point and
/// i never appears in row i's list; `query` and `index` must then have equal row counts.
NeighborGraph knn_search(const EmbeddingSet& query, const EmbeddingSet& index, std::size_t k,
                         bool exclude_self);

/// knn_search(points, points, k, true).
NeighborGraph knn_search(const EmbeddingSet& points, std::size_t k);

} // namespace hubness

#include "hubness/knn.hpp"

#include "knn_engine.hpp"

#include <cmath>

namespace hubness {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw InvalidArgument("dimension mismatch in squared_distance");
    }
    return detail::squared_distance(a.data(), b.data(), a.size());
}

NeighborGraph knn_search(const EmbeddingSet& query, const EmbeddingSet& index, std::size_t k,
                         bool exclude_self) {
    return detail::blocked_knn(
        query, index, k, exclude_self, [](double sq, std::size_t, std::size_t) { return sq; },
        [](double sq) { return std::sqrt(sq); });
}

NeighborGraph knn_search(const EmbeddingSet& points, std::size_t k) {
    return knn_search(points, points, k, true);
}

} // namespace hubness

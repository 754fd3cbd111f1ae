#include "hubness/metrics.hpp"

#include "hubness/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace hubness {

KOccurrence k_occurrence(const NeighborGraph& graph, std::size_t n_index_points) {
    KOccurrence occ;
    occ.k = graph.k;
    occ.counts.assign(n_index_points, 0);
    for (std::size_t idx : graph.indices) {
        if (idx >= n_index_points) {
            throw InvalidArgument("neighbor index " + std::to_string(idx) + " out of range for " +
                                  std::to_string(n_index_points) + " points");
        }
        ++occ.counts[idx];
    }
    return occ;
}

double k_skewness(const KOccurrence& occ) {
    const std::size_t m = occ.size();
    if (m < 2) {
        throw InvalidArgument("k-skewness needs at least two points");
    }
    double mean = 0.0;
    for (std::size_t c : occ.counts) mean += static_cast<double>(c);
    mean /= static_cast<double>(m);
    double m2 = 0.0;
    double m3 = 0.0;
    for (std::size_t c : occ.counts) {
        const double dev = static_cast<double>(c) - mean;
        m2 += dev * dev;
        m3 += dev * dev * dev;
    }
    m2 /= static_cast<double>(m);
    m3 /= static_cast<double>(m);
    if (m2 == 0.0) {
        return 0.0;
    }
    return m3 / std::pow(m2, 1.5);
}

double robinhood(const KOccurrence& occ) {
    const std::size_t m = occ.size();
    if (m < 2) {
        throw InvalidArgument("robinhood score needs at least two points");
    }
    if (occ.k == 0) {
        throw InvalidArgument("robinhood score needs k >= 1");
    }
    const auto k = static_cast<long long>(occ.k);
    long long total = 0;
    for (std::size_t c : occ.counts) total += std::llabs(static_cast<long long>(c) - k);
    return static_cast<double>(total) / (2.0 * static_cast<double>(k) * static_cast<double>(m - 1));
}

HubnessReport hubness_report(const NeighborGraph& graph, std::size_t n_points) {
    const KOccurrence occ = k_occurrence(graph, n_points);
    HubnessReport report;
    report.k = graph.k;
    report.n_points = n_points;
    report.k_skewness = k_skewness(occ);
    report.robinhood = robinhood(occ);
    report.antihub_count =
        static_cast<std::size_t>(std::count(occ.counts.begin(), occ.counts.end(), std::size_t{0}));
    report.max_k_occurrence = *std::max_element(occ.counts.begin(), occ.counts.end());
    return report;
}

HubnessReport hubness_report(const EmbeddingSet& points, std::size_t k, SelfMatch self) {
    if (points.rows() < 2 || points.rows() < k + (self == SelfMatch::exclude ? 1 : 0)) {
        throw InvalidArgument("hubness report needs at least k+1 points");
    }
    const NeighborGraph graph = self == SelfMatch::exclude ? knn_search(points, k)
                                                           : knn_search(points, points, k, false);
    return hubness_report(graph, points.rows());
}

} // namespace hubness

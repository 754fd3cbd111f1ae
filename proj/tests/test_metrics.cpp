#include "doctest.h"

#include "hubness/error.hpp"
#include "hubness/metrics.hpp"
#include "hubness/parallel.hpp"
#include "hubness/serialize.hpp"
#include "hubness/synth.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numeric>

using namespace hubness;

namespace {

KOccurrence occ_of(std::vector<std::size_t> counts, std::size_t k) {
    KOccurrence o;
    o.k = k;
    o.counts = std::move(counts);
    return o;
}

void check_matches_oracle(const NeighborGraph& g, const oracle::Graph& o) {
    REQUIRE(g.rows() == o.indices.size());
    for (std::size_t q = 0; q < g.rows(); ++q) {
        for (std::size_t j = 0; j < g.k; ++j) {
            CHECK(g.neighbors(q)[j] == o.indices[q][j]);
            CHECK(std::abs(g.neighbor_distances(q)[j] - o.distances[q][j]) <= 1e-9);
        }
    }
}

// Direct moment computation used to freeze the skewness example.
double skew_by_moments(const std::vector<double>& x) {
    const double n = static_cast<double>(x.size());
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double m2 = 0, m3 = 0;
    for (double v : x) {
        m2 += std::pow(v - mean, 2) / n;
        m3 += std::pow(v - mean, 3) / n;
    }
    return m3 / std::pow(m2, 1.5);
}

} // namespace

TEST_CASE("knn on a line") {
    const EmbeddingSet X = oracle::line({0, 1, 3});
    const NeighborGraph g = knn_search(X, 1);
    CHECK(g.indices == std::vector<std::size_t>{1, 0, 1});
    check_matches_oracle(g, oracle::knn(X, X, 1, true));
}

TEST_CASE("distance ties go to the smaller index") {
    const EmbeddingSet index = oracle::line({0, 1, 2});
    const NeighborGraph g = knn_search(index, 1);
    CHECK(g.neighbors(1)[0] == 0);
    const NeighborGraph q = knn_search(oracle::line({1}), oracle::line({0, 2}), 1, false);
    CHECK(q.indices == std::vector<std::size_t>{0});
}

TEST_CASE("k = m-1 lists every other point") {
    const EmbeddingSet X = oracle::random_set(9, 3, 5);
    const NeighborGraph g = knn_search(X, 8);
    for (std::size_t q = 0; q < 9; ++q) {
        std::vector<std::size_t> row(g.neighbors(q).begin(), g.neighbors(q).end());
        std::sort(row.begin(), row.end());
        std::vector<std::size_t> expected;
        for (std::size_t i = 0; i < 9; ++i) if (i != q) expected.push_back(i);
        CHECK(row == expected);
        auto d = g.neighbor_distances(q);
        CHECK(std::is_sorted(d.begin(), d.end()));
    }
}

TEST_CASE("knn argument errors") {
    const EmbeddingSet X = oracle::random_set(5, 2, 1);
    CHECK_THROWS_AS(knn_search(X, 0), InvalidArgument);
    CHECK_THROWS_AS(knn_search(X, 5), InvalidArgument);
    CHECK_NOTHROW(knn_search(X, X, 5, false));
    CHECK_THROWS_AS(knn_search(X, oracle::random_set(5, 3, 1), 1, false), InvalidArgument);
}

TEST_CASE("knn equals the brute-force oracle on random instances") {
    Rng rng(2024);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t m = 2 + rng.below(300);
        const std::size_t D = 1 + rng.below(40);
        const std::size_t k = 1 + rng.below(std::min<std::size_t>(m - 1, 20));
        const EmbeddingSet X = oracle::random_set(m, D, 100 + trial);
        check_matches_oracle(knn_search(X, k), oracle::knn(X, X, k, true));

        const EmbeddingSet Q = oracle::random_set(1 + rng.below(50), D, 500 + trial);
        check_matches_oracle(knn_search(Q, X, k, false), oracle::knn(Q, X, k, false));
    }
}

TEST_CASE("knn output does not depend on the thread count") {
    const EmbeddingSet X = oracle::random_set(400, 16, 3);
    set_num_threads(1);
    const NeighborGraph serial = knn_search(X, 10);
    set_num_threads(4);
    const NeighborGraph threaded = knn_search(X, 10);
    set_num_threads(0);
    CHECK(serial.indices == threaded.indices);
    CHECK(serial.distances == threaded.distances);
}

TEST_CASE("k-occurrence counts") {
    const EmbeddingSet X = oracle::line({0, 1, 2, 10});
    const NeighborGraph g = knn_search(X, 1);
    const KOccurrence occ = k_occurrence(g, 4);
    CHECK(occ.counts == std::vector<std::size_t>{1, 2, 1, 0});
    CHECK(occ.counts == oracle::k_occurrence(oracle::knn(X, X, 1, true), 4));

    const KOccurrence two = k_occurrence(knn_search(oracle::line({0, 5}), 1), 2);
    CHECK(two.counts == std::vector<std::size_t>{1, 1});

    CHECK_THROWS_AS(k_occurrence(g, 2), InvalidArgument);
}

TEST_CASE("k-occurrence sums to k times the number of queries") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const EmbeddingSet X = oracle::random_set(60, 5, seed);
        for (std::size_t k : {1u, 4u, 10u}) {
            const KOccurrence occ = k_occurrence(knn_search(X, k), X.rows());
            CHECK(std::accumulate(occ.counts.begin(), occ.counts.end(), std::size_t{0}) == k * X.rows());
        }
    }
}

TEST_CASE("k-skewness") {
    CHECK(k_skewness(occ_of({2, 2, 2, 2}, 2)) == 0.0);
    CHECK(k_skewness(occ_of({0, 2, 2, 4}, 2)) == doctest::Approx(0.0));
    const double expected = skew_by_moments({0, 0, 0, 4});
    CHECK(expected == doctest::Approx(1.1547).epsilon(1e-4));
    CHECK(k_skewness(occ_of({0, 0, 0, 4}, 1)) == doctest::Approx(expected).epsilon(1e-12));
    CHECK_THROWS_AS(k_skewness(occ_of({3}, 1)), InvalidArgument);
}

TEST_CASE("robinhood score") {
    CHECK(robinhood(occ_of({3, 3, 3, 3}, 3)) == 0.0);
    CHECK(robinhood(occ_of({1, 2, 1, 0}, 1)) == doctest::Approx(1.0 / 3.0));
    CHECK(robinhood(occ_of({3, 1, 0, 0}, 1)) == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(robinhood(occ_of({1}, 1)), InvalidArgument);
}

TEST_CASE("hubness report composes search and scores") {
    const EmbeddingSet X = gen_gaussian(300, 30, 0.0, 8);
    const HubnessReport r = hubness_report(X, 10);
    const KOccurrence occ = k_occurrence(knn_search(X, X, 10, true), X.rows());
    CHECK(r.robinhood == robinhood(occ));
    CHECK(r.k_skewness == k_skewness(occ));
    CHECK(r.antihub_count == static_cast<std::size_t>(std::count(occ.counts.begin(), occ.counts.end(), 0u)));
    CHECK(r.max_k_occurrence == *std::max_element(occ.counts.begin(), occ.counts.end()));
    CHECK(r.robinhood >= 0.0);
    CHECK(r.robinhood <= 1.0);
    CHECK(r.max_k_occurrence <= r.n_points - 1);

    const HubnessReport two = hubness_report(oracle::line({0, 1}), 1);
    CHECK(two.robinhood == 0.0);
    CHECK_THROWS_AS(hubness_report(oracle::line({0, 1}), 2), InvalidArgument);
}

TEST_CASE("self-inclusive reports count each point as its own first neighbor") {
    const EmbeddingSet X = oracle::random_set(50, 4, 12);
    const NeighborGraph g = knn_search(X, X, 5, false);
    for (std::size_t q = 0; q < X.rows(); ++q) CHECK(g.neighbors(q)[0] == q);
    const HubnessReport r = hubness_report(X, 5, SelfMatch::include);
    CHECK(r.robinhood == robinhood(k_occurrence(g, X.rows())));
}

TEST_CASE("robinhood is zero exactly when every count equals k") {
    // Points on a circle: each has the same two neighbors structure.
    std::vector<double> v;
    const std::size_t n = 12;
    for (std::size_t i = 0; i < n; ++i) {
        v.push_back(std::cos(2 * M_PI * i / n));
        v.push_back(std::sin(2 * M_PI * i / n));
    }
    const EmbeddingSet circle(n, 2, v);
    const KOccurrence occ = k_occurrence(knn_search(circle, 2), n);
    CHECK(std::all_of(occ.counts.begin(), occ.counts.end(), [](std::size_t c) { return c == 2; }));
    CHECK(robinhood(occ) == 0.0);
    CHECK(robinhood(occ_of({2, 2, 1, 3}, 2)) > 0.0);
}

TEST_CASE("row permutation permutes counts and keeps the scores") {
    const EmbeddingSet X = oracle::random_set(80, 6, 31);
    std::vector<std::size_t> perm(X.rows());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(4);
    for (std::size_t j = perm.size() - 1; j > 0; --j) std::swap(perm[j], perm[rng.below(j + 1)]);
    const EmbeddingSet P = take_rows(X, perm);
    const KOccurrence a = k_occurrence(knn_search(X, 5), X.rows());
    const KOccurrence b = k_occurrence(knn_search(P, 5), P.rows());
    for (std::size_t i = 0; i < perm.size(); ++i) CHECK(b.counts[i] == a.counts[perm[i]]);
    CHECK(k_skewness(a) == doctest::Approx(k_skewness(b)).epsilon(1e-12));
    CHECK(robinhood(a) == robinhood(b));
}

TEST_CASE("rotation and translation keep the neighbor structure") {
    const EmbeddingSet X = oracle::random_set(120, 2, 17);
    const double c = std::cos(0.7), s = std::sin(0.7);
    std::vector<double> v;
    for (std::size_t i = 0; i < X.rows(); ++i) {
        v.push_back(c * X(i, 0) - s * X(i, 1) + 3.5);
        v.push_back(s * X(i, 0) + c * X(i, 1) - 1.25);
    }
    const EmbeddingSet Y(X.rows(), 2, v);
    const NeighborGraph a = knn_search(X, 7);
    const NeighborGraph b = knn_search(Y, 7);
    CHECK(a.indices == b.indices);
    for (std::size_t i = 0; i < a.distances.size(); ++i) {
        CHECK(std::abs(a.distances[i] - b.distances[i]) <= 1e-9);
    }
}

TEST_CASE("hubness report JSON and histogram CSV") {
    HubnessReport r;
    r.k = 10;
    r.n_points = 100;
    r.k_skewness = 1.25;
    r.robinhood = 0.5;
    r.antihub_count = 3;
    r.max_k_occurrence = 40;
    const auto j = to_json(r);
    for (const char* key : {"k", "n_points", "k_skewness", "robinhood", "antihub_count", "max_k_occurrence"}) {
        CHECK(j.contains(key));
    }
    const HubnessReport back = hubness_report_from_json(j);
    CHECK(back.robinhood == r.robinhood);
    CHECK(back.max_k_occurrence == 40);
    CHECK(k_occurrence_csv(occ_of({1, 2}, 1)) == "index,count\n0,1\n1,2\n");
}

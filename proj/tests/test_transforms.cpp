#include "doctest.h"

#include "hubness/error.hpp"
#include "hubness/metrics.hpp"
#include "hubness/parallel.hpp"
#include "hubness/serialize.hpp"
#include "hubness/synth.hpp"
#include "hubness/transforms.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numeric>

using namespace hubness;

namespace {

double row_norm(const EmbeddingSet& X, std::size_t i) {
    double s = 0;
    for (double v : X.row(i)) s += v * v;
    return std::sqrt(s);
}

void check_close(const EmbeddingSet& a, const EmbeddingSet& b, double tol) {
    REQUIRE(a.rows() == b.rows());
    REQUIRE(a.cols() == b.cols());
    for (std::size_t i = 0; i < a.values().size(); ++i) {
        CHECK(std::abs(a.values()[i] - b.values()[i]) <= tol);
    }
}

bool bitwise_equal(const EmbeddingSet& a, const EmbeddingSet& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           std::equal(a.values().begin(), a.values().end(), b.values().begin());
}

} // namespace

TEST_CASE("unit_normalize") {
    const EmbeddingSet X(1, 3, {1, 2, 2});
    const EmbeddingSet U = unit_normalize(X);
    CHECK(U(0, 0) == doctest::Approx(1.0 / 3));
    CHECK(U(0, 1) == doctest::Approx(2.0 / 3));
    CHECK(U(0, 2) == doctest::Approx(2.0 / 3));

    const EmbeddingSet R = oracle::random_set(40, 9, 1, 5.0);
    const EmbeddingSet once = unit_normalize(R);
    for (std::size_t i = 0; i < once.rows(); ++i) CHECK(std::abs(row_norm(once, i) - 1.0) <= 1e-9);
    check_close(unit_normalize(once), once, 1e-9);

    try {
        unit_normalize(EmbeddingSet(2, 3, {1, 0, 0, 0, 0, 0}));
        FAIL("expected zero-norm error");
    } catch (const InvalidArgument& e) {
        CHECK(std::string(e.what()).find("row 1") != std::string::npos);
    }
}

TEST_CASE("embed_center") {
    CHECK(embed_center(EmbeddingSet(1, 3, {1, 2, 3})).values()[0] == doctest::Approx(-1));
    const EmbeddingSet C = embed_center(EmbeddingSet(1, 3, {1, 2, 3}));
    CHECK(std::vector<double>(C.values().begin(), C.values().end()) == std::vector<double>{-1, 0, 1});
    const EmbeddingSet Z(1, 3, {-1, 0, 1});
    CHECK(embed_center(Z) == Z);
    const EmbeddingSet F = embed_center(EmbeddingSet(1, 2, {5, 5}));
    CHECK(F(0, 0) == 0.0);
    CHECK(F(0, 1) == 0.0);

    const EmbeddingSet R = embed_center(oracle::random_set(30, 11, 2, 3.0));
    for (std::size_t i = 0; i < R.rows(); ++i) {
        auto r = R.row(i);
        CHECK(std::abs(std::accumulate(r.begin(), r.end(), 0.0) / r.size()) <= 1e-9);
    }
}

TEST_CASE("embed_zscore") {
    const EmbeddingSet Z = embed_zscore(EmbeddingSet(1, 3, {1, 2, 3}));
    // Population sd of {1,2,3} is sqrt(2/3); the ends map to -+1/sqrt(2/3).
    const double expected = 1.0 / std::sqrt(2.0 / 3.0);
    CHECK(expected == doctest::Approx(1.2247).epsilon(1e-4));
    CHECK(Z(0, 0) == doctest::Approx(-expected));
    CHECK(Z(0, 1) == doctest::Approx(0.0));
    CHECK(Z(0, 2) == doctest::Approx(expected));

    const EmbeddingSet S = embed_zscore(EmbeddingSet(1, 2, {-1, 1}));
    CHECK(S(0, 0) == doctest::Approx(-1));
    CHECK(S(0, 1) == doctest::Approx(1));

    CHECK_THROWS_AS(embed_zscore(EmbeddingSet(1, 3, {4, 4, 4})), InvalidArgument);

    const EmbeddingSet R = oracle::random_set(25, 13, 3, 7.0);
    const EmbeddingSet RZ = embed_zscore(R);
    for (std::size_t i = 0; i < RZ.rows(); ++i) {
        auto r = RZ.row(i);
        const double mean = std::accumulate(r.begin(), r.end(), 0.0) / r.size();
        double var = 0;
        for (double v : r) var += (v - mean) * (v - mean);
        CHECK(std::abs(mean) <= 1e-9);
        CHECK(std::abs(std::sqrt(var / r.size()) - 1.0) <= 1e-9);
    }
    check_close(embed_zscore(embed_center(R)), RZ, 1e-9);
}

TEST_CASE("data_center") {
    const EmbeddingSet C = data_center(EmbeddingSet(2, 2, {0, 0, 2, 2}));
    CHECK(std::vector<double>(C.values().begin(), C.values().end()) == std::vector<double>{-1, -1, 1, 1});
    const EmbeddingSet single = data_center(EmbeddingSet(1, 2, {3, 4}));
    CHECK(single(0, 0) == 0.0);
    CHECK(single(0, 1) == 0.0);

    const EmbeddingSet R = data_center(oracle::random_set(50, 6, 4, 2.0));
    check_close(data_center(R), R, 1e-9);
    for (std::size_t d = 0; d < R.cols(); ++d) {
        double s = 0;
        for (std::size_t i = 0; i < R.rows(); ++i) s += R(i, d);
        CHECK(std::abs(s / R.rows()) <= 1e-9);
    }
}

TEST_CASE("rank assignment places sorted samples in column rank order") {
    const std::vector<double> column{5, -2, 7};
    const std::vector<double> samples{-1.1, 0.2, 0.9};
    CHECK(assign_by_rank(column, samples) == std::vector<double>{0.2, -1.1, 0.9});

    // Equal entries are ranked by row.
    const std::vector<double> ties{1, 0, 1, 0};
    const std::vector<double> s4{10, 20, 30, 40};
    CHECK(assign_by_rank(ties, s4) == std::vector<double>{30, 10, 40, 20});
    CHECK_THROWS_AS(assign_by_rank(ties, samples), InvalidArgument);
}

TEST_CASE("f_norm structure") {
    const EmbeddingSet X = gen_f_dist(200, 12, 5, 10, 21);
    const std::uint64_t seed = 99;
    const EmbeddingSet pre = rank_match(X, TargetDistribution::standard_normal, seed);

    for (std::size_t d = 0; d < X.cols(); ++d) {
        // Multiset of values equals the drawn samples: re-draw with the same stream.
        Rng rng = Rng::substream(seed, d);
        std::vector<double> drawn(X.rows());
        for (double& s : drawn) s = rng.normal();
        std::sort(drawn.begin(), drawn.end());
        std::vector<double> col(X.rows());
        for (std::size_t i = 0; i < X.rows(); ++i) col[i] = pre(i, d);
        std::sort(col.begin(), col.end());
        CHECK(col == drawn);

        for (std::size_t i = 0; i < X.rows(); ++i) {
            for (std::size_t j = 0; j < X.rows(); ++j) {
                if (X(i, d) < X(j, d)) CHECK(pre(i, d) < pre(j, d));
            }
        }
    }

    const EmbeddingSet out = f_norm(X, seed);
    check_close(out, unit_normalize(pre), 0.0);
    for (std::size_t i = 0; i < out.rows(); ++i) CHECK(std::abs(row_norm(out, i) - 1.0) <= 1e-9);
}

TEST_CASE("f_uniform structure") {
    const EmbeddingSet X = gen_gaussian(150, 8, 3.0, 5);
    const EmbeddingSet pre = rank_match(X, TargetDistribution::uniform_pm1, 7);
    for (double v : pre.values()) {
        CHECK(v >= -1.0);
        CHECK(v <= 1.0);
    }
    for (std::size_t d = 0; d < X.cols(); ++d) {
        for (std::size_t i = 0; i < X.rows(); ++i) {
            for (std::size_t j = 0; j < X.rows(); ++j) {
                if (X(i, d) < X(j, d)) CHECK(pre(i, d) < pre(j, d));
            }
        }
    }
    const EmbeddingSet out = f_uniform(X, 7);
    for (std::size_t i = 0; i < out.rows(); ++i) CHECK(std::abs(row_norm(out, i) - 1.0) <= 1e-9);
}

TEST_CASE("f_norm is deterministic across runs and thread counts") {
    const EmbeddingSet X = gen_gaussian(300, 40, 0.0, 3);
    set_num_threads(1);
    const EmbeddingSet a = f_norm(X, 5);
    set_num_threads(3);
    const EmbeddingSet b = f_norm(X, 5);
    const EmbeddingSet u = f_uniform(X, 5);
    set_num_threads(1);
    const EmbeddingSet u1 = f_uniform(X, 5);
    set_num_threads(0);
    CHECK(bitwise_equal(a, b));
    CHECK(bitwise_equal(u, u1));
    CHECK_FALSE(bitwise_equal(a, f_norm(X, 6)));
}

TEST_CASE("f_norm only sees column ranks") {
    const EmbeddingSet X = gen_gaussian(100, 10, 0.0, 8);
    // Strictly increasing maps per column keep every rank.
    std::vector<double> v(X.values().begin(), X.values().end());
    for (std::size_t i = 0; i < X.rows(); ++i) {
        for (std::size_t d = 0; d < X.cols(); ++d) {
            double& x = v[i * X.cols() + d];
            x = d % 2 ? std::exp(x) : 3.0 * x * x * x + 11.0;
        }
    }
    const EmbeddingSet Y = X.with_values(v);
    CHECK(bitwise_equal(f_norm(X, 42), f_norm(Y, 42)));
}

TEST_CASE("split f_norm appends test rows before transforming") {
    const EmbeddingSet train = gen_gaussian(60, 5, 0.0, 1).with_labels(std::vector<int>(60, 1));
    const EmbeddingSet test = gen_gaussian(20, 5, 0.0, 2);
    const DatasetSplit split(train, test);
    const DatasetSplit out = f_norm(split, 3);
    const EmbeddingSet joint = f_norm(concat(train, test), 3);
    REQUIRE(out.test.has_value());
    CHECK(out.train.rows() == 60);
    CHECK(out.test->rows() == 20);
    CHECK(out.train.labels() == train.labels());
    CHECK(bitwise_equal(concat(out.train, *out.test), joint));
}

TEST_CASE("transforms keep shape, labels and row order") {
    const EmbeddingSet X = oracle::random_set(30, 4, 6, 2.0).with_labels(std::vector<int>(30, 2));
    for (TransformKind kind : {TransformKind::unit_norm, TransformKind::embed_center,
                               TransformKind::embed_zscore, TransformKind::data_center,
                               TransformKind::f_norm, TransformKind::f_uniform}) {
        TransformSpec spec{kind, is_seeded(kind) ? std::optional<std::uint64_t>(1) : std::nullopt};
        const EmbeddingSet Y = apply_transform(X, spec);
        CHECK(Y.rows() == X.rows());
        CHECK(Y.cols() == X.cols());
        CHECK(Y.labels() == X.labels());
    }
    // Row-local: transforming one row alone gives the same row.
    const EmbeddingSet one = take_rows(X, std::vector<std::size_t>{7});
    check_close(take_rows(embed_zscore(X), std::vector<std::size_t>{7}), embed_zscore(one), 0.0);
}

TEST_CASE("pipelines run left to right") {
    const EmbeddingSet X = oracle::random_set(20, 6, 9, 4.0);
    const Pipeline cn = {{TransformKind::embed_center, std::nullopt}, {TransformKind::unit_norm, std::nullopt}};
    check_close(apply_pipeline(X, cn), unit_normalize(embed_center(X)), 0.0);
    const Pipeline bad = {{TransformKind::f_norm, std::nullopt}};
    CHECK_THROWS_AS(apply_pipeline(X, bad), InvalidArgument);
    const Pipeline bad2 = {{TransformKind::unit_norm, 3}};
    CHECK_THROWS_AS(apply_pipeline(X, bad2), InvalidArgument);
}

TEST_CASE("pipeline JSON") {
    const Pipeline p = parse_pipeline(std::string(R"([{"kind":"f_norm","seed":7},{"kind":"unit_norm"}])"));
    REQUIRE(p.size() == 2);
    CHECK(p[0] == TransformSpec{TransformKind::f_norm, 7});
    CHECK(p[1] == TransformSpec{TransformKind::unit_norm, std::nullopt});
    CHECK(parse_pipeline(to_json(p)) == p);

    const Pipeline defaulted = parse_pipeline(std::string(R"([{"kind":"f_uniform"}])"), 11);
    CHECK(defaulted[0].seed == std::optional<std::uint64_t>(11));
    CHECK_THROWS_AS(parse_pipeline(std::string(R"([{"kind":"f_uniform"}])")), InvalidArgument);
    CHECK_THROWS_AS(parse_pipeline(std::string(R"([{"kind":"whiten"}])")), InvalidArgument);
    CHECK_THROWS_AS(parse_pipeline(std::string(R"([{"kind":"unit_norm","seed":1}])")), InvalidArgument);
    CHECK_THROWS_AS(parse_pipeline(std::string("{")), InvalidArgument);
}

TEST_CASE("centering before unit normalization removes mean-induced hubness") {
    const std::size_t m = 2000, D = 100;
    const HubnessReport zero_mean = hubness_report(unit_normalize(gen_gaussian(m, D, 0.0, 1)), 10);
    const EmbeddingSet shifted = gen_gaussian(m, D, 1.0, 2);
    const HubnessReport normalized_only = hubness_report(unit_normalize(shifted), 10);
    const HubnessReport centered = hubness_report(unit_normalize(data_center(shifted)), 10);
    CHECK(normalized_only.robinhood > zero_mean.robinhood + 0.05);
    CHECK(std::abs(centered.robinhood - zero_mean.robinhood) <= 0.03);
}

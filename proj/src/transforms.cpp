#include "hubness/transforms.hpp"

#include "hubness/error.hpp"
#include "hubness/parallel.hpp"
#include "hubness/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hubness {

namespace {

struct KindName {
    TransformKind kind;
    std::string_view name;
};

constexpr KindName kKindNames[] = {
    {TransformKind::unit_norm, "unit_norm"},       {TransformKind::embed_center, "embed_center"},
    {TransformKind::embed_zscore, "embed_zscore"}, {TransformKind::data_center, "data_center"},
    {TransformKind::f_norm, "f_norm"},             {TransformKind::f_uniform, "f_uniform"},
};

template <typename RowFn>
EmbeddingSet map_rows(const EmbeddingSet& X, RowFn&& fn) {
    const std::size_t D = X.cols();
    std::vector<double> out(X.values().begin(), X.values().end());
    for (std::size_t i = 0; i < X.rows(); ++i) {
        fn(std::span<double>(out.data() + i * D, D), i);
    }
    return X.with_values(std::move(out));
}

double row_mean(std::span<const double> row) {
    return std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(row.size());
}

EmbeddingSet rank_normalize(const EmbeddingSet& X, TargetDistribution target, std::uint64_t seed) {
    if (X.rows() < 2) {
        throw InvalidArgument("rank matching needs at least two rows");
    }
    return unit_normalize(rank_match(X, target, seed));
}

DatasetSplit rank_normalize(const DatasetSplit& split, TargetDistribution target,
                            std::uint64_t seed) {
    return split.resplit(rank_normalize(split.stacked(), target, seed));
}

} // namespace

std::string_view to_string(TransformKind kind) {
    for (const auto& kn : kKindNames) {
        if (kn.kind == kind) return kn.name;
    }
    return "unknown";
}

TransformKind parse_transform_kind(std::string_view name) {
    for (const auto& kn : kKindNames) {
        if (kn.name == name) return kn.kind;
    }
    throw InvalidArgument("unknown transform kind '" + std::string(name) + "'");
}

bool is_seeded(TransformKind kind) {
    return kind == TransformKind::f_norm || kind == TransformKind::f_uniform;
}

void TransformSpec::check() const {
    if (is_seeded(kind) && !seed) {
        throw InvalidArgument(std::string(to_string(kind)) + " requires a seed");
    }
    if (!is_seeded(kind) && seed) {
        throw InvalidArgument(std::string(to_string(kind)) + " does not take a seed");
    }
}

EmbeddingSet unit_normalize(const EmbeddingSet& X) {
    return map_rows(X, [](std::span<double> row, std::size_t i) {
        double sq = 0.0;
        for (double v : row) sq += v * v;
        if (sq == 0.0) {
            throw InvalidArgument("cannot unit-normalize zero-norm row " + std::to_string(i));
        }
        const double norm = std::sqrt(sq);
        for (double& v : row) v /= norm;
    });
}

EmbeddingSet embed_center(const EmbeddingSet& X) {
    return map_rows(X, [](std::span<double> row, std::size_t) {
        const double mean = row_mean(row);
        for (double& v : row) v -= mean;
    });
}

EmbeddingSet embed_zscore(const EmbeddingSet& X) {
    return map_rows(X, [](std::span<double> row, std::size_t i) {
        const double mean = row_mean(row);
        double var = 0.0;
        for (double v : row) var += (v - mean) * (v - mean);
        var /= static_cast<double>(row.size());
        if (var == 0.0) {
            throw InvalidArgument("cannot z-score constant row " + std::to_string(i));
        }
        const double sd = std::sqrt(var);
        for (double& v : row) v = (v - mean) / sd;
    });
}

EmbeddingSet data_center(const EmbeddingSet& X) {
    const std::size_t D = X.cols();
    std::vector<double> mean(D, 0.0);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        auto row = X.row(i);
        for (std::size_t d = 0; d < D; ++d) mean[d] += row[d];
    }
    for (double& v : mean) v /= static_cast<double>(X.rows());
    return map_rows(X, [&](std::span<double> row, std::size_t) {
        for (std::size_t d = 0; d < D; ++d) row[d] -= mean[d];
    });
}

std::vector<double> assign_by_rank(std::span<const double> column,
                                   std::span<const double> sorted_samples) {
    if (column.size() != sorted_samples.size()) {
        throw InvalidArgument("column and sample sizes differ");
    }
    std::vector<std::size_t> order(column.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return column[a] < column[b]; });
    std::vector<double> out(column.size());
    for (std::size_t r = 0; r < order.size(); ++r) out[order[r]] = sorted_samples[r];
    return out;
}

EmbeddingSet rank_match(const EmbeddingSet& X, TargetDistribution target, std::uint64_t seed) {
    const std::size_t m = X.rows();
    const std::size_t D = X.cols();
    std::vector<double> out(m * D);
    parallel_for(D, 16, [&](std::size_t begin, std::size_t end) {
        std::vector<double> column(m);
        std::vector<double> samples(m);
        for (std::size_t d = begin; d < end; ++d) {
            Rng rng = Rng::substream(seed, d);
            for (double& s : samples) {
                s = target == TargetDistribution::standard_normal ? rng.normal()
                                                                  : rng.uniform(-1.0, 1.0);
            }
            std::sort(samples.begin(), samples.end());
            for (std::size_t i = 0; i < m; ++i) column[i] = X(i, d);
            const std::vector<double> assigned = assign_by_rank(column, samples);
            for (std::size_t i = 0; i < m; ++i) out[i * D + d] = assigned[i];
        }
    });
    return X.with_values(std::move(out));
}

EmbeddingSet f_norm(const EmbeddingSet& X, std::uint64_t seed) {
    return rank_normalize(X, TargetDistribution::standard_normal, seed);
}

DatasetSplit f_norm(const DatasetSplit& split, std::uint64_t seed) {
    return rank_normalize(split, TargetDistribution::standard_normal, seed);
}

EmbeddingSet f_uniform(const EmbeddingSet& X, std::uint64_t seed) {
    return rank_normalize(X, TargetDistribution::uniform_pm1, seed);
}

DatasetSplit f_uniform(const DatasetSplit& split, std::uint64_t seed) {
    return rank_normalize(split, TargetDistribution::uniform_pm1, seed);
}

EmbeddingSet apply_transform(const EmbeddingSet& X, const TransformSpec& spec) {
    spec.check();
    switch (spec.kind) {
    case TransformKind::unit_norm: return unit_normalize(X);
    case TransformKind::embed_center: return embed_center(X);
    case TransformKind::embed_zscore: return embed_zscore(X);
    case TransformKind::data_center: return data_center(X);
    case TransformKind::f_norm: return f_norm(X, *spec.seed);
    case TransformKind::f_uniform: return f_uniform(X, *spec.seed);
    }
    throw InvalidArgument("unknown transform kind");
}

EmbeddingSet apply_pipeline(const EmbeddingSet& X, const Pipeline& pipeline) {
    for (const auto& spec : pipeline) spec.check();
    EmbeddingSet current = X;
    for (const auto& spec : pipeline) current = apply_transform(current, spec);
    return current;
}

DatasetSplit apply_pipeline(const DatasetSplit& split, const Pipeline& pipeline) {
    return split.resplit(apply_pipeline(split.stacked(), pipeline));
}

} // namespace hubness

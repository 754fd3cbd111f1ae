#pragma once

#include "hubness/embedding.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hubness {

enum class TransformKind { unit_norm, embed_center, embed_zscore, data_center, f_norm, f_uniform };

std::string_view to_string(TransformKind kind);
/// Inverse of to_string; throws InvalidArgument on unknown names.
TransformKind parse_transform_kind(std::string_view name);
bool is_seeded(TransformKind kind);

/// One step of a post-hoc pipeline. Carries a seed exactly when the kind is f_norm or f_uniform.
struct TransformSpec {
    TransformKind kind;
    std::optional<std::uint64_t> seed;

    /// Throws InvalidArgument when the seed presence does not match the kind.
    void check() const;
    bool operator==(const TransformSpec&) const = default;
};

/// Steps run left to right, e.g. 'c,n' is {embed_center, unit_norm}.
using Pipeline = std::vector<TransformSpec>;

/// Scales every row to unit L2 norm. Throws InvalidArgument naming the first zero row.
EmbeddingSet unit_normalize(const EmbeddingSet& X);
/// Subtracts each row's own component mean.
EmbeddingSet embed_center(const EmbeddingSet& X);
/// Per-row z-score with the population standard deviation. Throws on constant rows.
EmbeddingSet embed_zscore(const EmbeddingSet& X);
/// Subtracts the per-dimension mean over all rows.
EmbeddingSet data_center(const EmbeddingSet& X);

enum class TargetDistribution { standard_normal, uniform_pm1 };

/// Replaces the column by `sorted_samples` placed in the column's rank order: the
/// smallest column entry receives the smallest sample and so on. Equal entries are
/// ranked by ascending row, so the map is a bijection. Sizes must match.
std::vector<double> assign_by_rank(std::span<const double> column,
                                   std::span<const double> sorted_samples);

/// The rank-matching half of f-norm / f-uniform, before row normalization. Column d
/// uses its own random stream derived from (seed, d).
EmbeddingSet rank_match(const EmbeddingSet& X, TargetDistribution target, std::uint64_t seed);

/// Rank-matches every dimension to standard normal samples, then unit-normalizes rows.
EmbeddingSet f_norm(const EmbeddingSet& X, std::uint64_t seed);
/// Same, applied to train and test stacked together and cut back apart afterwards.
DatasetSplit f_norm(const DatasetSplit& split, std::uint64_t seed);

/// As f_norm with samples uniform on [-1, 1].
EmbeddingSet f_uniform(const EmbeddingSet& X, std::uint64_t seed);
DatasetSplit f_uniform(const DatasetSplit& split, std::uint64_t seed);

EmbeddingSet apply_transform(const EmbeddingSet& X, const TransformSpec& spec);

/// Runs each step over the stacked train+test rows; row-local steps are unaffected by
/// the stacking, dataset-level steps (data_center, f_norm, f_uniform) see all rows.
DatasetSplit apply_pipeline(const DatasetSplit& split, const Pipeline& pipeline);
EmbeddingSet apply_pipeline(const EmbeddingSet& X, const Pipeline& pipeline);

} // namespace hubness

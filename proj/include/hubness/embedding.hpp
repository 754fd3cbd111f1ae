#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hubness {

/// A dense m x D matrix of embeddings with optional labels and row ids.
///
/// Values are stored row-major in double precision. The constructor enforces the
/// invariants (m >= 1, D >= 1, all entries finite, labels non-negative and one per row),
/// after which the set is immutable.
class EmbeddingSet {
public:
    EmbeddingSet(std::size_t rows, std::size_t cols, std::vector<double> values,
                 std::optional<std::vector<int>> labels = std::nullopt,
                 std::optional<std::vector<std::string>> ids = std::nullopt);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols_, cols_}; }
    double operator()(std::size_t i, std::size_t d) const { return values_[i * cols_ + d]; }
    std::span<const double> values() const { return values_; }

    bool has_labels() const { return labels_.has_value(); }
    const std::optional<std::vector<int>>& labels() const { return labels_; }
    /// Labels, or InvalidArgument if the set is unlabeled.
    const std::vector<int>& require_labels() const;
    const std::optional<std::vector<std::string>>& ids() const { return ids_; }

    /// Same rows/labels/ids with a replacement value matrix of identical shape.
    EmbeddingSet with_values(std::vector<double> values) const;
    EmbeddingSet with_labels(std::optional<std::vector<int>> labels) const;

    bool operator==(const EmbeddingSet&) const = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> values_;
    std::optional<std::vector<int>> labels_;
    std::optional<std::vector<std::string>> ids_;
};

/// Rows of `set` at the given positions, in that order.
EmbeddingSet take_rows(const EmbeddingSet& set, std::span<const std::size_t> rows);

/// Rows of `first` followed by rows of `second`. Labels/ids are kept only if both carry them.
EmbeddingSet concat(const EmbeddingSet& first, const EmbeddingSet& second);

/// A train set and an optional test set of the same dimensionality.
struct DatasetSplit {
    EmbeddingSet train;
    std::optional<EmbeddingSet> test;

    DatasetSplit(EmbeddingSet train_set, std::optional<EmbeddingSet> test_set = std::nullopt);

    std::size_t total_rows() const { return train.rows() + (test ? test->rows() : 0); }
    /// Train rows followed by test rows.
    EmbeddingSet stacked() const;
    /// Inverse of stacked(): cuts a transformed stacked set back into train/test.
    DatasetSplit resplit(const EmbeddingSet& stacked_set) const;
};

} // namespace hubness

#include "hubness/embedding.hpp"

#include "hubness/error.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace hubness {

EmbeddingSet::EmbeddingSet(std::size_t rows, std::size_t cols, std::vector<double> values,
                           std::optional<std::vector<int>> labels,
                           std::optional<std::vector<std::string>> ids)
    : rows_(rows), cols_(cols), values_(std::move(values)), labels_(std::move(labels)),
      ids_(std::move(ids)) {
    if (rows_ == 0 || cols_ == 0) {
        throw FormatError("embedding set must have at least one row and one column");
    }
    if (values_.size() != rows_ * cols_) {
        throw FormatError("value count " + std::to_string(values_.size()) + " does not match " +
                          std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t d = 0; d < cols_; ++d) {
            if (!std::isfinite(values_[i * cols_ + d])) {
                throw FormatError("non-finite value in column " + std::to_string(d + 1), i);
            }
        }
    }
    if (labels_) {
        if (labels_->size() != rows_) {
            // Report the first row lacking a label (or the first surplus label).
            throw FormatError("label count " + std::to_string(labels_->size()) +
                                  " does not match row count " + std::to_string(rows_),
                              std::min(labels_->size(), rows_));
        }
        for (std::size_t i = 0; i < rows_; ++i) {
            if ((*labels_)[i] < 0) {
                throw FormatError("negative label", i);
            }
        }
    }
    if (ids_ && ids_->size() != rows_) {
        throw FormatError("id count does not match row count");
    }
}

const std::vector<int>& EmbeddingSet::require_labels() const {
    if (!labels_) {
        throw InvalidArgument("embedding set has no labels");
    }
    return *labels_;
}

EmbeddingSet EmbeddingSet::with_values(std::vector<double> values) const {
    return EmbeddingSet(rows_, cols_, std::move(values), labels_, ids_);
}

EmbeddingSet EmbeddingSet::with_labels(std::optional<std::vector<int>> labels) const {
    return EmbeddingSet(rows_, cols_, values_, std::move(labels), ids_);
}

EmbeddingSet take_rows(const EmbeddingSet& set, std::span<const std::size_t> rows) {
    const std::size_t D = set.cols();
    std::vector<double> values;
    values.reserve(rows.size() * D);
    std::optional<std::vector<int>> labels;
    std::optional<std::vector<std::string>> ids;
    if (set.labels()) labels.emplace().reserve(rows.size());
    if (set.ids()) ids.emplace().reserve(rows.size());
    for (std::size_t r : rows) {
        if (r >= set.rows()) {
            throw InvalidArgument("row " + std::to_string(r) + " out of range");
        }
        auto src = set.row(r);
        values.insert(values.end(), src.begin(), src.end());
        if (labels) labels->push_back((*set.labels())[r]);
        if (ids) ids->push_back((*set.ids())[r]);
    }
    return EmbeddingSet(rows.size(), D, std::move(values), std::move(labels), std::move(ids));
}

EmbeddingSet concat(const EmbeddingSet& first, const EmbeddingSet& second) {
    if (first.cols() != second.cols()) {
        throw InvalidArgument("dimension mismatch: " + std::to_string(first.cols()) + " vs " +
                              std::to_string(second.cols()));
    }
    std::vector<double> values(first.values().begin(), first.values().end());
    values.insert(values.end(), second.values().begin(), second.values().end());

    std::optional<std::vector<int>> labels;
    if (first.labels() && second.labels()) {
        labels = *first.labels();
        labels->insert(labels->end(), second.labels()->begin(), second.labels()->end());
    }
    std::optional<std::vector<std::string>> ids;
    if (first.ids() && second.ids()) {
        ids = *first.ids();
        ids->insert(ids->end(), second.ids()->begin(), second.ids()->end());
    }
    return EmbeddingSet(first.rows() + second.rows(), first.cols(), std::move(values),
                        std::move(labels), std::move(ids));
}

DatasetSplit::DatasetSplit(EmbeddingSet train_set, std::optional<EmbeddingSet> test_set)
    : train(std::move(train_set)), test(std::move(test_set)) {
    if (test && test->cols() != train.cols()) {
        throw InvalidArgument("train and test dimensions differ: " + std::to_string(train.cols()) +
                              " vs " + std::to_string(test->cols()));
    }
}

EmbeddingSet DatasetSplit::stacked() const {
    return test ? concat(train, *test) : train;
}

DatasetSplit DatasetSplit::resplit(const EmbeddingSet& stacked_set) const {
    if (stacked_set.rows() != total_rows()) {
        throw InvalidArgument("stacked set has " + std::to_string(stacked_set.rows()) +
                              " rows, expected " + std::to_string(total_rows()));
    }
    const std::size_t D = stacked_set.cols();
    auto vals = stacked_set.values();
    auto cut = vals.begin() + static_cast<std::ptrdiff_t>(train.rows() * D);
    EmbeddingSet new_train(train.rows(), D, std::vector<double>(vals.begin(), cut), train.labels(),
                           train.ids());
    if (!test) {
        return DatasetSplit(std::move(new_train));
    }
    EmbeddingSet new_test(test->rows(), D, std::vector<double>(cut, vals.end()), test->labels(),
                          test->ids());
    return DatasetSplit(std::move(new_train), std::move(new_test));
}

} // namespace hubness

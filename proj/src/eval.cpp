#include "hubness/eval.hpp"

#include "hubness/error.hpp"
#include "hubness/knn.hpp"
#include "hubness/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <utility>

namespace hubness {

namespace {

NeighborGraph neighbors_for(const EmbeddingSet& query, std::span<const std::size_t> query_rows,
                            const EmbeddingSet& index, std::span<const std::size_t> index_rows,
                            std::size_t k, const DistanceSetup& setup) {
    if (setup.mode == DistanceMode::primary) {
        return knn_search(query, index, k, false);
    }
    if (!setup.model) {
        throw InvalidArgument("distance mode " + std::string(to_string(setup.mode)) +
                              " needs a fitted model");
    }
    const bool model_is_mp = std::holds_alternative<MpModel>(*setup.model);
    if (model_is_mp != (setup.mode == DistanceMode::mp)) {
        throw InvalidArgument("fitted model does not match distance mode");
    }
    return secondary_knn(query, take_rows(*setup.model, query_rows), index,
                         take_rows(*setup.model, index_rows), k, false);
}

std::vector<std::size_t> iota_rows(std::size_t offset, std::size_t count) {
    std::vector<std::size_t> rows(count);
    std::iota(rows.begin(), rows.end(), offset);
    return rows;
}

} // namespace

std::string_view to_string(DistanceMode mode) {
    switch (mode) {
    case DistanceMode::primary: return "primary";
    case DistanceMode::mp: return "mp";
    case DistanceMode::ls: return "ls";
    }
    return "unknown";
}

DistanceMode parse_distance_mode(std::string_view name) {
    if (name == "primary" || name == "none") return DistanceMode::primary;
    if (name == "mp") return DistanceMode::mp;
    if (name == "ls") return DistanceMode::ls;
    throw InvalidArgument("unknown distance mode '" + std::string(name) + "'");
}

std::optional<std::size_t> SampleSize::resolve(std::size_t n_points) const {
    switch (mode_) {
    case Mode::automatic: return default_mp_sample_size(n_points);
    case Mode::all: return std::nullopt;
    case Mode::count: return n_;
    }
    return std::nullopt;
}

DistanceSetup fit_distance(const EmbeddingSet& train, const EmbeddingSet* test, DistanceMode mode,
                           const SecondaryParams& params) {
    DistanceSetup setup;
    setup.mode = mode;
    if (mode == DistanceMode::primary) {
        return setup;
    }
    const EmbeddingSet all = test ? concat(train, *test) : train;
    if (mode == DistanceMode::mp) {
        setup.model = mp_fit(all, params.mp_sample_size.resolve(all.rows()), params.seed);
    } else {
        setup.model = ls_fit(all, params.ls_m);
    }
    return setup;
}

std::vector<std::size_t> default_k_grid() {
    return {1, 3, 5, 7, 9, 11, 15, 19, 25, 31, 39, 49};
}

std::vector<std::size_t> stratified_folds(std::span<const int> labels, std::size_t n_folds,
                                          std::uint64_t seed) {
    if (n_folds < 2) {
        throw InvalidArgument("need at least two folds");
    }
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

    std::vector<std::size_t> fold(labels.size());
    Rng rng(seed);
    std::size_t offset = 0;
    for (auto& [label, members] : by_class) {
        if (members.size() < n_folds) {
            throw InvalidArgument("class " + std::to_string(label) + " has " +
                                  std::to_string(members.size()) + " members, fewer than " +
                                  std::to_string(n_folds) + " folds");
        }
        for (std::size_t j = members.size() - 1; j > 0; --j) {
            std::swap(members[j], members[rng.below(j + 1)]);
        }
        // Rotating the start fold per class keeps total fold sizes balanced too.
        for (std::size_t p = 0; p < members.size(); ++p) {
            fold[members[p]] = (offset + p) % n_folds;
        }
        offset = (offset + members.size()) % n_folds;
    }
    return fold;
}

int vote(std::span<const std::size_t> neighbors, std::span<const int> labels, std::size_t k) {
    if (k == 0 || k > neighbors.size()) {
        throw InvalidArgument("vote needs 1 <= k <= neighbor count");
    }
    std::vector<std::pair<int, std::size_t>> tally;
    for (std::size_t j = 0; j < k; ++j) {
        const int label = labels[neighbors[j]];
        auto it = std::find_if(tally.begin(), tally.end(),
                               [&](const auto& t) { return t.first == label; });
        if (it == tally.end()) {
            tally.emplace_back(label, 1);
        } else {
            ++it->second;
        }
    }
    std::size_t best = 0;
    for (const auto& t : tally) best = std::max(best, t.second);
    // tally is in first-appearance order, so the first maximal entry is the nearest tied class.
    for (const auto& t : tally) {
        if (t.second == best) return t.first;
    }
    return tally.front().first;
}

SelectKResult select_k(const EmbeddingSet& train, std::span<const std::size_t> candidates,
                       std::size_t n_folds, std::uint64_t seed, const DistanceSetup& setup) {
    if (candidates.empty()) {
        throw InvalidArgument("candidate list is empty");
    }
    const std::vector<int>& labels = train.require_labels();
    SelectKResult result;
    result.candidates.assign(candidates.begin(), candidates.end());
    std::sort(result.candidates.begin(), result.candidates.end());
    result.candidates.erase(std::unique(result.candidates.begin(), result.candidates.end()),
                            result.candidates.end());
    if (result.candidates.front() == 0) {
        throw InvalidArgument("candidate k must be at least 1");
    }
    const std::size_t k_max = result.candidates.back();

    const std::vector<std::size_t> fold = stratified_folds(labels, n_folds, seed);
    result.per_fold_errors.assign(result.candidates.size(), std::vector<double>(n_folds, 0.0));
    for (std::size_t f = 0; f < n_folds; ++f) {
        std::vector<std::size_t> fit_rows;
        std::vector<std::size_t> val_rows;
        for (std::size_t i = 0; i < train.rows(); ++i) {
            (fold[i] == f ? val_rows : fit_rows).push_back(i);
        }
        const EmbeddingSet fit_set = take_rows(train, fit_rows);
        const EmbeddingSet val_set = take_rows(train, val_rows);
        const NeighborGraph graph = neighbors_for(val_set, val_rows, fit_set, fit_rows, k_max, setup);
        const std::vector<int>& fit_labels = *fit_set.labels();
        for (std::size_t c = 0; c < result.candidates.size(); ++c) {
            std::size_t wrong = 0;
            for (std::size_t q = 0; q < val_rows.size(); ++q) {
                if (vote(graph.neighbors(q), fit_labels, result.candidates[c]) != labels[val_rows[q]]) {
                    ++wrong;
                }
            }
            result.per_fold_errors[c][f] =
                static_cast<double>(wrong) / static_cast<double>(val_rows.size());
        }
    }

    result.mean_errors.resize(result.candidates.size());
    std::size_t best = 0;
    for (std::size_t c = 0; c < result.candidates.size(); ++c) {
        const auto& errs = result.per_fold_errors[c];
        result.mean_errors[c] = std::accumulate(errs.begin(), errs.end(), 0.0) /
                                static_cast<double>(n_folds);
        if (result.mean_errors[c] < result.mean_errors[best]) best = c;
    }
    result.chosen_k = result.candidates[best];
    return result;
}

std::vector<int> knn_classify(const EmbeddingSet& train, const EmbeddingSet& test, std::size_t k,
                              const DistanceSetup& setup) {
    const std::vector<int>& labels = train.require_labels();
    if (k < 1 || k > train.rows()) {
        throw InvalidArgument("k=" + std::to_string(k) + " out of range [1, " +
                              std::to_string(train.rows()) + "]");
    }
    if (setup.model && model_size(*setup.model) != train.rows() + test.rows()) {
        throw InvalidArgument("secondary model must cover train rows followed by test rows");
    }
    const NeighborGraph graph =
        neighbors_for(test, iota_rows(train.rows(), test.rows()), train, iota_rows(0, train.rows()),
                      k, setup);
    std::vector<int> predictions(test.rows());
    for (std::size_t q = 0; q < test.rows(); ++q) predictions[q] = vote(graph.neighbors(q), labels, k);
    return predictions;
}

double error_rate(std::span<const int> predictions, std::span<const int> truth) {
    if (predictions.size() != truth.size()) {
        throw InvalidArgument("prediction and truth lengths differ");
    }
    if (truth.empty()) {
        throw InvalidArgument("error rate of an empty prediction set");
    }
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) wrong += predictions[i] != truth[i];
    return static_cast<double>(wrong) / static_cast<double>(truth.size());
}

double mcnemar_p_value(std::size_t b, std::size_t c) {
    const std::size_t n = b + c;
    if (n == 0) {
        return 1.0;
    }
    // Binomial(n, 1/2) is symmetric, so P(X >= max) == P(X <= min).
    const std::size_t lo = std::min(b, c);
    const double log_half_n = -static_cast<double>(n) * std::log(2.0);
    const double log_n_fact = std::lgamma(static_cast<double>(n) + 1.0);
    double tail = 0.0;
    for (std::size_t i = 0; i <= lo; ++i) {
        const double log_term = log_n_fact - std::lgamma(static_cast<double>(i) + 1.0) -
                                std::lgamma(static_cast<double>(n - i) + 1.0) + log_half_n;
        tail += std::exp(log_term);
    }
    return std::min(1.0, 2.0 * tail);
}

McNemarResult mcnemar(std::span<const int> pred_a, std::span<const int> pred_b,
                      std::span<const int> truth) {
    if (pred_a.size() != truth.size() || pred_b.size() != truth.size()) {
        throw InvalidArgument("prediction and truth lengths differ");
    }
    McNemarResult result;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool a_ok = pred_a[i] == truth[i];
        const bool b_ok = pred_b[i] == truth[i];
        if (a_ok && !b_ok) ++result.b;
        if (!a_ok && b_ok) ++result.c;
    }
    result.p_value = mcnemar_p_value(result.b, result.c);
    return result;
}

EvalResult evaluate(const EmbeddingSet& train, const EmbeddingSet& test, const EvalOptions& options) {
    const std::vector<int>& truth = test.require_labels();
    const DistanceSetup setup = fit_distance(train, &test, options.mode, options.secondary);
    EvalResult result;
    result.mode = options.mode;
    result.selection = select_k(train, options.candidates, options.n_folds, options.seed, setup);
    result.chosen_k = result.selection.chosen_k;
    result.predictions = knn_classify(train, test, result.chosen_k, setup);
    result.error_rate = error_rate(result.predictions, truth);
    return result;
}

} // namespace hubness

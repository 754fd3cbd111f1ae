#pragma once

#include "hubness/embedding.hpp"
#include "hubness/secondary.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace hubness {

enum class DistanceMode { primary, mp, ls };

std::string_view to_string(DistanceMode mode);
/// Accepts "primary", "none", "mp", "ls".
DistanceMode parse_distance_mode(std::string_view name);

/// How many reference points Mutual Proximity samples per point.
class SampleSize {
public:
    /// Every point up to 10,000 points, else 1,000 (default_mp_sample_size).
    static SampleSize automatic() { return SampleSize(Mode::automatic, 0); }
    static SampleSize all() { return SampleSize(Mode::all, 0); }
    static SampleSize of(std::size_t n) { return SampleSize(Mode::count, n); }

    /// The sample size to hand to mp_fit for a data set of `n_points` (nullopt = all).
    std::optional<std::size_t> resolve(std::size_t n_points) const;

private:
    enum class Mode { automatic, all, count };
    SampleSize(Mode mode, std::size_t n) : mode_(mode), n_(n) {}
    Mode mode_;
    std::size_t n_;
};

struct SecondaryParams {
    SampleSize mp_sample_size = SampleSize::automatic();
    std::size_t ls_m = 5;
    std::uint64_t seed = 0;
};

/// The distance used for classification. For mp/ls, `model` covers the train rows
/// followed by the test rows.
struct DistanceSetup {
    DistanceMode mode = DistanceMode::primary;
    std::optional<SecondaryModel> model;
};

/// Fits the secondary model (if any) over train followed by `test` when given.
DistanceSetup fit_distance(const EmbeddingSet& train, const EmbeddingSet* test, DistanceMode mode,
                           const SecondaryParams& params = {});

std::vector<std::size_t> default_k_grid();

/// Fold id in [0, n_folds) per sample. Within every class fold sizes differ by at most
/// one. Throws InvalidArgument when a class has fewer than n_folds members.
std::vector<std::size_t> stratified_folds(std::span<const int> labels, std::size_t n_folds,
                                          std::uint64_t seed);

/// Majority label among the first k neighbors; vote ties go to the tied class that
/// appears first in neighbor order.
int vote(std::span<const std::size_t> neighbors, std::span<const int> labels, std::size_t k);

struct SelectKResult {
    std::size_t chosen_k = 0;
    /// Ascending, deduplicated candidate list the errors refer to.
    std::vector<std::size_t> candidates;
    /// per_fold_errors[c][f]: validation error of candidates[c] on fold f.
    std::vector<std::vector<double>> per_fold_errors;
    std::vector<double> mean_errors;
};

/// Stratified cross-validation over the labeled train set; returns the candidate with
/// the lowest mean validation error, smallest k on ties. For mp/ls the setup's model
/// rows [0, train.rows()) are used.
SelectKResult select_k(const EmbeddingSet& train, std::span<const std::size_t> candidates,
                       std::size_t n_folds, std::uint64_t seed, const DistanceSetup& setup = {});

/// k-NN majority-vote predictions for every test row.
std::vector<int> knn_classify(const EmbeddingSet& train, const EmbeddingSet& test, std::size_t k,
                              const DistanceSetup& setup = {});

double error_rate(std::span<const int> predictions, std::span<const int> truth);

struct McNemarResult {
    std::size_t b = 0; ///< A correct, B wrong
    std::size_t c = 0; ///< A wrong, B correct
    double p_value = 1.0;
};

/// Exact two-sided binomial McNemar test on the discordant pairs.
McNemarResult mcnemar(std::span<const int> pred_a, std::span<const int> pred_b,
                      std::span<const int> truth);
/// p-value for given discordant counts.
double mcnemar_p_value(std::size_t b, std::size_t c);

struct EvalOptions {
    std::vector<std::size_t> candidates = default_k_grid();
    std::size_t n_folds = 10;
    std::uint64_t seed = 0;
    DistanceMode mode = DistanceMode::primary;
    SecondaryParams secondary;
};

struct EvalResult {
    std::size_t chosen_k = 0;
    double error_rate = 0.0;
    std::vector<int> predictions;
    SelectKResult selection;
    DistanceMode mode = DistanceMode::primary;
};

/// Full protocol: fit the distance on train+test, choose k by cross-validation on
/// train, classify test, measure error.
EvalResult evaluate(const EmbeddingSet& train, const EmbeddingSet& test, const EvalOptions& options);

} // namespace hubness

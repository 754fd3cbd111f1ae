#pragma once

#include "hubness/embedding.hpp"
#include "hubness/knn.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace hubness {

/// Per-point Gaussian model of the distances from each point to the rest of the data.
struct MpModel {
    std::vector<double> mu;
    std::vector<double> sigma;
    /// Number of sampled reference points per fit; nullopt means all other points.
    std::optional<std::size_t> sample_size;
    std::uint64_t seed = 0;
    /// Points whose distance spread is exactly zero (e.g. all references equidistant).
    std::vector<std::size_t> degenerate;

    std::size_t size() const { return mu.size(); }
};

/// Per-point local scale: distance to the ls_m-th nearest neighbor.
struct LsModel {
    std::vector<double> sigma;
    /// 0 when unknown (models read back from a file).
    std::size_t ls_m = 5;
    /// Points with a zero scale (duplicates of their ls_m nearest neighbors).
    std::vector<std::size_t> degenerate;

    std::size_t size() const { return sigma.size(); }
};

using SecondaryModel = std::variant<MpModel, LsModel>;

std::size_t model_size(const SecondaryModel& model);
/// The model restricted to the given points, in that order.
SecondaryModel take_rows(const SecondaryModel& model, std::span<const std::size_t> rows);
/// Points [offset, offset + count) of the model.
SecondaryModel slice(const SecondaryModel& model, std::size_t offset, std::size_t count);

/// Sample size used when none is given: every point up to 10,000 points, else 1,000.
std::optional<std::size_t> default_mp_sample_size(std::size_t n_points);

/// Fits mean and population standard deviation of the Euclidean distances from each
/// point to a reference sample (self excluded).
///
/// With a sample size s, one shared set of s+1 reference rows is drawn without
/// replacement using `seed`; each point uses that set minus itself, truncated to s, in
/// ascending row order. s >= m-1 is the same as using every point.
MpModel mp_fit(const EmbeddingSet& X, std::optional<std::size_t> sample_size, std::uint64_t seed);

/// Mutual Proximity as a distance: 1 - S_x(d) * S_y(d), with S the Gaussian survival
/// function of each point's distance model. A zero sigma turns S into a step at mu.
double mp_distance(double d_xy, double mu_x, double sigma_x, double mu_y, double sigma_y);

/// sigma[i] = distance from i to its ls_m-th nearest neighbor (self excluded).
LsModel ls_fit(const EmbeddingSet& X, std::size_t ls_m);

/// Local scaling distance 1 - exp(-d^2 / (sigma_x * sigma_y)). Scales must be positive.
double ls_distance(double d_xy, double sigma_x, double sigma_y);

/// Exact k-NN under the secondary distance of `model`, which covers `points` row for row;
/// self excluded.
NeighborGraph secondary_knn(const EmbeddingSet& points, const SecondaryModel& model, std::size_t k);

/// Exact k-NN of `query` rows among `index` rows under a secondary distance. Each set
/// comes with the model parameters of its own rows (see take_rows/slice). Reported
/// distances are secondary distances.
NeighborGraph secondary_knn(const EmbeddingSet& query, const SecondaryModel& query_model,
                            const EmbeddingSet& index, const SecondaryModel& index_model,
                            std::size_t k, bool exclude_self);

/// Binary model files: "MPM1" or "LSM1", u32 n, then float32 per point
/// (mu, sigma pairs for MP; sigma for LS), all little-endian.
void save_model(const SecondaryModel& model, const std::filesystem::path& path);
SecondaryModel load_model(const std::filesystem::path& path);

} // namespace hubness

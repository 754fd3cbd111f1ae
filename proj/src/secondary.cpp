#include "hubness/secondary.hpp"

#include "hubness/error.hpp"
#include "hubness/parallel.hpp"
#include "hubness/random.hpp"
#include "knn_engine.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <fstream>
#include <iterator>
#include <numeric>
#include <string>

namespace hubness {

namespace {

// Lower-tail probability of a point's distance model, i.e. 1 - S(d).
double distance_cdf(double d, double mu, double sigma) {
    if (sigma == 0.0) {
        return d < mu ? 0.0 : 1.0;
    }
    return 0.5 * std::erfc((mu - d) / (sigma * std::numbers::sqrt2));
}

// 1 - S_x S_y evaluated as 1 - exp(log S_x + log S_y), which keeps full relative
// precision for near pairs (S close to 1) where the neighbor ranking is decided.
double mp_value(double d, double mu_x, double sigma_x, double mu_y, double sigma_y) {
    const double neg_log_sx = -std::log1p(-distance_cdf(d, mu_x, sigma_x));
    const double neg_log_sy = -std::log1p(-distance_cdf(d, mu_y, sigma_y));
    return -std::expm1(-(neg_log_sx + neg_log_sy));
}

// A zero scale makes every distinct point infinitely far and duplicates coincide.
double ls_value(double d, double sigma_x, double sigma_y) {
    const double scale = sigma_x * sigma_y;
    if (scale == 0.0) {
        return d > 0.0 ? 1.0 : 0.0;
    }
    return -std::expm1(-(d * d) / scale);
}

template <typename T>
std::vector<T> gather(const std::vector<T>& v, std::span<const std::size_t> rows) {
    std::vector<T> out;
    out.reserve(rows.size());
    for (std::size_t r : rows) {
        if (r >= v.size()) {
            throw InvalidArgument("model row " + std::to_string(r) + " out of range");
        }
        out.push_back(v[r]);
    }
    return out;
}

std::vector<std::size_t> zero_entries(const std::vector<double>& v) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0.0) out.push_back(i);
    }
    return out;
}

constexpr std::array<char, 4> kMpMagic = {'M', 'P', 'M', '1'};
constexpr std::array<char, 4> kLsMagic = {'L', 'S', 'M', '1'};

void put_u32(std::string& out, std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) out.push_back(static_cast<char>((v >> s) & 0xFFu));
}

std::uint32_t get_u32(const std::string& in, std::size_t at) {
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) {
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + b])) << (8 * b);
    }
    return v;
}

void put_f32(std::string& out, double v) { put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v))); }
double get_f32(const std::string& in, std::size_t at) { return std::bit_cast<float>(get_u32(in, at)); }

} // namespace

std::size_t model_size(const SecondaryModel& model) {
    return std::visit([](const auto& m) { return m.size(); }, model);
}

SecondaryModel take_rows(const SecondaryModel& model, std::span<const std::size_t> rows) {
    if (const auto* mp = std::get_if<MpModel>(&model)) {
        MpModel out;
        out.mu = gather(mp->mu, rows);
        out.sigma = gather(mp->sigma, rows);
        out.sample_size = mp->sample_size;
        out.seed = mp->seed;
        out.degenerate = zero_entries(out.sigma);
        return out;
    }
    const auto& ls = std::get<LsModel>(model);
    LsModel out;
    out.sigma = gather(ls.sigma, rows);
    out.ls_m = ls.ls_m;
    out.degenerate = zero_entries(out.sigma);
    return out;
}

SecondaryModel slice(const SecondaryModel& model, std::size_t offset, std::size_t count) {
    if (offset + count > model_size(model)) {
        throw InvalidArgument("model slice out of range");
    }
    std::vector<std::size_t> rows(count);
    std::iota(rows.begin(), rows.end(), offset);
    return take_rows(model, rows);
}

std::optional<std::size_t> default_mp_sample_size(std::size_t n_points) {
    if (n_points <= 10000) return std::nullopt;
    return 1000;
}

MpModel mp_fit(const EmbeddingSet& X, std::optional<std::size_t> sample_size, std::uint64_t seed) {
    const std::size_t m = X.rows();
    if (m < 2) {
        throw InvalidArgument("mutual proximity needs at least two points");
    }
    if (sample_size && *sample_size < 2) {
        throw InvalidArgument("mutual proximity sample size must be at least 2");
    }

    const bool use_all = !sample_size || *sample_size >= m - 1;
    const std::size_t refs_per_point = use_all ? m - 1 : *sample_size;
    std::vector<std::size_t> pool(m);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    if (!use_all) {
        // Partial Fisher-Yates: the first s+1 slots become a uniform sample.
        Rng rng(seed);
        const std::size_t draw = refs_per_point + 1;
        for (std::size_t j = 0; j < draw; ++j) {
            std::swap(pool[j], pool[j + rng.below(m - j)]);
        }
        pool.resize(draw);
        std::sort(pool.begin(), pool.end());
    }

    MpModel model;
    model.sample_size = sample_size;
    model.seed = seed;
    model.mu.resize(m);
    model.sigma.resize(m);
    const std::size_t D = X.cols();
    parallel_for(m, 64, [&](std::size_t begin, std::size_t end) {
        std::vector<double> dist;
        dist.reserve(refs_per_point);
        for (std::size_t i = begin; i < end; ++i) {
            dist.clear();
            for (std::size_t r : pool) {
                if (r == i) continue;
                if (dist.size() == refs_per_point) break;
                dist.push_back(std::sqrt(detail::squared_distance(X.row(i).data(), X.row(r).data(), D)));
            }
            const double n = static_cast<double>(dist.size());
            const double mean = std::accumulate(dist.begin(), dist.end(), 0.0) / n;
            double var = 0.0;
            for (double d : dist) var += (d - mean) * (d - mean);
            model.mu[i] = mean;
            model.sigma[i] = std::sqrt(var / n);
        }
    });
    model.degenerate = zero_entries(model.sigma);
    return model;
}

double mp_distance(double d_xy, double mu_x, double sigma_x, double mu_y, double sigma_y) {
    if (d_xy < 0 || mu_x < 0 || mu_y < 0 || sigma_x < 0 || sigma_y < 0) {
        throw InvalidArgument("mp_distance arguments must be non-negative");
    }
    return mp_value(d_xy, mu_x, sigma_x, mu_y, sigma_y);
}

LsModel ls_fit(const EmbeddingSet& X, std::size_t ls_m) {
    if (ls_m < 1 || ls_m > X.rows() - 1) {
        throw InvalidArgument("ls_m=" + std::to_string(ls_m) + " out of range [1, " +
                              std::to_string(X.rows() - 1) + "]");
    }
    const NeighborGraph graph = knn_search(X, ls_m);
    LsModel model;
    model.ls_m = ls_m;
    model.sigma.resize(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) model.sigma[i] = graph.neighbor_distances(i).back();
    model.degenerate = zero_entries(model.sigma);
    return model;
}

double ls_distance(double d_xy, double sigma_x, double sigma_y) {
    if (!(sigma_x > 0) || !(sigma_y > 0)) {
        throw InvalidArgument("local scaling requires positive scales");
    }
    if (d_xy < 0) {
        throw InvalidArgument("distance must be non-negative");
    }
    return ls_value(d_xy, sigma_x, sigma_y);
}

NeighborGraph secondary_knn(const EmbeddingSet& query, const SecondaryModel& query_model,
                            const EmbeddingSet& index, const SecondaryModel& index_model,
                            std::size_t k, bool exclude_self) {
    if (model_size(query_model) != query.rows() || model_size(index_model) != index.rows()) {
        throw InvalidArgument("secondary model does not cover the given points");
    }
    if (query_model.index() != index_model.index()) {
        throw InvalidArgument("query and index use different secondary models");
    }
    auto identity = [](double v) { return v; };
    if (const auto* qmp = std::get_if<MpModel>(&query_model)) {
        const auto& imp = std::get<MpModel>(index_model);
        return detail::blocked_knn(
            query, index, k, exclude_self,
            [&](double sq, std::size_t q, std::size_t i) {
                return mp_value(std::sqrt(sq), qmp->mu[q], qmp->sigma[q], imp.mu[i], imp.sigma[i]);
            },
            identity);
    }
    const auto& qls = std::get<LsModel>(query_model);
    const auto& ils = std::get<LsModel>(index_model);
    return detail::blocked_knn(
        query, index, k, exclude_self,
        [&](double sq, std::size_t q, std::size_t i) {
            return ls_value(std::sqrt(sq), qls.sigma[q], ils.sigma[i]);
        },
        identity);
}

NeighborGraph secondary_knn(const EmbeddingSet& points, const SecondaryModel& model, std::size_t k) {
    return secondary_knn(points, model, points, model, k, true);
}

void save_model(const SecondaryModel& model, const std::filesystem::path& path) {
    std::string out;
    const std::size_t n = model_size(model);
    if (const auto* mp = std::get_if<MpModel>(&model)) {
        out.append(kMpMagic.data(), 4);
        put_u32(out, static_cast<std::uint32_t>(n));
        for (std::size_t i = 0; i < n; ++i) {
            put_f32(out, mp->mu[i]);
            put_f32(out, mp->sigma[i]);
        }
    } else {
        const auto& ls = std::get<LsModel>(model);
        out.append(kLsMagic.data(), 4);
        put_u32(out, static_cast<std::uint32_t>(n));
        for (double s : ls.sigma) put_f32(out, s);
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) {
        throw IoError("write failed for " + path.string());
    }
}

SecondaryModel load_model(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open " + path.string());
    }
    const std::string in((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (in.size() < 8) {
        throw FormatError("malformed model header");
    }
    const bool is_mp = std::equal(kMpMagic.begin(), kMpMagic.end(), in.begin());
    const bool is_ls = std::equal(kLsMagic.begin(), kLsMagic.end(), in.begin());
    if (!is_mp && !is_ls) {
        throw FormatError("unknown model magic");
    }
    const std::size_t n = get_u32(in, 4);
    const std::size_t per_point = is_mp ? 8 : 4;
    if (in.size() != 8 + n * per_point) {
        throw FormatError("model payload size does not match n=" + std::to_string(n));
    }
    if (is_mp) {
        MpModel model;
        model.mu.resize(n);
        model.sigma.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            model.mu[i] = get_f32(in, 8 + 8 * i);
            model.sigma[i] = get_f32(in, 12 + 8 * i);
            if (!(model.mu[i] >= 0) || !(model.sigma[i] >= 0) || !std::isfinite(model.mu[i]) ||
                !std::isfinite(model.sigma[i])) {
                throw FormatError("invalid distance parameters", i);
            }
        }
        model.degenerate = zero_entries(model.sigma);
        return model;
    }
    LsModel model;
    model.ls_m = 0;
    model.sigma.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        model.sigma[i] = get_f32(in, 8 + 4 * i);
        if (!(model.sigma[i] >= 0) || !std::isfinite(model.sigma[i])) {
            throw FormatError("invalid local scale", i);
        }
    }
    model.degenerate = zero_entries(model.sigma);
    return model;
}

} // namespace hubness

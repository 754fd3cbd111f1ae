#include "hubness/synth.hpp"

#include "hubness/error.hpp"
#include "hubness/random.hpp"

#include <string>
#include <vector>

namespace hubness {

namespace {

void check_shape(std::size_t m, std::size_t dim) {
    if (m < 1 || dim < 1) {
        throw InvalidArgument("generated sets need m >= 1 and D >= 1");
    }
}

template <typename Draw>
EmbeddingSet fill(std::size_t m, std::size_t dim, std::uint64_t seed, Draw&& draw) {
    check_shape(m, dim);
    Rng rng(seed);
    std::vector<double> values(m * dim);
    for (double& v : values) v = draw(rng);
    return EmbeddingSet(m, dim, std::move(values));
}

} // namespace

std::string_view to_string(GenKind kind) {
    switch (kind) {
    case GenKind::gaussian: return "gaussian";
    case GenKind::shifted_gaussian: return "shifted_gaussian";
    case GenKind::uniform: return "uniform";
    case GenKind::f_dist: return "f_dist";
    case GenKind::labeled_mixture: return "labeled_mixture";
    }
    return "unknown";
}

GenKind parse_gen_kind(std::string_view name) {
    for (GenKind k : {GenKind::gaussian, GenKind::shifted_gaussian, GenKind::uniform, GenKind::f_dist,
                      GenKind::labeled_mixture}) {
        if (to_string(k) == name) return k;
    }
    throw InvalidArgument("unknown generator '" + std::string(name) + "'");
}

EmbeddingSet gen_gaussian(std::size_t m, std::size_t dim, double mean, std::uint64_t seed) {
    return fill(m, dim, seed, [mean](Rng& rng) { return mean + rng.normal(); });
}

EmbeddingSet gen_uniform(std::size_t m, std::size_t dim, std::uint64_t seed) {
    return fill(m, dim, seed, [](Rng& rng) { return rng.uniform(-1.0, 1.0); });
}

EmbeddingSet gen_f_dist(std::size_t m, std::size_t dim, double d1, double d2, std::uint64_t seed) {
    if (!(d1 > 0) || !(d2 > 0)) {
        throw InvalidArgument("F degrees of freedom must be positive");
    }
    return fill(m, dim, seed, [d1, d2](Rng& rng) {
        const double num = rng.chi_square(d1) / d1;
        double den = 0.0;
        while (den == 0.0) den = rng.chi_square(d2) / d2;
        return num / den;
    });
}

EmbeddingSet gen_labeled_mixture(std::size_t m, std::size_t dim, std::size_t classes,
                                 double separation, std::uint64_t seed) {
    check_shape(m, dim);
    if (classes < 2 || classes > dim) {
        throw InvalidArgument("labeled mixture needs 2 <= classes <= D");
    }
    if (m % classes != 0) {
        throw InvalidArgument("m must be divisible by the class count");
    }
    Rng rng(seed);
    std::vector<double> values(m * dim);
    std::vector<int> labels(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t c = i % classes;
        labels[i] = static_cast<int>(c);
        for (std::size_t d = 0; d < dim; ++d) {
            values[i * dim + d] = rng.normal() + (d == c ? separation : 0.0);
        }
    }
    return EmbeddingSet(m, dim, std::move(values), std::move(labels));
}

EmbeddingSet generate(const GenSpec& spec) {
    switch (spec.kind) {
    case GenKind::gaussian: return gen_gaussian(spec.m, spec.dim, 0.0, spec.seed);
    case GenKind::shifted_gaussian: return gen_gaussian(spec.m, spec.dim, spec.mean, spec.seed);
    case GenKind::uniform: return gen_uniform(spec.m, spec.dim, spec.seed);
    case GenKind::f_dist: return gen_f_dist(spec.m, spec.dim, spec.d1, spec.d2, spec.seed);
    case GenKind::labeled_mixture:
        return gen_labeled_mixture(spec.m, spec.dim, spec.classes, spec.separation, spec.seed);
    }
    throw InvalidArgument("unknown generator");
}

} // namespace hubness

#pragma once

#include "hubness/embedding.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace hubness {

enum class GenKind { gaussian, shifted_gaussian, uniform, f_dist, labeled_mixture };

std::string_view to_string(GenKind kind);
GenKind parse_gen_kind(std::string_view name);

/// Parameters for one synthetic data set. Fields not used by `kind` are ignored.
struct GenSpec {
    GenKind kind = GenKind::gaussian;
    std::size_t m = 0;
    std::size_t dim = 0;
    double mean = 0.0;       ///< gaussian / shifted_gaussian: mean of every coordinate
    double d1 = 5.0;         ///< f_dist numerator degrees of freedom
    double d2 = 10.0;        ///< f_dist denominator degrees of freedom
    std::size_t classes = 2; ///< labeled_mixture
    double separation = 0.0; ///< labeled_mixture: distance of each class center from the origin
    std::uint64_t seed = 0;
};

/// i.i.d. N(mean, 1) entries.
EmbeddingSet gen_gaussian(std::size_t m, std::size_t dim, double mean, std::uint64_t seed);
/// i.i.d. uniform entries on [-1, 1].
EmbeddingSet gen_uniform(std::size_t m, std::size_t dim, std::uint64_t seed);
/// i.i.d. F(d1, d2) entries as (chi2(d1)/d1) / (chi2(d2)/d2).
EmbeddingSet gen_f_dist(std::size_t m, std::size_t dim, double d1, double d2, std::uint64_t seed);
/// Equal-sized unit-variance spherical clusters centered at separation * e_c; row i has
/// label i % classes. Requires 2 <= classes <= dim and m divisible by classes.
EmbeddingSet gen_labeled_mixture(std::size_t m, std::size_t dim, std::size_t classes,
                                 double separation, std::uint64_t seed);

EmbeddingSet generate(const GenSpec& spec);

} // namespace hubness

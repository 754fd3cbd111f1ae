#include "hubness/validate.hpp"

#include <algorithm>
#include <numeric>

namespace hubness {

const char* to_string(Finding::Kind kind) {
    switch (kind) {
    case Finding::Kind::duplicate_rows: return "duplicate_rows";
    case Finding::Kind::zero_norm_row: return "zero_norm_row";
    case Finding::Kind::constant_dimension: return "constant_dimension";
    }
    return "unknown";
}

std::vector<Finding> validate(const EmbeddingSet& set) {
    std::vector<Finding> findings;
    const std::size_t m = set.rows();
    const std::size_t D = set.cols();

    // Exact duplicates: sort row indices lexicographically by content, then scan runs.
    // -0.0 and 0.0 compare equal here, matching the distance they induce.
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto row_less = [&](std::size_t a, std::size_t b) {
        auto ra = set.row(a);
        auto rb = set.row(b);
        return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    };
    std::stable_sort(order.begin(), order.end(), row_less);
    for (std::size_t start = 0; start < m;) {
        std::size_t end = start + 1;
        while (end < m && !row_less(order[start], order[end])) ++end;
        if (end - start > 1) {
            std::vector<std::size_t> group(order.begin() + static_cast<std::ptrdiff_t>(start),
                                           order.begin() + static_cast<std::ptrdiff_t>(end));
            std::sort(group.begin(), group.end());
            findings.push_back({Finding::Kind::duplicate_rows, group,
                                std::to_string(group.size()) + " identical rows"});
        }
        start = end;
    }
    std::sort(findings.begin(), findings.end(),
              [](const Finding& a, const Finding& b) { return a.indices.front() < b.indices.front(); });

    for (std::size_t i = 0; i < m; ++i) {
        auto r = set.row(i);
        if (std::all_of(r.begin(), r.end(), [](double v) { return v == 0.0; })) {
            findings.push_back({Finding::Kind::zero_norm_row, {i}, "row has zero norm"});
        }
    }

    std::vector<std::size_t> constant;
    for (std::size_t d = 0; m > 1 && d < D; ++d) {
        const double first = set(0, d);
        bool same = true;
        for (std::size_t i = 1; i < m && same; ++i) same = set(i, d) == first;
        if (same) constant.push_back(d);
    }
    if (!constant.empty()) {
        findings.push_back({Finding::Kind::constant_dimension, constant,
                            std::to_string(constant.size()) + " constant dimensions"});
    }
    return findings;
}

} // namespace hubness

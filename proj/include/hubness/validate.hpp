#pragma once

#include "hubness/embedding.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace hubness {

struct Finding {
    enum class Kind { duplicate_rows, zero_norm_row, constant_dimension };

    Kind kind;
    /// Row indices for duplicate_rows / zero_norm_row, column indices for constant_dimension.
    std::vector<std::size_t> indices;
    std::string message;
};

const char* to_string(Finding::Kind kind);

/// Reports degenerate structure: groups of exactly equal rows, all-zero rows and
/// dimensions that are constant across every row. Clean data yields an empty list.
std::vector<Finding> validate(const EmbeddingSet& set);

} // namespace hubness

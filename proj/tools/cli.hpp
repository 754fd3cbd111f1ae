#pragma once

#include "hubness/metrics.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hubness::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kInternalError = 1, kUsageError = 2 };

/// Entry point for the `hubness` tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct Fig2Config {
    std::size_t m = 10000;
    std::vector<std::size_t> dims = {3, 20, 768};
    std::size_t k = 10;
    std::uint64_t seed = 0;
    double d1 = 5.0;
    double d2 = 10.0;
    SelfMatch self = SelfMatch::include;
};

/// Reference value and allowed deviation for one statistic of one panel.
struct Fig2Target {
    double value = 0.0;
    double tolerance = 0.0;
    bool relative = false;

    bool accepts(double measured) const;
};

struct Fig2Row {
    char panel = 'a'; ///< a: normal, b: normal + unit_norm, c: F, d: F + f_norm
    std::size_t dim = 0;
    HubnessReport report;
    std::optional<Fig2Target> skewness_target;
    std::optional<Fig2Target> robinhood_target;
};

/// Targets for the synthetic panels at D in {3, 20, 768}; panel c values are
/// informational only (no tolerance is asserted on raw F data).
std::optional<Fig2Target> fig2_skewness_target(char panel, std::size_t dim);
std::optional<Fig2Target> fig2_robinhood_target(char panel, std::size_t dim);

/// Generates the four synthetic panels for every dimension and measures hubness.
std::vector<Fig2Row> reproduce_fig2(const Fig2Config& config);

} // namespace hubness::cli

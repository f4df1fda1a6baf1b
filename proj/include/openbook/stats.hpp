#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "openbook/measures.hpp"

namespace openbook {

class UndefinedStatistic : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Observations (x_i, y_i) tagged with the position they came from.
struct PairedSample {
    std::vector<std::string> ids;
    std::vector<double> x;
    std::vector<double> y;

    std::size_t size() const { return x.size(); }
    void add(std::string id, double xi, double yi);

    /// Copy without the rows whose id is listed.
    PairedSample excluding(const std::set<std::string>& ids_to_drop) const;
};

/// Product-moment correlation. Throws UndefinedStatistic for n < 2 or a
/// constant column.
double pearson(std::span<const double> x, std::span<const double> y);
double pearson(const PairedSample& s);

using PairedStatistic = std::function<double(std::span<const double>, std::span<const double>)>;

struct BootstrapResult {
    double estimate = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    std::size_t resamples = 0;
    std::uint64_t seed = 0;
    std::size_t degenerate = 0; // resamples skipped because the statistic was undefined
};

inline constexpr std::string_view kBootstrapRng = "mt19937_64";
inline constexpr std::size_t kMinResamples = 1000;

/// Percentile bootstrap: resample n pairs with replacement, evaluate the
/// statistic, and read the (1 - level)/2 and (1 + level)/2 quantiles with
/// linear interpolation between order statistics. Deterministic in `seed`.
BootstrapResult bootstrap_ci(const PairedSample& s, const PairedStatistic& statistic, std::size_t resamples,
                             std::uint64_t seed, double level = 0.95);

/// Draws uniformly from [0, n) without modulo bias.
std::uint64_t uniform_index(std::uint64_t n, auto& engine) {
    const std::uint64_t range = engine.max() - engine.min();
    const std::uint64_t limit = range - (range % n + 1) % n;
    for (;;) {
        const std::uint64_t v = engine() - engine.min();
        if (v <= limit) return v % n;
    }
}

/// Linear-interpolation quantile of sorted data (numpy's default rule).
double quantile_sorted(std::span<const double> sorted, double q);

/// ln(count) = intercept + slope * rank, fitted by ordinary least squares.
struct FitResult {
    double intercept = 0.0;
    double slope = 0.0;
    double r_squared = 0.0;
};

/// counts[i] is the game count at rank i + 1. Non-positive counts are
/// skipped; at least three usable points are required.
FitResult exp_fit(std::span<const double> counts);

struct ColumnSummary {
    double mean = 0.0;
    double std = 0.0; // sample standard deviation, n - 1 denominator
    std::size_t n = 0;
};

/// Mean and sample standard deviation. Throws UndefinedStatistic for n < 2.
ColumnSummary summarize(std::span<const double> values);

struct ComparisonSummary {
    std::optional<ColumnSummary> m_measure;
    std::optional<ColumnSummary> max_m;
    std::optional<ColumnSummary> jsd;
    std::optional<ColumnSummary> overlap;
};

/// Per-column summary over the defined cells of each column.
ComparisonSummary summarize(std::span<const ComparisonRow> rows);

} // namespace openbook

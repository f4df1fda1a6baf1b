#include "openbook/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace openbook {

void PairedSample::add(std::string id, double xi, double yi) {
    ids.push_back(std::move(id));
    x.push_back(xi);
    y.push_back(yi);
}

PairedSample PairedSample::excluding(const std::set<std::string>& ids_to_drop) const {
    PairedSample out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const std::string id = i < ids.size() ? ids[i] : std::string();
        if (!ids_to_drop.contains(id)) out.add(id, x[i], y[i]);
    }
    return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("paired columns differ in length");
    const std::size_t n = x.size();
    if (n < 2) throw UndefinedStatistic("correlation needs at least two pairs");
    auto constant = [](std::span<const double> v) {
        return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
    };
    if (constant(x) || constant(y)) throw UndefinedStatistic("correlation is undefined for a constant column");
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) throw UndefinedStatistic("correlation is undefined for a constant column");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double pearson(const PairedSample& s) { return pearson(s.x, s.y); }

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw UndefinedStatistic("quantile of empty data");
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

BootstrapResult bootstrap_ci(const PairedSample& s, const PairedStatistic& statistic, std::size_t resamples,
                             std::uint64_t seed, double level) {
    const std::size_t n = s.size();
    if (n < 3) throw UndefinedStatistic("bootstrap needs at least three pairs");
    if (resamples < kMinResamples) {
        throw std::invalid_argument("bootstrap needs at least " + std::to_string(kMinResamples) + " resamples");
    }
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("confidence level must lie in (0, 1)");

    BootstrapResult result;
    result.estimate = statistic(s.x, s.y);
    result.resamples = resamples;
    result.seed = seed;

    std::mt19937_64 engine(seed);
    std::vector<double> xs(n);
    std::vector<double> ys(n);
    std::vector<double> values;
    values.reserve(resamples);
    for (std::size_t r = 0; r < resamples; ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto k = static_cast<std::size_t>(uniform_index(n, engine));
            xs[i] = s.x[k];
            ys[i] = s.y[k];
        }
        try {
            values.push_back(statistic(xs, ys));
        } catch (const UndefinedStatistic&) {
            ++result.degenerate;
        }
    }
    if (result.degenerate * 2 > resamples) {
        throw UndefinedStatistic("more than half of the bootstrap resamples were degenerate");
    }
    std::sort(values.begin(), values.end());
    result.lower = quantile_sorted(values, (1.0 - level) / 2.0);
    result.upper = quantile_sorted(values, (1.0 + level) / 2.0);
    return result;
}

FitResult exp_fit(std::span<const double> counts) {
    std::vector<double> ranks;
    std::vector<double> logs;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] >= 1.0) {
            ranks.push_back(static_cast<double>(i + 1));
            logs.push_back(std::log(counts[i]));
        }
    }
    if (ranks.size() < 3) throw UndefinedStatistic("exponential fit needs at least three ranks with a count");

    const double n = static_cast<double>(ranks.size());
    double mr = 0.0;
    double ml = 0.0;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        mr += ranks[i];
        ml += logs[i];
    }
    mr /= n;
    ml /= n;
    double srl = 0.0;
    double srr = 0.0;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        srl += (ranks[i] - mr) * (logs[i] - ml);
        srr += (ranks[i] - mr) * (ranks[i] - mr);
    }

    FitResult fit;
    fit.slope = srl / srr;
    fit.intercept = ml - fit.slope * mr;
    const double r = pearson(ranks, logs);
    fit.r_squared = r * r;
    return fit;
}

ColumnSummary summarize(std::span<const double> values) {
    if (values.size() < 2) throw UndefinedStatistic("summary needs at least two values");
    ColumnSummary s;
    s.n = values.size();
    for (double v : values) s.mean += v;
    s.mean /= static_cast<double>(s.n);
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
    return s;
}

ComparisonSummary summarize(std::span<const ComparisonRow> rows) {
    auto column = [&](std::optional<double> ComparisonRow::*field) -> std::optional<ColumnSummary> {
        std::vector<double> values;
        for (const auto& r : rows) {
            if (r.*field) values.push_back(*(r.*field));
        }
        if (values.size() < 2) return std::nullopt;
        return summarize(values);
    };
    return {column(&ComparisonRow::m_measure), column(&ComparisonRow::max_m), column(&ComparisonRow::jsd),
            column(&ComparisonRow::overlap)};
}

} // namespace openbook

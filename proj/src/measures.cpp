#include "openbook/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace openbook {

namespace {

void require_nonempty(const RankedMoveList& a, const RankedMoveList& b, const char* what) {
    if (a.empty() && b.empty()) throw UndefinedMeasure(std::string(what) + " is undefined for two empty lists");
}

double log2_of(double x) { return std::log(x) / std::numbers::ln2; }

} // namespace

double overlap(const RankedMoveList& a, const RankedMoveList& b) {
    require_nonempty(a, b, "overlap");
    std::size_t shared = 0;
    for (const auto& e : a) {
        if (b.find(e.san())) ++shared;
    }
    const std::size_t united = a.size() + b.size() - shared;
    return static_cast<double>(shared) / static_cast<double>(united);
}

RankAssignment assign_reciprocal_ranks(const RankedMoveList& a, const RankedMoveList& b) {
    const int absent_a = static_cast<int>(a.size()) + 1;
    const int absent_b = static_cast<int>(b.size()) + 1;
    RankAssignment out;
    out.reserve(a.size() + b.size());
    for (const auto& e : a) {
        const RankedMove* other = b.find(e.san());
        out.push_back({e.san(), e.rank, other ? other->rank : absent_b});
    }
    for (const auto& e : b) {
        if (!a.find(e.san())) out.push_back({e.san(), absent_a, e.rank});
    }
    return out;
}

double footrule_distance(const RankAssignment& ranks) {
    // Summed in SAN order so that swapping the two lists gives the same bits.
    std::vector<const RankPair*> order;
    order.reserve(ranks.size());
    for (const auto& r : ranks) order.push_back(&r);
    std::sort(order.begin(), order.end(), [](const RankPair* x, const RankPair* y) { return x->san < y->san; });
    double sum = 0.0;
    for (const RankPair* r : order) sum += std::abs(r->reciprocal_first() - r->reciprocal_second());
    return sum;
}

double max_m(std::size_t k1, std::size_t k2) {
    if (k1 == 0 && k2 == 0) throw UndefinedMeasure("maxM is undefined for two empty lists");
    auto half = [](std::size_t k, std::size_t other) {
        const double absent = 1.0 / static_cast<double>(other + 1);
        double sum = 0.0;
        for (std::size_t i = 1; i <= k; ++i) sum += std::abs(1.0 / static_cast<double>(i) - absent);
        return sum;
    };
    return half(k1, k2) + half(k2, k1);
}

double m_measure(const RankedMoveList& a, const RankedMoveList& b) {
    require_nonempty(a, b, "M-measure");
    const double bound = max_m(a.size(), b.size());
    // A single move against an empty list: both distance and bound vanish.
    if (bound <= 0.0) throw UndefinedMeasure("M-measure is undefined when maxM is zero");
    // Disjoint lists sum to the bound in a different order; clamp the rounding.
    return std::clamp(1.0 - footrule_distance(assign_reciprocal_ranks(a, b)) / bound, 0.0, 1.0);
}

std::optional<double> MoveDistribution::probability(const std::string& san) const {
    for (const auto& m : masses) {
        if (m.san == san) return m.probability;
    }
    return std::nullopt;
}

MoveDistribution normalize_counts(const RankedMoveList& a, std::uint64_t min_games) {
    MoveDistribution d;
    for (const auto& e : a) {
        if (e.games() >= min_games && e.games() > 0) d.total_games += e.games();
    }
    if (d.total_games == 0) {
        throw UndefinedMeasure("no move has at least " + std::to_string(min_games) + " games");
    }
    const double total = static_cast<double>(d.total_games);
    for (const auto& e : a) {
        if (e.games() >= min_games && e.games() > 0) {
            d.masses.push_back({e.san(), static_cast<double>(e.games()) / total});
        }
    }
    return d;
}

double jsd_similarity(const MoveDistribution& p, const MoveDistribution& q) {
    std::map<std::string, std::pair<double, double>> joint;
    for (const auto& m : p.masses) joint[m.san].first += m.probability;
    for (const auto& m : q.masses) joint[m.san].second += m.probability;

    double divergence = 0.0;
    for (const auto& [san, pq] : joint) {
        const auto [pi, qi] = pq;
        const double mid = pi + qi;
        const double from_p = pi > 0.0 ? 0.5 * pi * log2_of(2.0 * pi / mid) : 0.0;
        const double from_q = qi > 0.0 ? 0.5 * qi * log2_of(2.0 * qi / mid) : 0.0;
        divergence += from_p + from_q;
    }
    // Rounding can push the divergence a hair outside [0, 1].
    divergence = std::clamp(divergence, 0.0, 1.0);
    return 1.0 - std::sqrt(divergence);
}

ExpectedScore expected_score(const RankedMoveList& a, std::uint64_t min_games) {
    std::uint64_t games = 0;
    std::uint64_t half_points = 0;
    for (const auto& e : a) {
        if (e.games() < min_games || e.games() == 0) continue;
        games += e.games();
        half_points += 2 * e.stats.white_wins + e.stats.draws;
    }
    if (games == 0) throw UndefinedMeasure("no move has at least " + std::to_string(min_games) + " games");
    return {100.0 * static_cast<double>(half_points) / (2.0 * static_cast<double>(games)), games};
}

ComparisonRow compare_position(const std::string& id, const RankedMoveList& first, const RankedMoveList& second,
                               std::uint64_t min_games) {
    ComparisonRow row;
    row.id = id;
    auto attempt = [](auto&& f) -> std::optional<double> {
        try {
            return f();
        } catch (const UndefinedMeasure&) {
            return std::nullopt;
        }
    };
    row.overlap = attempt([&] { return overlap(first, second); });
    row.max_m = attempt([&] { return max_m(first.size(), second.size()); });
    row.m_measure = attempt([&] { return m_measure(first, second); });
    row.jsd = attempt([&] {
        return jsd_similarity(normalize_counts(first, min_games), normalize_counts(second, min_games));
    });
    return row;
}

ExpectedScoreRow expected_score_row(const std::string& id, Color side, const RankedMoveList& first,
                                    const RankedMoveList& second, std::uint64_t min_games) {
    ExpectedScoreRow row;
    row.id = id;
    row.side_to_move = side;
    auto attempt = [&](const RankedMoveList& list) -> std::optional<ExpectedScore> {
        try {
            return expected_score(list, min_games);
        } catch (const UndefinedMeasure&) {
            return std::nullopt;
        }
    };
    row.first = attempt(first);
    row.second = attempt(second);
    return row;
}

} // namespace openbook

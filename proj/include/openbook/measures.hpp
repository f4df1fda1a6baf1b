#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "openbook/book.hpp"

namespace openbook {

/// A measure that has no value for its inputs (empty lists, nothing left
/// after the minimum-games filter, ...). Reported as "undefined", never as 0.
class UndefinedMeasure : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline constexpr std::uint64_t kDefaultMinGames = 10;

/// |moves(a) ∩ moves(b)| / |moves(a) ∪ moves(b)|.
double overlap(const RankedMoveList& a, const RankedMoveList& b);

/// Rank of one move in both lists. A move missing from a list of length k
/// gets rank k + 1; its reciprocal rank is 1 / rank.
struct RankPair {
    std::string san;
    int first = 0;
    int second = 0;

    double reciprocal_first() const { return 1.0 / first; }
    double reciprocal_second() const { return 1.0 / second; }
    friend bool operator==(const RankPair&, const RankPair&) = default;
};

/// Union of both lists: moves of `a` in rank order, then moves only in `b`.
using RankAssignment = std::vector<RankPair>;

RankAssignment assign_reciprocal_ranks(const RankedMoveList& a, const RankedMoveList& b);

/// Sum over the union of |1/rank_a - 1/rank_b|.
double footrule_distance(const RankAssignment& ranks);

/// Footrule sum of two disjoint lists of lengths k1 and k2, the largest value
/// the distance can take for those lengths.
double max_m(std::size_t k1, std::size_t k2);

/// 1 - footrule / maxM.
double m_measure(const RankedMoveList& a, const RankedMoveList& b);

struct MoveDistribution {
    struct Mass {
        std::string san;
        double probability = 0.0;
    };
    std::vector<Mass> masses; // in the list's rank order
    std::uint64_t total_games = 0;

    std::optional<double> probability(const std::string& san) const;
};

/// Drops moves with fewer than min_games games and normalises the rest.
MoveDistribution normalize_counts(const RankedMoveList& a, std::uint64_t min_games);

/// 1 - sqrt(JS divergence in bits); 1 for identical, 0 for disjoint supports.
double jsd_similarity(const MoveDistribution& p, const MoveDistribution& q);

struct ExpectedScore {
    double percent = 0.0; // White's viewpoint
    std::uint64_t games = 0;
};

/// Game-weighted score of the moves with at least min_games games.
ExpectedScore expected_score(const RankedMoveList& a, std::uint64_t min_games);

struct ComparisonRow {
    std::string id;
    std::optional<double> m_measure;
    std::optional<double> max_m;
    std::optional<double> jsd;
    std::optional<double> overlap;
};

/// Overlap and M use the full lists; JSD uses the min_games-filtered
/// distributions. Undefined components are left empty.
ComparisonRow compare_position(const std::string& id, const RankedMoveList& first, const RankedMoveList& second,
                               std::uint64_t min_games = kDefaultMinGames);

struct ExpectedScoreRow {
    std::string id;
    Color side_to_move = Color::White;
    std::optional<ExpectedScore> first;
    std::optional<ExpectedScore> second;
};

ExpectedScoreRow expected_score_row(const std::string& id, Color side, const RankedMoveList& first,
                                    const RankedMoveList& second, std::uint64_t min_games = kDefaultMinGames);

} // namespace openbook

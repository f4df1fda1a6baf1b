#pragma once

#include <array>
#include <random>
#include <string>
#include <vector>

#include "openbook/book.hpp"
#include "openbook/chess.hpp"
#include "openbook/pgn.hpp"

namespace testdata {

struct Count {
    const char* san;
    std::uint64_t games;
};

// Top-10 move counts at the initial position, human and engine books.
inline const std::vector<Count> kHumanTop10 = {
    {"e4", 448923}, {"d4", 361246}, {"Nf3", 103542}, {"c4", 78408}, {"g3", 10142},
    {"b3", 3252},   {"f4", 2754},   {"Nc3", 1382},   {"b4", 718},   {"d3", 390},
};
inline const std::vector<Count> kEngineTop10 = {
    {"e4", 122882}, {"d4", 105119}, {"Nf3", 20820}, {"c4", 20023}, {"g3", 3359},
    {"b3", 1121},   {"f4", 945},    {"Nc3", 1445},  {"d3", 333},   {"e3", 493},
};

inline openbook::RankedMoveList ranked(const std::vector<Count>& counts) {
    std::vector<openbook::MoveStats> stats;
    for (const auto& c : counts) stats.push_back({c.san, c.games, 0, c.games, 0});
    return openbook::RankedMoveList::from_stats(std::move(stats));
}

// Per-position similarity table: id, M, maxM, JSD, overlap.
struct SummaryRow {
    int id;
    double m, max_m, jsd, overlap;
};
inline const std::array<SummaryRow, 26> kSummary = {{
    {1, 0.376, 3.085, 0.729, 0.714},  {2, 0.728, 3.747, 0.549, 0.700},  {3, 0.634, 3.597, 0.633, 0.778},
    {4, 0.745, 3.091, 0.508, 0.500},  {5, 0.939, 3.747, 0.653, 0.545},  {6, 0.534, 3.940, 0.486, 0.462},
    {7, 0.915, 3.019, 0.766, 0.571},  {8, 0.907, 3.808, 0.707, 0.800},  {9, 0.672, 3.293, 0.765, 0.444},
    {10, 0.693, 3.112, 0.871, 0.556}, {11, 0.544, 3.358, 0.606, 0.556}, {12, 0.896, 3.747, 0.637, 0.545},
    {13, 0.827, 2.700, 0.880, 0.500}, {14, 0.809, 3.658, 0.692, 0.583}, {15, 0.376, 3.658, 0.479, 0.462},
    {16, 0.811, 3.635, 0.765, 0.700}, {17, 0.885, 3.597, 0.825, 0.778}, {18, 0.955, 1.850, 0.716, 0.500},
    {19, 0.600, 3.635, 0.508, 0.700}, {20, 0.965, 3.436, 0.748, 0.556}, {21, 0.978, 3.019, 0.863, 0.833},
    {22, 0.793, 3.849, 0.685, 0.583}, {23, 0.892, 4.518, 0.748, 0.688}, {24, 0.846, 1.083, 1.000, 0.333},
    {25, 0.679, 3.648, 0.503, 0.333}, {26, 0.960, 5.291, 0.938, 1.000},
}};

// Expected percentage score per position: human book, engine book.
inline const std::array<std::pair<double, double>, 26> kExpectedScore = {{
    {51.701, 60.217}, {54.473, 60.418}, {52.425, 48.529}, {53.649, 62.944}, {57.968, 58.161}, {47.928, 52.000},
    {44.000, 47.028}, {57.616, 59.027}, {56.468, 64.587}, {56.361, 56.763}, {61.011, 68.250}, {57.578, 59.258},
    {50.082, 43.656}, {62.514, 60.501}, {57.443, 50.573}, {51.387, 56.134}, {54.645, 53.581}, {59.000, 60.277},
    {55.243, 50.396}, {54.180, 53.910}, {55.262, 53.740}, {50.613, 51.357}, {55.029, 50.892}, {60.000, 54.000},
    {62.005, 60.285}, {55.036, 54.749},
}};

/// Plays random legal moves from the initial position.
inline openbook::GameRecord random_game(std::mt19937_64& rng, int max_plies) {
    using namespace openbook;
    GameRecord g;
    Position p = Position::initial();
    std::uniform_int_distribution<int> plies(0, max_plies);
    const int n = plies(rng);
    for (int i = 0; i < n; ++i) {
        const auto moves = legal_moves(p);
        if (moves.empty()) break;
        const auto& m = moves[std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng)];
        g.moves.push_back(emit_san(p, m));
        p = make_move_unchecked(p, m);
    }
    static constexpr std::array<GameResult, 3> kResults{GameResult::WhiteWin, GameResult::Draw, GameResult::BlackWin};
    g.result = kResults[std::uniform_int_distribution<int>(0, 2)(rng)];
    return g;
}

} // namespace testdata

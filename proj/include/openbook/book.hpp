#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "openbook/chess.hpp"
#include "openbook/pgn.hpp"

namespace openbook {

/// Result tallies for one move played from one position.
/// Invariant: games == white_wins + draws + black_wins.
struct MoveStats {
    std::string san;
    std::uint64_t games = 0;
    std::uint64_t white_wins = 0;
    std::uint64_t draws = 0;
    std::uint64_t black_wins = 0;

    void record(GameResult r);
    MoveStats& operator+=(const MoveStats& other);

    /// Score from White's viewpoint, 0-100. Zero when games == 0.
    double score_percent() const;

    friend bool operator==(const MoveStats&, const MoveStats&) = default;
};

struct RankedMove {
    int rank = 0;
    MoveStats stats;

    const std::string& san() const { return stats.san; }
    std::uint64_t games() const { return stats.games; }
    double score_percent() const { return stats.score_percent(); }

    friend bool operator==(const RankedMove&, const RankedMove&) = default;
};

/// Moves of one position ordered by game count (descending), ties by SAN
/// (ascending), with ranks 1..n.
class RankedMoveList {
public:
    RankedMoveList() = default;

    static RankedMoveList from_stats(std::vector<MoveStats> stats);

    const std::vector<RankedMove>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }
    const RankedMove& operator[](std::size_t i) const { return entries_[i]; }

    const RankedMove* find(std::string_view san) const;

    friend bool operator==(const RankedMoveList&, const RankedMoveList&) = default;

private:
    std::vector<RankedMove> entries_;
};

/// Ordering used for ranks and for `mv` lines in book files.
bool ranks_before(const MoveStats& a, const MoveStats& b);

class Book {
public:
    static constexpr int kDefaultDepth = 40;

    using MoveTable = std::map<std::string, MoveStats>;
    using PositionTable = std::map<PositionKey, MoveTable>;

    explicit Book(int max_depth = kDefaultDepth, std::string source = {});

    /// Adds the first max_depth plies of a game. Returns the reason when the
    /// game is skipped (unknown result or unreplayable mainline); the book is
    /// left untouched in that case.
    std::optional<std::string> add_game(const GameRecord& game);

    /// Adds another book's counts. Throws std::invalid_argument on depth mismatch.
    void merge(const Book& other);

    RankedMoveList query(const Position& p) const;
    RankedMoveList query(const PositionKey& key) const;

    int max_depth() const { return max_depth_; }
    const std::string& source() const { return source_; }
    void set_source(std::string s) { source_ = std::move(s); }
    std::uint64_t game_count() const { return games_; }
    std::size_t position_count() const { return positions_.size(); }
    const PositionTable& positions() const { return positions_; }

    friend bool operator==(const Book&, const Book&) = default;

private:
    friend Book load_book(std::istream& in);

    int max_depth_;
    std::string source_;
    std::uint64_t games_ = 0;
    PositionTable positions_;
};

struct BuildReport {
    std::size_t game_index = 0; // 0-based position in the input sequence
    std::string reason;
};

Book build_book(std::span<const GameRecord> games, int max_depth = Book::kDefaultDepth,
                std::vector<BuildReport>* skipped = nullptr);

Book merge_books(const Book& a, const Book& b);

class BookFormatError : public std::runtime_error {
public:
    BookFormatError(std::size_t line, const std::string& message)
        : std::runtime_error("book line " + std::to_string(line) + ": " + message), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

inline constexpr std::string_view kBookHeader = "openbook-diff v1";

/// Writes the line-oriented v1 format, ending with a sha256 line over all
/// preceding bytes.
void save_book(const Book& b, std::ostream& out);
std::string save_book(const Book& b);

/// Throws BookFormatError; never returns a partial book.
Book load_book(std::istream& in);
Book load_book_text(std::string_view text);

std::string sha256_hex(std::string_view bytes);

} // namespace openbook

#pragma once

#include <cstddef>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "openbook/chess.hpp"

namespace openbook {

enum class GameResult { WhiteWin, Draw, BlackWin, Unknown };

std::optional<GameResult> parse_result(std::string_view marker);
std::string_view result_marker(GameResult r);

struct GameRecord {
    std::map<std::string, std::string> tags;
    /// Mainline in canonical SAN, replayable from start_position().
    std::vector<std::string> moves;
    GameResult result = GameResult::Unknown;
    /// Set when a null move cut the mainline short.
    bool truncated = false;

    std::optional<std::string> tag(const std::string& name) const;
    /// The [FEN] tag position when present, otherwise the standard start.
    Position start_position() const;
};

struct MalformedGame {
    std::size_t game_number = 0; // 1-based, counting every game in the stream
    std::size_t line = 0;        // line where the game started
    std::string message;
    std::optional<std::size_t> move_index; // 1-based ply of the offending token
    std::optional<std::string> fen;        // position the offending token was played in
    bool fatal = false;                    // stream error; nothing follows
};

using PgnItem = std::variant<GameRecord, MalformedGame>;

/// Single-pass reader over a PGN stream. Holds at most one game in memory.
/// Recoverable problems (illegal moves, bad tags, result mismatches) yield a
/// MalformedGame and parsing continues with the next game.
class PgnReader {
public:
    explicit PgnReader(std::istream& in) : in_(in) {}

    std::optional<PgnItem> next();

    std::size_t games_seen() const { return games_seen_; }

private:
    bool read_line(std::string& line);

    std::istream& in_;
    std::optional<std::string> pending_;
    std::size_t line_no_ = 0;
    std::size_t games_seen_ = 0;
    bool done_ = false;
};

/// Reads a whole stream; convenience for small inputs and tests.
std::vector<PgnItem> parse_pgn(std::istream& in);
std::vector<PgnItem> parse_pgn(std::string_view text);

struct TagPredicate {
    std::string tag;
    std::function<bool(std::string_view)> accept;
};

struct GameFilter {
    std::optional<int> min_rating;
    std::vector<TagPredicate> tag_predicates;
    bool require_result = true;

    /// Filter that lets every game through.
    static GameFilter none() { return GameFilter{std::nullopt, {}, false}; }

    /// Never throws; a missing or unparsable rating fails the rating check.
    bool accepts(const GameRecord& g) const;
};

std::vector<GameRecord> filter_games(std::span<const GameRecord> games, const GameFilter& f);

/// Re-encodes bytes as UTF-8, reading each invalid byte as Latin-1.
std::string decode_tag_text(std::string_view raw);

/// Accept TimeControl values whose base time is at least `seconds`.
std::function<bool(std::string_view)> time_control_at_least(int seconds);

} // namespace openbook

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace openbook {

enum class Color : std::uint8_t { White, Black };

constexpr Color operator~(Color c) { return c == Color::White ? Color::Black : Color::White; }

enum class PieceType : std::uint8_t { None, Pawn, Knight, Bishop, Rook, Queen, King };

struct Piece {
    PieceType type = PieceType::None;
    Color color = Color::White;

    constexpr bool empty() const { return type == PieceType::None; }
    constexpr bool is(Color c, PieceType t) const { return type == t && color == c; }
    friend constexpr bool operator==(Piece a, Piece b) {
        return a.type == b.type && (a.type == PieceType::None || a.color == b.color);
    }
};

/// Board square, a1 = 0 ... h8 = 63.
class Square {
public:
    constexpr Square() = default;
    constexpr explicit Square(int index) : index_(static_cast<std::uint8_t>(index)) {}
    constexpr Square(int file, int rank) : index_(static_cast<std::uint8_t>(rank * 8 + file)) {}

    constexpr int index() const { return index_; }
    constexpr int file() const { return index_ & 7; }
    constexpr int rank() const { return index_ >> 3; }

    std::string name() const;
    static std::optional<Square> parse(std::string_view text);

    friend constexpr bool operator==(Square, Square) = default;
    friend constexpr auto operator<=>(Square, Square) = default;

private:
    std::uint8_t index_ = 0;
};

enum class CastleKind : std::uint8_t { None, KingSide, QueenSide };

struct ChessMove {
    Square from;
    Square to;
    PieceType promotion = PieceType::None;
    bool capture = false;
    bool en_passant = false;
    CastleKind castle = CastleKind::None;

    std::string uci() const;
    friend bool operator==(const ChessMove&, const ChessMove&) = default;
};

struct CastlingRights {
    bool white_king = false;
    bool white_queen = false;
    bool black_king = false;
    bool black_queen = false;

    bool any() const { return white_king || white_queen || black_king || black_queen; }
    friend bool operator==(const CastlingRights&, const CastlingRights&) = default;
};

class Position {
public:
    /// Standard starting array.
    static Position initial();

    Piece at(Square s) const { return board_[s.index()]; }
    Color side_to_move() const { return side_; }
    const CastlingRights& castling() const { return castling_; }
    std::optional<Square> en_passant() const { return en_passant_; }
    int halfmove_clock() const { return halfmove_; }
    int fullmove_number() const { return fullmove_; }

    Square king_square(Color c) const;
    bool in_check() const;
    bool attacked(Square s, Color by) const;

    friend bool operator==(const Position&, const Position&) = default;

private:
    friend Position parse_fen(std::string_view);
    friend Position make_move_unchecked(const Position&, const ChessMove&);
    friend Position canonical(const Position&);

    std::array<Piece, 64> board_{};
    Color side_ = Color::White;
    CastlingRights castling_;
    std::optional<Square> en_passant_;
    int halfmove_ = 0;
    int fullmove_ = 1;
};

class FenError : public std::runtime_error {
public:
    FenError(std::string field, const std::string& message)
        : std::runtime_error("FEN " + field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

class MoveError : public std::runtime_error {
public:
    enum class Kind { Illegal, Ambiguous, Malformed };

    MoveError(Kind kind, std::string fen, std::string token);

    Kind kind() const { return kind_; }
    const std::string& fen() const { return fen_; }
    const std::string& token() const { return token_; }

private:
    Kind kind_;
    std::string fen_;
    std::string token_;
};

enum class EpField { LegalOnly, Raw };

/// Accepts 6-field FEN and the 4-field EPD prefix (clocks default to 0 and 1).
Position parse_fen(std::string_view text);

/// With EpField::LegalOnly the en-passant square is written only if a legal
/// en-passant capture exists.
std::string emit_fen(const Position& p, EpField ep = EpField::LegalOnly);

std::vector<ChessMove> legal_moves(const Position& p);

bool has_legal_en_passant(const Position& p);

/// Copy of p with an en-passant target that cannot be used cleared.
Position canonical(const Position& p);

ChessMove parse_san(const Position& p, std::string_view token);
std::string emit_san(const Position& p, const ChessMove& m);

/// Throws MoveError if m is not legal in p.
Position apply_move(const Position& p, const ChessMove& m);

/// Applies a move already known to be legal.
Position make_move_unchecked(const Position& p, const ChessMove& m);

std::uint64_t perft(const Position& p, int depth);

/// Canonical identity of a position for book lookups: placement, side,
/// castling rights and a usable en-passant square. Clocks are ignored.
class PositionKey {
public:
    PositionKey() = default;
    explicit PositionKey(std::string canonical_fen) : fen_(std::move(canonical_fen)) {}

    const std::string& fen() const { return fen_; }

    friend bool operator==(const PositionKey&, const PositionKey&) = default;
    friend auto operator<=>(const PositionKey&, const PositionKey&) = default;

private:
    std::string fen_;
};

PositionKey position_key(const Position& p);

/// Result of reading one EPD record.
struct EpdRecord {
    Position position;
    std::vector<std::pair<std::string, std::string>> operations;

    std::optional<std::string> operation(std::string_view opcode) const;
};

EpdRecord parse_epd(std::string_view line);

} // namespace openbook

template <>
struct std::hash<openbook::PositionKey> {
    std::size_t operator()(const openbook::PositionKey& k) const noexcept {
        return std::hash<std::string>{}(k.fen());
    }
};

#include "openbook/chess.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace openbook {

namespace {

constexpr std::array<std::pair<int, int>, 8> kKnightSteps{{
    {1, 2}, {2, 1}, {2, -1}, {1, -2}, {-1, -2}, {-2, -1}, {-2, 1}, {-1, 2}}};
constexpr std::array<std::pair<int, int>, 8> kKingSteps{{
    {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};
constexpr std::array<std::pair<int, int>, 4> kRookDirs{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
constexpr std::array<std::pair<int, int>, 4> kBishopDirs{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
constexpr std::array<PieceType, 4> kPromotions{
    PieceType::Queen, PieceType::Rook, PieceType::Bishop, PieceType::Knight};

constexpr bool on_board(int file, int rank) { return file >= 0 && file < 8 && rank >= 0 && rank < 8; }

constexpr int pawn_dir(Color c) { return c == Color::White ? 1 : -1; }
constexpr int home_rank(Color c) { return c == Color::White ? 0 : 7; }

char piece_letter(PieceType t) {
    switch (t) {
    case PieceType::Pawn: return 'P';
    case PieceType::Knight: return 'N';
    case PieceType::Bishop: return 'B';
    case PieceType::Rook: return 'R';
    case PieceType::Queen: return 'Q';
    case PieceType::King: return 'K';
    default: return '?';
    }
}

std::optional<PieceType> piece_from_letter(char c) {
    switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'P': return PieceType::Pawn;
    case 'N': return PieceType::Knight;
    case 'B': return PieceType::Bishop;
    case 'R': return PieceType::Rook;
    case 'Q': return PieceType::Queen;
    case 'K': return PieceType::King;
    default: return std::nullopt;
    }
}

std::vector<std::string_view> split_ws(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        if (j > i) out.push_back(text.substr(i, j - i));
        i = j;
    }
    return out;
}

std::optional<int> parse_int(std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

void generate_pseudo(const Position& p, std::vector<ChessMove>& out) {
    const Color us = p.side_to_move();
    for (int idx = 0; idx < 64; ++idx) {
        const Square from(idx);
        const Piece pc = p.at(from);
        if (pc.empty() || pc.color != us) continue;
        const int f = from.file();
        const int r = from.rank();

        auto add = [&](Square to, bool capture) { out.push_back(ChessMove{from, to, PieceType::None, capture}); };

        switch (pc.type) {
        case PieceType::Pawn: {
            const int dir = pawn_dir(us);
            const int last = us == Color::White ? 7 : 0;
            auto add_pawn = [&](Square to, bool capture) {
                if (to.rank() == last) {
                    for (PieceType promo : kPromotions) out.push_back(ChessMove{from, to, promo, capture});
                } else {
                    add(to, capture);
                }
            };
            if (on_board(f, r + dir) && p.at(Square(f, r + dir)).empty()) {
                add_pawn(Square(f, r + dir), false);
                const int start = us == Color::White ? 1 : 6;
                if (r == start && p.at(Square(f, r + 2 * dir)).empty()) add(Square(f, r + 2 * dir), false);
            }
            for (int df : {-1, 1}) {
                if (!on_board(f + df, r + dir)) continue;
                const Square to(f + df, r + dir);
                const Piece target = p.at(to);
                if (!target.empty() && target.color != us) {
                    add_pawn(to, true);
                } else if (target.empty() && p.en_passant() == to) {
                    out.push_back(ChessMove{from, to, PieceType::None, true, true});
                }
            }
            break;
        }
        case PieceType::Knight:
        case PieceType::King: {
            const auto& steps = pc.type == PieceType::Knight ? kKnightSteps : kKingSteps;
            for (auto [df, dr] : steps) {
                if (!on_board(f + df, r + dr)) continue;
                const Square to(f + df, r + dr);
                const Piece target = p.at(to);
                if (target.empty() || target.color != us) add(to, !target.empty());
            }
            break;
        }
        case PieceType::Bishop:
        case PieceType::Rook:
        case PieceType::Queen: {
            auto slide = [&](const auto& dirs) {
                for (auto [df, dr] : dirs) {
                    for (int nf = f + df, nr = r + dr; on_board(nf, nr); nf += df, nr += dr) {
                        const Square to(nf, nr);
                        const Piece target = p.at(to);
                        if (target.empty()) {
                            add(to, false);
                            continue;
                        }
                        if (target.color != us) add(to, true);
                        break;
                    }
                }
            };
            if (pc.type != PieceType::Bishop) slide(kRookDirs);
            if (pc.type != PieceType::Rook) slide(kBishopDirs);
            break;
        }
        default: break;
        }
    }

    // Castling. Rights imply king and rook on their home squares.
    const int hr = home_rank(us);
    const Color them = ~us;
    const bool king_side = us == Color::White ? p.castling().white_king : p.castling().black_king;
    const bool queen_side = us == Color::White ? p.castling().white_queen : p.castling().black_queen;
    if ((king_side || queen_side) && !p.attacked(Square(4, hr), them)) {
        if (king_side && p.at(Square(5, hr)).empty() && p.at(Square(6, hr)).empty() &&
            !p.attacked(Square(5, hr), them) && !p.attacked(Square(6, hr), them)) {
            out.push_back(ChessMove{Square(4, hr), Square(6, hr), PieceType::None, false, false, CastleKind::KingSide});
        }
        if (queen_side && p.at(Square(3, hr)).empty() && p.at(Square(2, hr)).empty() &&
            p.at(Square(1, hr)).empty() && !p.attacked(Square(3, hr), them) && !p.attacked(Square(2, hr), them)) {
            out.push_back(ChessMove{Square(4, hr), Square(2, hr), PieceType::None, false, false, CastleKind::QueenSide});
        }
    }
}

std::string strip_san_suffixes(std::string_view token) {
    std::string s(token);
    for (bool changed = true; changed && !s.empty();) {
        changed = false;
        if (s.size() >= 4 && s.compare(s.size() - 4, 4, "e.p.") == 0) {
            s.resize(s.size() - 4);
            changed = true;
        } else if (std::string_view("+#!?").find(s.back()) != std::string_view::npos) {
            s.pop_back();
            changed = true;
        }
    }
    return s;
}

} // namespace

std::string Square::name() const {
    return {static_cast<char>('a' + file()), static_cast<char>('1' + rank())};
}

std::optional<Square> Square::parse(std::string_view text) {
    if (text.size() != 2) return std::nullopt;
    const int f = text[0] - 'a';
    const int r = text[1] - '1';
    if (!on_board(f, r)) return std::nullopt;
    return Square(f, r);
}

std::string ChessMove::uci() const {
    std::string s = from.name() + to.name();
    if (promotion != PieceType::None) s += static_cast<char>(std::tolower(piece_letter(promotion)));
    return s;
}

MoveError::MoveError(Kind kind, std::string fen, std::string token)
    : std::runtime_error([&] {
          const char* what = kind == Kind::Illegal     ? "illegal move"
                             : kind == Kind::Ambiguous ? "ambiguous move"
                                                       : "malformed move";
          return std::string(what) + " '" + token + "' in " + fen;
      }()),
      kind_(kind), fen_(std::move(fen)), token_(std::move(token)) {}

Position Position::initial() {
    return parse_fen("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1");
}

Square Position::king_square(Color c) const {
    for (int i = 0; i < 64; ++i) {
        if (board_[i].is(c, PieceType::King)) return Square(i);
    }
    return Square(0);
}

bool Position::in_check() const { return attacked(king_square(side_), ~side_); }

bool Position::attacked(Square s, Color by) const {
    const int f = s.file();
    const int r = s.rank();
    const int back = -pawn_dir(by);
    for (int df : {-1, 1}) {
        if (on_board(f + df, r + back) && at(Square(f + df, r + back)).is(by, PieceType::Pawn)) return true;
    }
    for (auto [df, dr] : kKnightSteps) {
        if (on_board(f + df, r + dr) && at(Square(f + df, r + dr)).is(by, PieceType::Knight)) return true;
    }
    for (auto [df, dr] : kKingSteps) {
        if (on_board(f + df, r + dr) && at(Square(f + df, r + dr)).is(by, PieceType::King)) return true;
    }
    auto ray_hits = [&](const auto& dirs, PieceType slider) {
        for (auto [df, dr] : dirs) {
            for (int nf = f + df, nr = r + dr; on_board(nf, nr); nf += df, nr += dr) {
                const Piece pc = at(Square(nf, nr));
                if (pc.empty()) continue;
                if (pc.color == by && (pc.type == slider || pc.type == PieceType::Queen)) return true;
                break;
            }
        }
        return false;
    };
    return ray_hits(kRookDirs, PieceType::Rook) || ray_hits(kBishopDirs, PieceType::Bishop);
}

Position parse_fen(std::string_view text) {
    const auto fields = split_ws(text);
    if (fields.size() != 4 && fields.size() != 6) {
        throw FenError("record", "expected 6 fields (or 4 for EPD), got " + std::to_string(fields.size()));
    }

    Position p;
    int rank = 7;
    int file = 0;
    for (char c : fields[0]) {
        if (c == '/') {
            if (file != 8 || rank == 0) throw FenError("placement", "bad rank layout");
            --rank;
            file = 0;
        } else if (c >= '1' && c <= '8') {
            file += c - '0';
            if (file > 8) throw FenError("placement", "rank overflows 8 files");
        } else {
            const auto type = piece_from_letter(c);
            if (!type || file >= 8) throw FenError("placement", std::string("unexpected '") + c + "'");
            const Color color = std::isupper(static_cast<unsigned char>(c)) ? Color::White : Color::Black;
            p.board_[Square(file, rank).index()] = Piece{*type, color};
            ++file;
        }
    }
    if (rank != 0 || file != 8) throw FenError("placement", "expected 8 ranks of 8 files");

    for (Color c : {Color::White, Color::Black}) {
        int kings = 0;
        int pawns = 0;
        int total = 0;
        for (int i = 0; i < 64; ++i) {
            const Piece pc = p.board_[i];
            if (pc.empty() || pc.color != c) continue;
            ++total;
            if (pc.type == PieceType::King) ++kings;
            if (pc.type == PieceType::Pawn) {
                ++pawns;
                if (Square(i).rank() == 0 || Square(i).rank() == 7) {
                    throw FenError("placement", "pawn on back rank");
                }
            }
        }
        const std::string who = c == Color::White ? "white" : "black";
        if (kings != 1) throw FenError("placement", who + " must have exactly one king");
        if (pawns > 8 || total > 16) throw FenError("placement", who + " has too many pieces");
    }

    if (fields[1] == "w") {
        p.side_ = Color::White;
    } else if (fields[1] == "b") {
        p.side_ = Color::Black;
    } else {
        throw FenError("side", "expected 'w' or 'b'");
    }

    if (fields[2] != "-") {
        for (char c : fields[2]) {
            bool* right = nullptr;
            switch (c) {
            case 'K': right = &p.castling_.white_king; break;
            case 'Q': right = &p.castling_.white_queen; break;
            case 'k': right = &p.castling_.black_king; break;
            case 'q': right = &p.castling_.black_queen; break;
            default: throw FenError("castling", std::string("unexpected '") + c + "'");
            }
            if (*right) throw FenError("castling", "duplicate right");
            *right = true;
        }
        auto check = [&](bool right, Color c, int rook_file) {
            if (!right) return;
            const int hr = home_rank(c);
            if (!p.at(Square(4, hr)).is(c, PieceType::King) || !p.at(Square(rook_file, hr)).is(c, PieceType::Rook)) {
                throw FenError("castling", "right without king and rook on home squares");
            }
        };
        check(p.castling_.white_king, Color::White, 7);
        check(p.castling_.white_queen, Color::White, 0);
        check(p.castling_.black_king, Color::Black, 7);
        check(p.castling_.black_queen, Color::Black, 0);
    }

    if (fields[3] != "-") {
        const auto sq = Square::parse(fields[3]);
        if (!sq) throw FenError("en-passant", "bad square");
        const Color mover = ~p.side_;
        const int expected_rank = p.side_ == Color::White ? 5 : 2;
        if (sq->rank() != expected_rank) throw FenError("en-passant", "square on wrong rank for side to move");
        const int dir = pawn_dir(mover);
        const Square pawn_sq(sq->file(), sq->rank() + dir);
        const Square origin(sq->file(), sq->rank() - dir);
        if (!p.at(pawn_sq).is(mover, PieceType::Pawn) || !p.at(*sq).empty() || !p.at(origin).empty()) {
            throw FenError("en-passant", "no double-pushed pawn behind the square");
        }
        p.en_passant_ = sq;
    }

    if (fields.size() == 6) {
        const auto half = parse_int(fields[4]);
        if (!half || *half < 0) throw FenError("halfmove", "expected non-negative integer");
        const auto full = parse_int(fields[5]);
        if (!full || *full < 1) throw FenError("fullmove", "expected positive integer");
        p.halfmove_ = *half;
        p.fullmove_ = *full;
    }

    if (p.attacked(p.king_square(~p.side_), p.side_)) {
        throw FenError("side", "side not to move is in check");
    }
    return p;
}

std::string emit_fen(const Position& p, EpField ep) {
    std::string out;
    for (int rank = 7; rank >= 0; --rank) {
        int gap = 0;
        for (int file = 0; file < 8; ++file) {
            const Piece pc = p.at(Square(file, rank));
            if (pc.empty()) {
                ++gap;
                continue;
            }
            if (gap) out += static_cast<char>('0' + gap);
            gap = 0;
            const char letter = piece_letter(pc.type);
            out += pc.color == Color::White ? letter : static_cast<char>(std::tolower(letter));
        }
        if (gap) out += static_cast<char>('0' + gap);
        if (rank) out += '/';
    }
    out += p.side_to_move() == Color::White ? " w " : " b ";
    const auto& c = p.castling();
    if (!c.any()) {
        out += '-';
    } else {
        if (c.white_king) out += 'K';
        if (c.white_queen) out += 'Q';
        if (c.black_king) out += 'k';
        if (c.black_queen) out += 'q';
    }
    out += ' ';
    const bool show_ep = p.en_passant() && (ep == EpField::Raw || has_legal_en_passant(p));
    out += show_ep ? p.en_passant()->name() : "-";
    out += ' ' + std::to_string(p.halfmove_clock()) + ' ' + std::to_string(p.fullmove_number());
    return out;
}

Position make_move_unchecked(const Position& p, const ChessMove& m) {
    Position n = p;
    const Color us = p.side_;
    const Piece moving = p.board_[m.from.index()];
    const bool was_capture = !p.board_[m.to.index()].empty() || m.en_passant;

    n.board_[m.from.index()] = Piece{};
    if (m.en_passant) n.board_[Square(m.to.file(), m.from.rank()).index()] = Piece{};
    if (m.castle != CastleKind::None) {
        const int hr = m.from.rank();
        const int rook_from = m.castle == CastleKind::KingSide ? 7 : 0;
        const int rook_to = m.castle == CastleKind::KingSide ? 5 : 3;
        n.board_[Square(rook_to, hr).index()] = n.board_[Square(rook_from, hr).index()];
        n.board_[Square(rook_from, hr).index()] = Piece{};
    }
    n.board_[m.to.index()] = m.promotion != PieceType::None ? Piece{m.promotion, us} : moving;

    if (moving.type == PieceType::King) {
        if (us == Color::White) {
            n.castling_.white_king = n.castling_.white_queen = false;
        } else {
            n.castling_.black_king = n.castling_.black_queen = false;
        }
    }
    for (Square s : {m.from, m.to}) {
        if (s == Square(0, 0)) n.castling_.white_queen = false;
        if (s == Square(7, 0)) n.castling_.white_king = false;
        if (s == Square(0, 7)) n.castling_.black_queen = false;
        if (s == Square(7, 7)) n.castling_.black_king = false;
    }

    n.en_passant_.reset();
    if (moving.type == PieceType::Pawn && std::abs(m.to.rank() - m.from.rank()) == 2) {
        n.en_passant_ = Square(m.from.file(), (m.from.rank() + m.to.rank()) / 2);
    }
    n.halfmove_ = (moving.type == PieceType::Pawn || was_capture) ? 0 : p.halfmove_ + 1;
    if (us == Color::Black) ++n.fullmove_;
    n.side_ = ~us;
    return n;
}

std::vector<ChessMove> legal_moves(const Position& p) {
    std::vector<ChessMove> pseudo;
    pseudo.reserve(64);
    generate_pseudo(p, pseudo);
    std::vector<ChessMove> legal;
    legal.reserve(pseudo.size());
    const Color us = p.side_to_move();
    for (const auto& m : pseudo) {
        const Position next = make_move_unchecked(p, m);
        if (!next.attacked(next.king_square(us), ~us)) legal.push_back(m);
    }
    return legal;
}

bool has_legal_en_passant(const Position& p) {
    if (!p.en_passant()) return false;
    const auto moves = legal_moves(p);
    return std::any_of(moves.begin(), moves.end(), [](const ChessMove& m) { return m.en_passant; });
}

Position canonical(const Position& p) {
    Position n = p;
    if (n.en_passant_ && !has_legal_en_passant(n)) n.en_passant_.reset();
    return n;
}

Position apply_move(const Position& p, const ChessMove& m) {
    const auto moves = legal_moves(p);
    if (std::find(moves.begin(), moves.end(), m) == moves.end()) {
        throw MoveError(MoveError::Kind::Illegal, emit_fen(p), m.uci());
    }
    return make_move_unchecked(p, m);
}

std::string emit_san(const Position& p, const ChessMove& m) {
    const auto moves = legal_moves(p);
    if (std::find(moves.begin(), moves.end(), m) == moves.end()) {
        throw MoveError(MoveError::Kind::Illegal, emit_fen(p), m.uci());
    }

    std::string san;
    if (m.castle == CastleKind::KingSide) {
        san = "O-O";
    } else if (m.castle == CastleKind::QueenSide) {
        san = "O-O-O";
    } else {
        const PieceType type = p.at(m.from).type;
        if (type == PieceType::Pawn) {
            if (m.capture) {
                san += static_cast<char>('a' + m.from.file());
                san += 'x';
            }
            san += m.to.name();
            if (m.promotion != PieceType::None) {
                san += '=';
                san += piece_letter(m.promotion);
            }
        } else {
            san += piece_letter(type);
            bool rivals = false;
            bool same_file = false;
            bool same_rank = false;
            for (const auto& other : moves) {
                if (other.to != m.to || other.from == m.from || p.at(other.from).type != type) continue;
                rivals = true;
                same_file |= other.from.file() == m.from.file();
                same_rank |= other.from.rank() == m.from.rank();
            }
            if (rivals) {
                if (!same_file) {
                    san += static_cast<char>('a' + m.from.file());
                } else if (!same_rank) {
                    san += static_cast<char>('1' + m.from.rank());
                } else {
                    san += m.from.name();
                }
            }
            if (m.capture) san += 'x';
            san += m.to.name();
        }
    }

    const Position next = make_move_unchecked(p, m);
    if (next.in_check()) san += legal_moves(next).empty() ? '#' : '+';
    return san;
}

ChessMove parse_san(const Position& p, std::string_view token) {
    const std::string s = strip_san_suffixes(token);
    auto fail = [&](MoveError::Kind kind) { return MoveError(kind, emit_fen(p), std::string(token)); };
    if (s.empty()) throw fail(MoveError::Kind::Malformed);

    const auto moves = legal_moves(p);
    auto pick = [&](auto&& pred) {
        std::optional<ChessMove> found;
        for (const auto& m : moves) {
            if (!pred(m)) continue;
            if (found) throw fail(MoveError::Kind::Ambiguous);
            found = m;
        }
        if (!found) throw fail(MoveError::Kind::Illegal);
        return *found;
    };

    if (s == "O-O" || s == "0-0") {
        return pick([](const ChessMove& m) { return m.castle == CastleKind::KingSide; });
    }
    if (s == "O-O-O" || s == "0-0-0") {
        return pick([](const ChessMove& m) { return m.castle == CastleKind::QueenSide; });
    }

    std::string_view rest = s;
    PieceType type = PieceType::Pawn;
    if (std::isupper(static_cast<unsigned char>(rest.front()))) {
        const auto t = piece_from_letter(rest.front());
        if (!t) throw fail(MoveError::Kind::Malformed);
        type = *t;
        rest.remove_prefix(1);
    }

    PieceType promotion = PieceType::None;
    if (!rest.empty() && std::isupper(static_cast<unsigned char>(rest.back()))) {
        const auto t = piece_from_letter(rest.back());
        if (!t || *t == PieceType::Pawn || *t == PieceType::King || type != PieceType::Pawn) {
            throw fail(MoveError::Kind::Malformed);
        }
        promotion = *t;
        rest.remove_suffix(1);
        if (!rest.empty() && rest.back() == '=') rest.remove_suffix(1);
    }

    if (rest.size() < 2) throw fail(MoveError::Kind::Malformed);
    const auto to = Square::parse(rest.substr(rest.size() - 2));
    if (!to) throw fail(MoveError::Kind::Malformed);
    rest.remove_suffix(2);

    bool capture_marked = false;
    if (!rest.empty() && (rest.back() == 'x' || rest.back() == ':' || rest.back() == '-')) {
        capture_marked = rest.back() != '-';
        rest.remove_suffix(1);
    }

    std::optional<int> from_file;
    std::optional<int> from_rank;
    for (char c : rest) {
        if (c >= 'a' && c <= 'h' && !from_file && !from_rank) {
            from_file = c - 'a';
        } else if (c >= '1' && c <= '8' && !from_rank) {
            from_rank = c - '1';
        } else {
            throw fail(MoveError::Kind::Malformed);
        }
    }

    return pick([&](const ChessMove& m) {
        if (m.castle != CastleKind::None || m.to != *to || p.at(m.from).type != type) return false;
        if (m.promotion != promotion) return false;
        if (from_file && m.from.file() != *from_file) return false;
        if (from_rank && m.from.rank() != *from_rank) return false;
        if (type == PieceType::Pawn) {
            // "e4" names a push; captures need the origin file.
            if (!from_file && m.capture) return false;
            if (capture_marked && !m.capture) return false;
        }
        return true;
    });
}

std::uint64_t perft(const Position& p, int depth) {
    if (depth <= 0) return 1;
    const auto moves = legal_moves(p);
    if (depth == 1) return moves.size();
    std::uint64_t nodes = 0;
    for (const auto& m : moves) nodes += perft(make_move_unchecked(p, m), depth - 1);
    return nodes;
}

PositionKey position_key(const Position& p) {
    const std::string fen = emit_fen(p, EpField::LegalOnly);
    // Drop the two clock fields.
    std::size_t cut = fen.size();
    for (int spaces = 0; spaces < 2; ++spaces) cut = fen.rfind(' ', cut - 1);
    return PositionKey(fen.substr(0, cut));
}

std::optional<std::string> EpdRecord::operation(std::string_view opcode) const {
    for (const auto& [op, operand] : operations) {
        if (op == opcode) return operand;
    }
    return std::nullopt;
}

EpdRecord parse_epd(std::string_view line) {
    // First four whitespace-delimited fields form the position.
    std::size_t pos = 0;
    std::vector<std::string_view> fields;
    while (fields.size() < 4) {
        while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        const std::size_t start = pos;
        while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        if (pos == start) throw FenError("record", "EPD needs 4 position fields");
        fields.push_back(line.substr(start, pos - start));
    }
    std::string fen;
    for (auto f : fields) {
        if (!fen.empty()) fen += ' ';
        fen += f;
    }

    // Some suites carry full FEN clocks before the opcodes.
    std::string_view rest = line.substr(pos);
    {
        const auto extra = split_ws(rest);
        if (extra.size() >= 2 && parse_int(extra[0]) && parse_int(extra[1])) {
            fen += ' ';
            fen += extra[0];
            fen += ' ';
            fen += extra[1];
            const auto after = static_cast<std::size_t>(extra[1].data() + extra[1].size() - rest.data());
            rest = rest.substr(after);
        }
    }

    EpdRecord rec{parse_fen(fen), {}};
    std::size_t i = 0;
    while (i < rest.size()) {
        while (i < rest.size() && std::isspace(static_cast<unsigned char>(rest[i]))) ++i;
        if (i >= rest.size()) break;
        const std::size_t op_start = i;
        while (i < rest.size() && !std::isspace(static_cast<unsigned char>(rest[i])) && rest[i] != ';') ++i;
        std::string opcode(rest.substr(op_start, i - op_start));
        std::string operand;
        bool in_quotes = false;
        bool terminated = false;
        for (; i < rest.size(); ++i) {
            const char c = rest[i];
            if (c == '"') {
                in_quotes = !in_quotes;
            } else if (c == ';' && !in_quotes) {
                terminated = true;
                ++i;
                break;
            } else {
                operand += c;
            }
        }
        if (in_quotes || !terminated) throw FenError("operations", "unterminated EPD operation '" + opcode + "'");
        const auto first = operand.find_first_not_of(" \t");
        const auto last = operand.find_last_not_of(" \t");
        operand = first == std::string::npos ? "" : operand.substr(first, last - first + 1);
        rec.operations.emplace_back(std::move(opcode), std::move(operand));
    }
    return rec;
}

} // namespace openbook

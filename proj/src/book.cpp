#include "openbook/book.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <iterator>
#include <sstream>

namespace openbook {

namespace {

std::string percent_encode(std::string_view s) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) {
        if (c <= 0x20 || c == '%' || c == 0x7F) {
            out += '%';
            out += kHex[c >> 4];
            out += kHex[c & 15];
        } else {
            out += static_cast<char>(c);
        }
    }
    return out;
}

std::optional<std::string> percent_decode(std::string_view s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '%') {
            out += s[i];
            continue;
        }
        if (i + 2 >= s.size()) return std::nullopt;
        unsigned v = 0;
        auto [ptr, ec] = std::from_chars(s.data() + i + 1, s.data() + i + 3, v, 16);
        if (ec != std::errc{} || ptr != s.data() + i + 3) return std::nullopt;
        out += static_cast<char>(v);
        i += 2;
    }
    return out;
}

std::optional<std::uint64_t> parse_u64(std::string_view s) {
    std::uint64_t v = 0;
    if (s.empty() || s.front() == '+') return std::nullopt;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::vector<std::string_view> split_spaces(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i <= s.size()) {
        const std::size_t j = std::min(s.find(' ', i), s.size());
        out.push_back(s.substr(i, j - i));
        i = j + 1;
    }
    return out;
}

} // namespace

void MoveStats::record(GameResult r) {
    ++games;
    switch (r) {
    case GameResult::WhiteWin: ++white_wins; break;
    case GameResult::Draw: ++draws; break;
    case GameResult::BlackWin: ++black_wins; break;
    case GameResult::Unknown: break;
    }
}

MoveStats& MoveStats::operator+=(const MoveStats& other) {
    games += other.games;
    white_wins += other.white_wins;
    draws += other.draws;
    black_wins += other.black_wins;
    return *this;
}

double MoveStats::score_percent() const {
    if (games == 0) return 0.0;
    return 100.0 * (static_cast<double>(white_wins) + static_cast<double>(draws) / 2.0) / static_cast<double>(games);
}

bool ranks_before(const MoveStats& a, const MoveStats& b) {
    if (a.games != b.games) return a.games > b.games;
    return a.san < b.san;
}

RankedMoveList RankedMoveList::from_stats(std::vector<MoveStats> stats) {
    std::sort(stats.begin(), stats.end(), ranks_before);
    RankedMoveList list;
    list.entries_.reserve(stats.size());
    int rank = 0;
    for (auto& s : stats) list.entries_.push_back(RankedMove{++rank, std::move(s)});
    return list;
}

const RankedMove* RankedMoveList::find(std::string_view san) const {
    for (const auto& e : entries_) {
        if (e.san() == san) return &e;
    }
    return nullptr;
}

Book::Book(int max_depth, std::string source) : max_depth_(max_depth), source_(std::move(source)) {
    if (max_depth < 1) throw std::invalid_argument("book depth must be at least 1 ply");
}

std::optional<std::string> Book::add_game(const GameRecord& game) {
    if (game.result == GameResult::Unknown) return "unknown result";

    std::vector<std::pair<PositionKey, std::string>> plies;
    try {
        Position pos = game.start_position();
        const std::size_t limit = std::min<std::size_t>(game.moves.size(), static_cast<std::size_t>(max_depth_));
        plies.reserve(limit);
        for (std::size_t i = 0; i < limit; ++i) {
            const ChessMove m = parse_san(pos, game.moves[i]);
            plies.emplace_back(position_key(pos), emit_san(pos, m));
            pos = make_move_unchecked(pos, m);
        }
    } catch (const std::exception& e) {
        return std::string("unreplayable: ") + e.what();
    }

    for (auto& [key, san] : plies) {
        auto& stats = positions_[key][san];
        if (stats.san.empty()) stats.san = san;
        stats.record(game.result);
    }
    ++games_;
    return std::nullopt;
}

void Book::merge(const Book& other) {
    if (other.max_depth_ != max_depth_) {
        throw std::invalid_argument("cannot merge books built to different depths (" + std::to_string(max_depth_) +
                                    " vs " + std::to_string(other.max_depth_) + ")");
    }
    for (const auto& [key, moves] : other.positions_) {
        auto& table = positions_[key];
        for (const auto& [san, stats] : moves) {
            auto& mine = table[san];
            if (mine.san.empty()) mine.san = san;
            mine += stats;
        }
    }
    games_ += other.games_;
    if (source_.empty()) {
        source_ = other.source_;
    } else if (!other.source_.empty() && other.source_ != source_) {
        source_ += "," + other.source_;
    }
}

RankedMoveList Book::query(const Position& p) const { return query(position_key(p)); }

RankedMoveList Book::query(const PositionKey& key) const {
    auto it = positions_.find(key);
    if (it == positions_.end()) return {};
    std::vector<MoveStats> stats;
    stats.reserve(it->second.size());
    for (const auto& [san, s] : it->second) stats.push_back(s);
    return RankedMoveList::from_stats(std::move(stats));
}

Book build_book(std::span<const GameRecord> games, int max_depth, std::vector<BuildReport>* skipped) {
    Book book(max_depth);
    for (std::size_t i = 0; i < games.size(); ++i) {
        if (auto reason = book.add_game(games[i]); reason && skipped) skipped->push_back({i, *reason});
    }
    return book;
}

Book merge_books(const Book& a, const Book& b) {
    Book out = a;
    out.merge(b);
    return out;
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 computation failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    hex.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        hex += kHex[digest[i] >> 4];
        hex += kHex[digest[i] & 15];
    }
    return hex;
}

std::string save_book(const Book& b) {
    std::string body;
    body += kBookHeader;
    body += '\n';
    body += "meta source=" + percent_encode(b.source()) + " games=" + std::to_string(b.game_count()) +
            " positions=" + std::to_string(b.position_count()) + " depth=" + std::to_string(b.max_depth()) + '\n';
    for (const auto& [key, moves] : b.positions()) {
        body += "pos " + key.fen() + '\n';
        std::vector<const MoveStats*> order;
        order.reserve(moves.size());
        for (const auto& [san, s] : moves) order.push_back(&s);
        std::sort(order.begin(), order.end(), [](const MoveStats* x, const MoveStats* y) { return ranks_before(*x, *y); });
        for (const MoveStats* s : order) {
            body += "mv " + s->san + ' ' + std::to_string(s->games) + ' ' + std::to_string(s->white_wins) + ' ' +
                    std::to_string(s->draws) + ' ' + std::to_string(s->black_wins) + '\n';
        }
    }
    body += "sha256 " + sha256_hex(body) + '\n';
    return body;
}

void save_book(const Book& b, std::ostream& out) {
    const std::string text = save_book(b);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

Book load_book(std::istream& in) {
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (in.bad()) throw BookFormatError(0, "read error");

    // Split into lines; every line, including the last, ends with LF.
    std::vector<std::string_view> lines;
    std::vector<std::size_t> offsets;
    {
        std::size_t i = 0;
        const std::string_view all(text);
        while (i < all.size()) {
            const std::size_t nl = all.find('\n', i);
            if (nl == std::string_view::npos) throw BookFormatError(lines.size() + 1, "truncated line (missing LF)");
            offsets.push_back(i);
            lines.push_back(all.substr(i, nl - i));
            i = nl + 1;
        }
    }
    if (lines.empty()) throw BookFormatError(1, "empty file");
    if (lines[0] != kBookHeader) {
        if (lines[0].starts_with("openbook-diff ")) throw BookFormatError(1, "unsupported version '" + std::string(lines[0]) + "'");
        throw BookFormatError(1, "not a book file");
    }

    const std::size_t last = lines.size() - 1;
    if (!lines[last].starts_with("sha256 ")) throw BookFormatError(lines.size(), "missing sha256 trailer (truncated file?)");
    const std::string expected = sha256_hex(std::string_view(text).substr(0, offsets[last]));
    if (lines[last].substr(7) != expected) throw BookFormatError(lines.size(), "checksum mismatch");

    if (last < 2) throw BookFormatError(2, "missing meta line");
    const std::string_view meta = lines[1];
    if (!meta.starts_with("meta source=")) throw BookFormatError(2, "expected meta line");
    const auto fields = split_spaces(meta.substr(5));
    if (fields.size() != 4) throw BookFormatError(2, "meta line must have 4 fields");
    auto field = [&](std::size_t i, std::string_view name) {
        if (!fields[i].starts_with(name) || fields[i].size() <= name.size() || fields[i][name.size()] != '=') {
            throw BookFormatError(2, "expected meta field '" + std::string(name) + "'");
        }
        return fields[i].substr(name.size() + 1);
    };
    const auto source = percent_decode(field(0, "source"));
    const auto games = parse_u64(field(1, "games"));
    const auto npos = parse_u64(field(2, "positions"));
    const auto depth = parse_u64(field(3, "depth"));
    if (!source || !games || !npos || !depth || *depth < 1 || *depth > 1'000'000) {
        throw BookFormatError(2, "malformed meta values");
    }

    Book book(static_cast<int>(*depth), *source);
    book.games_ = *games;

    Book::MoveTable* current = nullptr;
    const PositionKey* current_key = nullptr;
    const MoveStats* previous = nullptr;
    for (std::size_t i = 2; i < last; ++i) {
        const std::size_t line_no = i + 1;
        const std::string_view line = lines[i];
        if (line.starts_with("pos ")) {
            if (current && current->empty()) throw BookFormatError(line_no - 1, "position without moves");
            const std::string fen(line.substr(4));
            try {
                const Position p = parse_fen(fen);
                if (position_key(p).fen() != fen) throw BookFormatError(line_no, "position is not in canonical form");
            } catch (const FenError& e) {
                throw BookFormatError(line_no, e.what());
            }
            PositionKey key(fen);
            if (current_key && !(*current_key < key)) throw BookFormatError(line_no, "positions out of order");
            auto [it, inserted] = book.positions_.emplace(std::move(key), Book::MoveTable{});
            current = &it->second;
            current_key = &it->first;
            previous = nullptr;
        } else if (line.starts_with("mv ")) {
            if (!current) throw BookFormatError(line_no, "move before any position");
            const auto parts = split_spaces(line.substr(3));
            if (parts.size() != 5) throw BookFormatError(line_no, "mv line must have 5 fields");
            MoveStats s;
            s.san = std::string(parts[0]);
            const auto g = parse_u64(parts[1]);
            const auto w = parse_u64(parts[2]);
            const auto d = parse_u64(parts[3]);
            const auto l = parse_u64(parts[4]);
            if (s.san.empty() || !g || !w || !d || !l) throw BookFormatError(line_no, "malformed mv line");
            s.games = *g;
            s.white_wins = *w;
            s.draws = *d;
            s.black_wins = *l;
            if (s.games == 0 || s.games != s.white_wins + s.draws + s.black_wins) {
                throw BookFormatError(line_no, "game count does not equal result tallies");
            }
            if (previous && !ranks_before(*previous, s)) throw BookFormatError(line_no, "moves out of rank order");
            auto [it, inserted] = current->emplace(s.san, s);
            if (!inserted) throw BookFormatError(line_no, "duplicate move");
            previous = &it->second;
        } else {
            throw BookFormatError(line_no, "unrecognised line");
        }
    }
    if (current && current->empty()) throw BookFormatError(last, "position without moves");
    if (book.positions_.size() != *npos) throw BookFormatError(2, "position count does not match meta");
    return book;
}

Book load_book_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    return load_book(in);
}

} // namespace openbook

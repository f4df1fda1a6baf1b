#include "openbook/pgn.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace openbook {

namespace {

bool is_blank(std::string_view s) {
    for (char c : s) {
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

std::string_view trim_left(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    return s;
}

std::optional<int> to_int(std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

/// Parses `[Name "Value"]`. Returns false on syntax errors.
bool parse_tag_line(std::string_view line, std::string& name, std::string& value) {
    line = trim_left(line);
    if (line.empty() || line.front() != '[') return false;
    line.remove_prefix(1);
    line = trim_left(line);
    std::size_t i = 0;
    while (i < line.size() && (std::isalnum(static_cast<unsigned char>(line[i])) || line[i] == '_')) ++i;
    if (i == 0) return false;
    name.assign(line.substr(0, i));
    line = trim_left(line.substr(i));
    if (line.empty() || line.front() != '"') return false;
    std::string raw;
    std::size_t j = 1;
    bool closed = false;
    for (; j < line.size(); ++j) {
        const char c = line[j];
        if (c == '\\' && j + 1 < line.size()) {
            raw += line[++j];
        } else if (c == '"') {
            closed = true;
            ++j;
            break;
        } else {
            raw += c;
        }
    }
    if (!closed) return false;
    line = trim_left(line.substr(j));
    if (line.empty() || line.front() != ']') return false;
    value = decode_tag_text(raw);
    return true;
}

/// Movetext tokenizer state carried across lines of one game.
struct MovetextScanner {
    bool in_comment = false;
    int rav_depth = 0;
    std::optional<GameResult> marker;
    std::vector<std::string> tokens;

    /// Returns true once a top-level termination marker was seen.
    bool feed(std::string_view line) {
        std::string tok;
        auto flush = [&] {
            if (tok.empty()) return false;
            std::string t;
            t.swap(tok);
            if (rav_depth > 0) return false;
            if (auto r = parse_result(t)) {
                marker = *r;
                return true;
            }
            if (t.front() == '$') return false;
            // Move number prefixes: "12." "12..." and "12.e4".
            std::size_t k = 0;
            while (k < t.size() && std::isdigit(static_cast<unsigned char>(t[k]))) ++k;
            if (k > 0 && k < t.size() && t[k] == '.') {
                while (k < t.size() && t[k] == '.') ++k;
                t.erase(0, k);
            } else if (k == t.size()) {
                return false;
            }
            while (!t.empty() && t.front() == '.') t.erase(0, 1);
            if (t.empty() || t.find_first_not_of("!?") == std::string::npos) return false;
            tokens.push_back(std::move(t));
            return false;
        };

        for (std::size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (in_comment) {
                if (c == '}') in_comment = false;
                continue;
            }
            switch (c) {
            case '{':
                if (flush()) return true;
                in_comment = true;
                break;
            case ';':
                return flush();
            case '(':
                if (flush()) return true;
                ++rav_depth;
                break;
            case ')':
                if (flush()) return true;
                if (rav_depth > 0) --rav_depth;
                break;
            default:
                if (std::isspace(static_cast<unsigned char>(c))) {
                    if (flush()) return true;
                } else {
                    tok += c;
                }
            }
        }
        return flush();
    }
};

} // namespace

std::optional<GameResult> parse_result(std::string_view marker) {
    if (marker == "1-0") return GameResult::WhiteWin;
    if (marker == "0-1") return GameResult::BlackWin;
    if (marker == "1/2-1/2") return GameResult::Draw;
    if (marker == "*") return GameResult::Unknown;
    return std::nullopt;
}

std::string_view result_marker(GameResult r) {
    switch (r) {
    case GameResult::WhiteWin: return "1-0";
    case GameResult::BlackWin: return "0-1";
    case GameResult::Draw: return "1/2-1/2";
    default: return "*";
    }
}

std::optional<std::string> GameRecord::tag(const std::string& name) const {
    auto it = tags.find(name);
    if (it == tags.end()) return std::nullopt;
    return it->second;
}

Position GameRecord::start_position() const {
    if (auto fen = tag("FEN")) return parse_fen(*fen);
    return Position::initial();
}

bool PgnReader::read_line(std::string& line) {
    if (pending_) {
        line = std::move(*pending_);
        pending_.reset();
        return true;
    }
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

std::optional<PgnItem> PgnReader::next() {
    if (done_) return std::nullopt;

    std::string line;
    for (;;) {
        if (!read_line(line)) {
            done_ = true;
            if (in_.bad()) {
                MalformedGame fatal;
                fatal.game_number = games_seen_ + 1;
                fatal.line = line_no_;
                fatal.message = "stream read error";
                fatal.fatal = true;
                return fatal;
            }
            return std::nullopt;
        }
        // '%' in column 0 escapes the whole line.
        if (!line.empty() && line.front() == '%') continue;
        if (!is_blank(line)) break;
    }

    ++games_seen_;
    const std::size_t start_line = line_no_;
    GameRecord game;
    std::optional<std::string> error;

    // Tag section.
    bool have_line = true;
    while (have_line && trim_left(line).starts_with('[')) {
        std::string name;
        std::string value;
        if (!parse_tag_line(line, name, value)) {
            if (!error) error = "malformed tag pair at line " + std::to_string(line_no_);
        } else {
            game.tags[name] = value;
        }
        have_line = read_line(line);
    }

    // Movetext runs until a termination marker, the next tag section or EOF.
    MovetextScanner scan;
    while (have_line) {
        if (!scan.in_comment && scan.rav_depth == 0 && trim_left(line).starts_with('[')) {
            pending_ = std::move(line);
            break;
        }
        if (!(line.starts_with('%')) && scan.feed(line)) break;
        have_line = read_line(line);
    }
    if (in_.bad()) {
        done_ = true;
        MalformedGame fatal;
        fatal.game_number = games_seen_;
        fatal.line = start_line;
        fatal.message = "stream read error";
        fatal.fatal = true;
        return fatal;
    }

    MalformedGame report;
    report.game_number = games_seen_;
    report.line = start_line;
    if (error) {
        report.message = *error;
        return report;
    }

    const auto result_tag = game.tag("Result");
    const auto tag_result = result_tag ? parse_result(*result_tag) : std::nullopt;
    if (scan.marker && tag_result && *scan.marker != *tag_result) {
        report.message = "Result tag disagrees with termination marker";
        return report;
    }
    game.result = scan.marker ? *scan.marker : tag_result.value_or(GameResult::Unknown);

    Position pos;
    try {
        pos = game.start_position();
    } catch (const FenError& e) {
        report.message = std::string("bad FEN tag: ") + e.what();
        return report;
    }

    for (std::size_t i = 0; i < scan.tokens.size(); ++i) {
        const std::string& tok = scan.tokens[i];
        if (tok == "--" || tok == "Z0") {
            game.truncated = true;
            break;
        }
        try {
            const ChessMove m = parse_san(pos, tok);
            game.moves.push_back(emit_san(pos, m));
            pos = make_move_unchecked(pos, m);
        } catch (const MoveError& e) {
            report.message = e.what();
            report.move_index = i + 1;
            report.fen = emit_fen(pos);
            return report;
        }
    }
    return game;
}

std::vector<PgnItem> parse_pgn(std::istream& in) {
    PgnReader reader(in);
    std::vector<PgnItem> items;
    while (auto item = reader.next()) items.push_back(std::move(*item));
    return items;
}

std::vector<PgnItem> parse_pgn(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_pgn(in);
}

bool GameFilter::accepts(const GameRecord& g) const {
    if (require_result && g.result == GameResult::Unknown) return false;
    if (min_rating) {
        for (const char* side : {"WhiteElo", "BlackElo"}) {
            const auto elo = g.tag(side);
            if (!elo) return false;
            const auto v = to_int(*elo);
            if (!v || *v < *min_rating) return false;
        }
    }
    for (const auto& pred : tag_predicates) {
        const auto value = g.tag(pred.tag);
        if (!value || !pred.accept || !pred.accept(*value)) return false;
    }
    return true;
}

std::vector<GameRecord> filter_games(std::span<const GameRecord> games, const GameFilter& f) {
    std::vector<GameRecord> out;
    for (const auto& g : games) {
        if (f.accepts(g)) out.push_back(g);
    }
    return out;
}

std::string decode_tag_text(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(raw[i]); };
    std::size_t i = 0;
    while (i < raw.size()) {
        const unsigned char c = byte(i);
        std::size_t len = 0;
        if (c < 0x80) {
            len = 1;
        } else if (c >= 0xC2 && c <= 0xDF) {
            len = 2;
        } else if (c >= 0xE0 && c <= 0xEF) {
            len = 3;
        } else if (c >= 0xF0 && c <= 0xF4) {
            len = 4;
        }
        bool valid = len > 0 && i + len <= raw.size();
        for (std::size_t k = 1; valid && k < len; ++k) valid = (byte(i + k) & 0xC0) == 0x80;
        if (valid) {
            out.append(raw.substr(i, len));
            i += len;
        } else {
            out += static_cast<char>(0xC0 | (c >> 6));
            out += static_cast<char>(0x80 | (c & 0x3F));
            ++i;
        }
    }
    return out;
}

std::function<bool(std::string_view)> time_control_at_least(int seconds) {
    return [seconds](std::string_view tc) {
        tc = tc.substr(0, tc.find(':'));
        if (auto slash = tc.find('/'); slash != std::string_view::npos) tc = tc.substr(slash + 1);
        tc = tc.substr(0, tc.find('+'));
        const auto base = to_int(tc);
        return base && *base >= seconds;
    };
}

} // namespace openbook

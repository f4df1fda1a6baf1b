#include "mailbox_oracle.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <stdexcept>

namespace oracle {

namespace {

constexpr int OFF = 99;
enum { EMPTY = 0, P = 1, N = 2, B = 3, R = 4, Q = 5, K = 6 };

struct Board {
    std::array<int, 120> sq{};
    int side = 1; // +1 white, -1 black
    int castle = 0; // 1 K, 2 Q, 4 k, 8 q
    int ep = 0;     // 0 for none
};

struct Mv {
    int from, to, promo, kind; // kind: 0 normal, 1 double push, 2 ep, 3 castle
};

int idx(int file, int rank) { return 21 + file + rank * 10; }

Board read_fen(const std::string& fen) {
    Board b;
    b.sq.fill(OFF);
    for (int r = 0; r < 8; ++r)
        for (int f = 0; f < 8; ++f) b.sq[idx(f, r)] = EMPTY;
    std::istringstream in(fen);
    std::string place, side, castle, ep;
    in >> place >> side >> castle >> ep;
    int r = 7, f = 0;
    for (char c : place) {
        if (c == '/') {
            --r;
            f = 0;
        } else if (c >= '1' && c <= '8') {
            f += c - '0';
        } else {
            const std::string letters = "pnbrqk";
            const auto lower = static_cast<char>(c | 0x20);
            const int kind = static_cast<int>(letters.find(lower)) + 1;
            b.sq[idx(f, r)] = (c == lower) ? -kind : kind;
            ++f;
        }
    }
    b.side = side == "w" ? 1 : -1;
    for (char c : castle) {
        if (c == 'K') b.castle |= 1;
        if (c == 'Q') b.castle |= 2;
        if (c == 'k') b.castle |= 4;
        if (c == 'q') b.castle |= 8;
    }
    if (ep != "-") b.ep = idx(ep[0] - 'a', ep[1] - '1');
    return b;
}

bool attacked(const Board& b, int s, int by) {
    if (by == 1) {
        if (b.sq[s - 9] == P || b.sq[s - 11] == P) return true;
    } else {
        if (b.sq[s + 9] == -P || b.sq[s + 11] == -P) return true;
    }
    for (int d : {-21, -19, -12, -8, 8, 12, 19, 21})
        if (b.sq[s + d] == by * N) return true;
    for (int d : {-11, -10, -9, -1, 1, 9, 10, 11})
        if (b.sq[s + d] == by * K) return true;
    for (int d : {-10, -1, 1, 10}) {
        int t = s + d;
        while (b.sq[t] == EMPTY) t += d;
        if (b.sq[t] == by * R || b.sq[t] == by * Q) return true;
    }
    for (int d : {-11, -9, 9, 11}) {
        int t = s + d;
        while (b.sq[t] == EMPTY) t += d;
        if (b.sq[t] == by * B || b.sq[t] == by * Q) return true;
    }
    return false;
}

int own(const Board& b, int s) { return b.sq[s] != OFF && b.sq[s] != EMPTY && (b.sq[s] > 0) == (b.side > 0); }
int enemy(const Board& b, int s) { return b.sq[s] != OFF && b.sq[s] != EMPTY && (b.sq[s] > 0) != (b.side > 0); }

void pseudo(const Board& b, std::vector<Mv>& out) {
    const int us = b.side;
    for (int s = 21; s < 99; ++s) {
        if (!own(b, s)) continue;
        const int kind = b.sq[s] * us;
        if (kind == P) {
            const int fwd = us * 10;
            const int rank = (s - 21) / 10;
            const bool promo_next = (us == 1 && rank == 6) || (us == -1 && rank == 1);
            auto push = [&](int to, int k) {
                if (promo_next) {
                    for (int pr : {Q, R, B, N}) out.push_back({s, to, pr, 0});
                } else {
                    out.push_back({s, to, 0, k});
                }
            };
            if (b.sq[s + fwd] == EMPTY) {
                push(s + fwd, 0);
                const bool start = (us == 1 && rank == 1) || (us == -1 && rank == 6);
                if (start && b.sq[s + 2 * fwd] == EMPTY) out.push_back({s, s + 2 * fwd, 0, 1});
            }
            for (int side_step : {-1, 1}) {
                const int to = s + fwd + side_step;
                if (enemy(b, to)) push(to, 0);
                else if (to == b.ep && b.ep != 0) out.push_back({s, to, 0, 2});
            }
        } else if (kind == N || kind == K) {
            static const int kn[] = {-21, -19, -12, -8, 8, 12, 19, 21};
            static const int kg[] = {-11, -10, -9, -1, 1, 9, 10, 11};
            const int* d = kind == N ? kn : kg;
            for (int i = 0; i < 8; ++i) {
                const int to = s + d[i];
                if (b.sq[to] == EMPTY || enemy(b, to)) out.push_back({s, to, 0, 0});
            }
        } else {
            std::vector<int> dirs;
            if (kind != B) dirs.insert(dirs.end(), {-10, -1, 1, 10});
            if (kind != R) dirs.insert(dirs.end(), {-11, -9, 9, 11});
            for (int d : dirs) {
                int to = s + d;
                while (b.sq[to] == EMPTY) {
                    out.push_back({s, to, 0, 0});
                    to += d;
                }
                if (enemy(b, to)) out.push_back({s, to, 0, 0});
            }
        }
    }
    const int e = us == 1 ? 25 : 95;
    const int ks = us == 1 ? 1 : 4;
    const int qs = us == 1 ? 2 : 8;
    if ((b.castle & ks) && b.sq[e + 1] == EMPTY && b.sq[e + 2] == EMPTY && !attacked(b, e, -us) &&
        !attacked(b, e + 1, -us) && !attacked(b, e + 2, -us))
        out.push_back({e, e + 2, 0, 3});
    if ((b.castle & qs) && b.sq[e - 1] == EMPTY && b.sq[e - 2] == EMPTY && b.sq[e - 3] == EMPTY &&
        !attacked(b, e, -us) && !attacked(b, e - 1, -us) && !attacked(b, e - 2, -us))
        out.push_back({e, e - 2, 0, 3});
}

Board play(const Board& b, const Mv& m) {
    Board n = b;
    const int piece = n.sq[m.from];
    n.sq[m.to] = m.promo ? m.promo * b.side : piece;
    n.sq[m.from] = EMPTY;
    n.ep = 0;
    if (m.kind == 1) n.ep = (m.from + m.to) / 2;
    if (m.kind == 2) n.sq[m.to - 10 * b.side] = EMPTY;
    if (m.kind == 3) {
        if (m.to > m.from) {
            n.sq[m.from + 1] = n.sq[m.from + 3];
            n.sq[m.from + 3] = EMPTY;
        } else {
            n.sq[m.from - 1] = n.sq[m.from - 4];
            n.sq[m.from - 4] = EMPTY;
        }
    }
    auto clear = [&](int s) {
        if (s == 25) n.castle &= ~3;
        if (s == 95) n.castle &= ~12;
        if (s == 28) n.castle &= ~1;
        if (s == 21) n.castle &= ~2;
        if (s == 98) n.castle &= ~4;
        if (s == 91) n.castle &= ~8;
    };
    clear(m.from);
    clear(m.to);
    n.side = -b.side;
    return n;
}

int king_of(const Board& b, int side) {
    for (int s = 21; s < 99; ++s)
        if (b.sq[s] == side * K) return s;
    throw std::logic_error("no king");
}

std::vector<Mv> legal(const Board& b) {
    std::vector<Mv> ps, out;
    pseudo(b, ps);
    for (const auto& m : ps) {
        const Board n = play(b, m);
        if (!attacked(n, king_of(n, b.side), n.side)) out.push_back(m);
    }
    return out;
}

std::uint64_t count(const Board& b, int depth) {
    if (depth == 0) return 1;
    const auto ms = legal(b);
    if (depth == 1) return ms.size();
    std::uint64_t total = 0;
    for (const auto& m : ms) total += count(play(b, m), depth - 1);
    return total;
}

std::string name(int s) {
    const int f = (s - 21) % 10;
    const int r = (s - 21) / 10;
    return {static_cast<char>('a' + f), static_cast<char>('1' + r)};
}

} // namespace

std::uint64_t perft(const std::string& fen, int depth) { return count(read_fen(fen), depth); }

std::vector<std::string> legal_uci(const std::string& fen) {
    std::vector<std::string> out;
    for (const auto& m : legal(read_fen(fen))) {
        std::string u = name(m.from) + name(m.to);
        if (m.promo) u += " pnbrqk"[m.promo];
        out.push_back(u);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace oracle

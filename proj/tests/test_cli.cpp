#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "openbook/book.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = -1;
    std::string out;
    std::string err;
};

std::string quote(const std::string& s) {
    std::string q = "'";
    for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return q + "'";
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / ("openbook-cli-" + std::to_string(::getpid()) + "-" + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    Outcome run(const std::vector<std::string>& args) {
        std::string cmd = quote(OPENBOOK_CLI);
        for (const auto& a : args) cmd += " " + quote(a);
        const fs::path err = dir_ / "stderr.txt";
        cmd += " 2>" + quote(err.string());
        Outcome r;
        FILE* pipe = ::popen(cmd.c_str(), "r");
        if (!pipe) return r;
        char buf[4096];
        std::size_t n = 0;
        while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
        const int status = ::pclose(pipe);
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.err = slurp(err);
        return r;
    }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    static std::string fixture(const std::string& name) { return std::string(OPENBOOK_FIXTURES) + "/" + name; }

    fs::path dir_;
};

} // namespace

TEST_F(Cli, BuildTinyFixtureMatchesHandTally) {
    const Outcome r = run({"build", "--pgn", fixture("tiny.pgn"), "--out", path("tiny.book")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("games\t3\npositions\t4\n"), std::string::npos) << r.out;

    const openbook::Book b = openbook::load_book_text(slurp(path("tiny.book")));
    const auto root = b.query(openbook::Position::initial());
    ASSERT_EQ(root.size(), 2u);
    EXPECT_EQ(root[0].stats, (openbook::MoveStats{"e4", 2, 1, 1, 0}));
    EXPECT_EQ(root[1].stats, (openbook::MoveStats{"d4", 1, 0, 0, 1}));

    const Outcome q = run({"query", "--book", path("tiny.book"), "--fen",
                       "rnbqkbnr/pppppppp/8/8/4P3/8/PPPP1PPP/RNBQKBNR b KQkq - 0 1"});
    ASSERT_EQ(q.code, 0) << q.err;
    EXPECT_EQ(q.out, "rank\tmove\tgames\tscore%\n1\tc5\t1\t50.000\n2\te5\t1\t100.000\n");
}

TEST_F(Cli, BuildEmptyPgn) {
    std::ofstream(path("empty.pgn")).close();
    const Outcome r = run({"build", "--pgn", path("empty.pgn"), "--out", path("empty.book")});
    ASSERT_EQ(r.code, 0) << r.err;
    const openbook::Book b = openbook::load_book_text(slurp(path("empty.book")));
    EXPECT_EQ(b.game_count(), 0u);
    EXPECT_EQ(b.position_count(), 0u);
}

TEST_F(Cli, BuildUnreadablePathLeavesNothing) {
    const Outcome r = run({"build", "--pgn", path("missing.pgn"), "--out", path("out.book")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("missing.pgn"), std::string::npos) << r.err;
    EXPECT_FALSE(fs::exists(path("out.book")));
    EXPECT_FALSE(fs::exists(path("out.book.partial")));
}

TEST_F(Cli, BuildReportsMalformedGamesAndFilters) {
    std::ofstream(path("mixed.pgn")) << "[Result \"1-0\"]\n\n1. e4 e5 2. Ke3 1-0\n\n"
                                        "[Result \"*\"]\n\n1. d4 *\n\n"
                                        "[Result \"0-1\"]\n[WhiteElo \"2100\"]\n[BlackElo \"2500\"]\n\n1. c4 0-1\n";
    const Outcome r = run({"build", "--pgn", path("mixed.pgn"), "--out", path("m.book")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("games\t1\n"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("malformed\t1\n"), std::string::npos) << r.out;
    EXPECT_NE(r.err.find("ply 3"), std::string::npos) << r.err;

    const Outcome all = run({"build", "--pgn", path("mixed.pgn"), "--out", path("all.book"), "--require-result=false"});
    ASSERT_EQ(all.code, 0) << all.err;
    const Outcome rated = run({"build", "--pgn", path("mixed.pgn"), "--out", path("r.book"), "--min-rating", "2400"});
    ASSERT_EQ(rated.code, 0) << rated.err;
    EXPECT_NE(rated.out.find("games\t0\n"), std::string::npos) << rated.out;
}

TEST_F(Cli, ParallelBuildIsBitIdentical) {
    const std::vector<std::string> inputs = {fixture("human.pgn"), fixture("engine.pgn"), fixture("tiny.pgn")};
    std::vector<std::string> seq = {"build", "--out", path("seq.book"), "--pgn"};
    seq.insert(seq.end(), inputs.begin(), inputs.end());
    std::vector<std::string> par = {"build", "--jobs", "3", "--out", path("par.book"), "--pgn"};
    par.insert(par.end(), inputs.begin(), inputs.end());
    ASSERT_EQ(run(seq).code, 0);
    ASSERT_EQ(run(par).code, 0);
    EXPECT_EQ(slurp(path("seq.book")), slurp(path("par.book")));
}

TEST_F(Cli, QueryFixtureRanks) {
    ASSERT_EQ(run({"build", "--pgn", fixture("human.pgn"), "--out", path("h.book")}).code, 0);
    const Outcome q = run({"query", "--book", path("h.book"), "--epd",
                       "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - id \"26\";"});
    ASSERT_EQ(q.code, 0) << q.err;
    std::istringstream lines(q.out);
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, "rank\tmove\tgames\tscore%");
    std::vector<std::string> order;
    while (std::getline(lines, line)) {
        std::istringstream cells(line);
        std::string rank, move;
        std::getline(cells, rank, '\t');
        std::getline(cells, move, '\t');
        order.push_back(move);
    }
    const std::vector<std::string> expected = {"e4", "d4", "Nf3", "c4", "g3", "b3", "f4", "Nc3", "b4", "d3"};
    EXPECT_EQ(order, expected);

    const Outcome filtered = run({"query", "--book", path("h.book"), "--min-games", "10", "--fen",
                              "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1"});
    EXPECT_EQ(std::count(filtered.out.begin(), filtered.out.end(), '\n'), 3);
}

TEST_F(Cli, QueryUnbookedAndMalformed) {
    ASSERT_EQ(run({"build", "--pgn", fixture("tiny.pgn"), "--out", path("t.book")}).code, 0);
    const Outcome absent = run({"query", "--book", path("t.book"), "--fen", "4k3/8/8/8/8/8/8/4K3 w - - 0 1"});
    EXPECT_EQ(absent.code, 0);
    EXPECT_EQ(absent.out, "rank\tmove\tgames\tscore%\n");

    const Outcome bad = run({"query", "--book", path("t.book"), "--fen", "not/a/fen w - - 0 1"});
    EXPECT_EQ(bad.code, 2);
    EXPECT_FALSE(bad.err.empty());

    const Outcome missing = run({"query", "--book", path("t.book")});
    EXPECT_EQ(missing.code, 1);
    const Outcome no_book = run({"query", "--book", path("nope.book"), "--fen", "4k3/8/8/8/8/8/8/4K3 w - - 0 1"});
    EXPECT_EQ(no_book.code, 2);
}

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"frobnicate"}).code, 1);
    EXPECT_EQ(run({"build", "--out", path("x.book")}).code, 1);
    EXPECT_EQ(run({"build", "--pgn", fixture("tiny.pgn"), "--out", path("x.book"), "--depth", "0"}).code, 1);
    EXPECT_EQ(run({"compare", "--book1", "a"}).code, 1);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(Cli, CompareAndPlot) {
    ASSERT_EQ(run({"build", "--pgn", fixture("human.pgn"), "--out", path("h.book")}).code, 0);
    ASSERT_EQ(run({"build", "--pgn", fixture("engine.pgn"), "--out", path("e.book")}).code, 0);
    const std::vector<std::string> args = {"compare", "--book1", path("h.book"), "--book2", path("e.book"),
                                           "--suite", fixture("suite.epd"), "--min-games", "1", "--bootstrap",
                                           "1000", "--exclude", "26", "--out", path("r1")};
    const Outcome c = run(args);
    ASSERT_EQ(c.code, 0) << c.err;
    EXPECT_TRUE(fs::exists(path("r1/report.tsv")));
    EXPECT_TRUE(fs::exists(path("r1/report.md")));
    EXPECT_EQ(c.out, slurp(path("r1/report.md")));

    auto again = args;
    again.back() = path("r2");
    ASSERT_EQ(run(again).code, 0);
    EXPECT_EQ(slurp(path("r1/report.tsv")), slurp(path("r2/report.tsv")));

    const Outcome p = run({"plot", "--report", path("r1/report.tsv"), "--out", path("fig.svg"), "--mark", "26"});
    ASSERT_EQ(p.code, 0) << p.err;
    const std::string svg = slurp(path("fig.svg"));
    EXPECT_NE(svg.find("class=\"point outlier\""), std::string::npos);

    const Outcome bad_suite = run({"compare", "--book1", path("h.book"), "--book2", path("e.book"), "--suite",
                               path("none.epd"), "--out", path("r3")});
    EXPECT_EQ(bad_suite.code, 2);
    std::ofstream(path("notes.tsv")) << "hello\n";
    EXPECT_EQ(run({"plot", "--report", path("notes.tsv"), "--out", path("x.svg")}).code, 2);
    EXPECT_FALSE(fs::exists(path("x.svg")));
}

TEST_F(Cli, CompareRejectsDamagedBook) {
    ASSERT_EQ(run({"build", "--pgn", fixture("tiny.pgn"), "--out", path("t.book")}).code, 0);
    std::string text = slurp(path("t.book"));
    text.resize(text.size() / 2);
    std::ofstream(path("cut.book"), std::ios::binary) << text;
    const Outcome r = run({"compare", "--book1", path("t.book"), "--book2", path("cut.book"), "--suite",
                       fixture("suite.epd"), "--out", path("r")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("cut.book"), std::string::npos) << r.err;
}

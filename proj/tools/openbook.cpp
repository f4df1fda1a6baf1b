// openbook: build opening books from PGN and compare two books over a suite
// of test positions.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "openbook/book.hpp"
#include "openbook/measures.hpp"
#include "openbook/pgn.hpp"
#include "openbook/report.hpp"

namespace fs = std::filesystem;
using namespace openbook;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw DataError("error reading " + path);
    return ss.str();
}

/// Writes next to the target and renames, so a failed run leaves nothing behind.
void write_file_atomic(const fs::path& path, std::string_view content) {
    fs::path tmp = path;
    tmp += ".partial";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + path.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.close();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw DataError("error writing " + path.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw DataError("cannot move output into place: " + path.string());
    }
}

Book load_book_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path);
    try {
        return load_book(in);
    } catch (const BookFormatError& e) {
        throw DataError(path + ": " + e.what());
    }
}

struct FileBuild {
    Book book;
    std::size_t malformed = 0;
    std::size_t filtered = 0;
    std::size_t skipped = 0;
    std::vector<std::string> warnings;
};

FileBuild build_from_file(const std::string& path, int depth, const GameFilter& filter) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path);
    FileBuild fb{Book(depth), 0, 0, 0, {}};
    PgnReader reader(in);
    while (auto item = reader.next()) {
        if (auto* bad = std::get_if<MalformedGame>(&*item)) {
            if (bad->fatal) throw DataError(fmt::format("{}:{}: {}", path, bad->line, bad->message));
            ++fb.malformed;
            std::string where = bad->move_index ? fmt::format(" (ply {}, position {})", *bad->move_index, *bad->fen) : "";
            fb.warnings.push_back(fmt::format("{}:{}: game {} skipped: {}{}", path, bad->line, bad->game_number,
                                              bad->message, where));
            continue;
        }
        const auto& game = std::get<GameRecord>(*item);
        if (!filter.accepts(game)) {
            ++fb.filtered;
            continue;
        }
        if (auto reason = fb.book.add_game(game)) {
            ++fb.skipped;
            fb.warnings.push_back(fmt::format("{}: game {} not booked: {}", path, reader.games_seen(), *reason));
        }
    }
    return fb;
}

int cmd_build(const std::vector<std::string>& pgns, int depth, const std::string& out, std::optional<int> min_rating,
              bool require_result, int jobs) {
    GameFilter filter;
    filter.min_rating = min_rating;
    filter.require_result = require_result;

    std::vector<FileBuild> parts;
    if (jobs <= 1 || pgns.size() <= 1) {
        for (const auto& p : pgns) parts.push_back(build_from_file(p, depth, filter));
    } else {
        // Fixed partition: one task per file, merged in argument order.
        for (std::size_t start = 0; start < pgns.size(); start += static_cast<std::size_t>(jobs)) {
            std::vector<std::future<FileBuild>> batch;
            for (std::size_t i = start; i < std::min(pgns.size(), start + static_cast<std::size_t>(jobs)); ++i) {
                batch.push_back(std::async(std::launch::async, build_from_file, pgns[i], depth, filter));
            }
            for (auto& f : batch) parts.push_back(f.get());
        }
    }

    Book book(depth);
    std::size_t malformed = 0;
    std::size_t filtered = 0;
    std::size_t skipped = 0;
    for (auto& part : parts) {
        for (const auto& w : part.warnings) std::cerr << "warning: " << w << '\n';
        book.merge(part.book);
        malformed += part.malformed;
        filtered += part.filtered;
        skipped += part.skipped;
    }
    std::string source;
    for (const auto& p : pgns) source += (source.empty() ? "" : ",") + fs::path(p).filename().string();
    book.set_source(source);

    write_file_atomic(out, save_book(book));
    std::cout << fmt::format("games\t{}\npositions\t{}\nmalformed\t{}\nfiltered\t{}\nskipped\t{}\n", book.game_count(),
                             book.position_count(), malformed, filtered, skipped);
    return 0;
}

int cmd_query(const std::string& book_path, const std::string& fen, const std::string& epd, std::uint64_t min_games) {
    const Book book = load_book_file(book_path);
    Position pos;
    try {
        pos = !fen.empty() ? parse_fen(fen) : parse_epd(epd).position;
    } catch (const FenError& e) {
        throw DataError(e.what());
    }
    std::cout << "rank\tmove\tgames\tscore%\n";
    for (const auto& e : book.query(pos)) {
        if (e.games() < min_games) continue;
        std::cout << fmt::format("{}\t{}\t{}\t{:.3f}\n", e.rank, e.san(), e.games(), e.score_percent());
    }
    return 0;
}

int cmd_compare(const std::string& book1, const std::string& book2, const std::string& suite_path,
                const CompareOptions& options, const std::string& out_dir) {
    const Book first = load_book_file(book1);
    const Book second = load_book_file(book2);
    std::vector<SuiteEntry> suite;
    {
        std::ifstream in(suite_path);
        if (!in) throw DataError("cannot read " + suite_path);
        suite = parse_epd_suite(in);
    }

    const ReportDocument doc = run_comparison(first, second, suite, options, BookDescriptor::describe(first, book1),
                                              BookDescriptor::describe(second, book2));
    const std::string tsv = render_tsv(doc);
    const std::string md = render_markdown(tsv);

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw DataError("cannot create " + out_dir);
    write_file_atomic(fs::path(out_dir) / "report.tsv", tsv);
    write_file_atomic(fs::path(out_dir) / "report.md", md);
    std::cout << md;
    return 0;
}

int cmd_plot(const std::string& report_path, const std::string& out, const std::string& mark) {
    const ParsedReport report = parse_report_tsv(read_file(report_path));
    write_file_atomic(out, render_scatter_svg(report, parse_id_list(mark)));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Build chess opening books and measure how similar two books are"};
    app.require_subcommand(1);

    auto* build = app.add_subcommand("build", "Build a book from PGN files");
    std::vector<std::string> pgns;
    int depth = Book::kDefaultDepth;
    std::string build_out;
    std::optional<int> min_rating;
    bool require_result = true;
    int jobs = 1;
    build->add_option("--pgn", pgns, "PGN input files")->required();
    build->add_option("--depth", depth, "Plies per game to record")->check(CLI::PositiveNumber);
    build->add_option("--out", build_out, "Output book file")->required();
    build->add_option("--min-rating", min_rating, "Minimum WhiteElo and BlackElo");
    build->add_flag("--require-result{true}", require_result, "Drop games with unknown result (default on)");
    build->add_option("--jobs", jobs, "Parallel workers (one file each)")->check(CLI::PositiveNumber);

    auto* query = app.add_subcommand("query", "List the book moves of a position");
    std::string query_book;
    std::string fen;
    std::string epd;
    std::uint64_t query_min_games = 0;
    query->add_option("--book", query_book, "Book file")->required();
    auto* fen_opt = query->add_option("--fen", fen, "Position as FEN");
    auto* epd_opt = query->add_option("--epd", epd, "Position as an EPD line");
    fen_opt->excludes(epd_opt);
    query->add_option("--min-games", query_min_games, "Hide moves with fewer games");

    auto* compare = app.add_subcommand("compare", "Compare two books over an EPD suite");
    std::string book1;
    std::string book2;
    std::string suite;
    std::string exclude;
    std::string precision = "table";
    std::string compare_out;
    CompareOptions options;
    compare->add_option("--book1", book1, "First book")->required();
    compare->add_option("--book2", book2, "Second book")->required();
    compare->add_option("--suite", suite, "EPD suite of test positions")->required();
    compare->add_option("--min-games", options.min_games, "Minimum games per move for JSD and expected score");
    compare->add_option("--bootstrap", options.resamples, "Bootstrap resamples")->check(CLI::Range(1000, 100000000));
    compare->add_option("--seed", options.seed, "Bootstrap RNG seed");
    compare->add_option("--exclude", exclude, "Position ids left out of the second correlation (comma separated)");
    compare->add_option("--precision", precision, "Number format: table (3 decimals) or full")
        ->check(CLI::IsMember({"table", "full"}));
    compare->add_option("--out", compare_out, "Output directory")->required();

    auto* plot = app.add_subcommand("plot", "Scatter plot of M-measure against JSD");
    std::string report;
    std::string plot_out;
    std::string mark;
    plot->add_option("--report", report, "report.tsv from compare")->required();
    plot->add_option("--out", plot_out, "Output SVG")->required();
    plot->add_option("--mark", mark, "Position ids drawn as outliers (comma separated)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }
    if (*query && fen.empty() && epd.empty()) {
        std::cerr << "error: query needs --fen or --epd\n";
        return kExitUsage;
    }

    try {
        if (*build) return cmd_build(pgns, depth, build_out, min_rating, require_result, jobs);
        if (*query) return cmd_query(query_book, fen, epd, query_min_games);
        if (*compare) {
            options.exclude = parse_id_list(exclude);
            options.precision = precision == "full" ? Precision::Full : Precision::Table;
            return cmd_compare(book1, book2, suite, options, compare_out);
        }
        if (*plot) return cmd_plot(report, plot_out, mark);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

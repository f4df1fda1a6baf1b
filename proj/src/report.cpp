#include "openbook/report.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <sstream>

namespace openbook {

namespace {

constexpr std::string_view kUndefined = "undefined";
constexpr std::string_view kReportHeader = "openbook-report v1";

std::string join(const std::set<std::string>& ids, char sep = ',') {
    std::string out;
    for (const auto& id : ids) {
        if (!out.empty()) out += sep;
        out += id;
    }
    return out;
}

std::string format_value(std::optional<double> v, Precision precision) {
    if (!v) return std::string(kUndefined);
    return precision == Precision::Full ? fmt::format("{:.17g}", *v) : fmt::format("{:.3f}", *v);
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    for (;;) {
        const std::size_t tab = line.find('\t', i);
        out.push_back(line.substr(i, tab == std::string_view::npos ? std::string_view::npos : tab - i));
        if (tab == std::string_view::npos) break;
        i = tab + 1;
    }
    return out;
}

CorrelationBlock correlate(const std::vector<ComparisonRow>& rows, const std::set<std::string>& drop,
                           const CompareOptions& options, std::string label) {
    PairedSample sample;
    for (const auto& r : rows) {
        if (r.m_measure && r.jsd && !drop.contains(r.id)) sample.add(r.id, *r.m_measure, *r.jsd);
    }
    CorrelationBlock block;
    block.set = std::move(label);
    block.n = sample.size();
    try {
        block.pearson = pearson(sample);
    } catch (const UndefinedStatistic&) {
        return block;
    }
    try {
        block.ci = bootstrap_ci(
            sample, [](std::span<const double> x, std::span<const double> y) { return pearson(x, y); },
            options.resamples, options.seed);
    } catch (const UndefinedStatistic&) {
    }
    return block;
}

std::string correlation_line(const CorrelationBlock& c, Precision p) {
    std::string line = fmt::format("# correlation\tset={}\tn={}\tpearson={}", c.set, c.n, format_value(c.pearson, p));
    if (c.ci) {
        line += fmt::format("\tci_lower={}\tci_upper={}\tdegenerate={}", format_value(c.ci->lower, p),
                            format_value(c.ci->upper, p), c.ci->degenerate);
    } else {
        line += fmt::format("\tci_lower={0}\tci_upper={0}", kUndefined);
    }
    return line + '\n';
}

std::string book_line(std::string_view label, const BookDescriptor& d) {
    return fmt::format("# {}\tpath={}\tsource={}\tgames={}\tpositions={}\tdepth={}\tsha256={}\n", label, d.path,
                       d.source, d.games, d.positions, d.depth, d.sha256);
}

std::string escape_xml(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

std::vector<SuiteEntry> parse_epd_suite(std::istream& in) {
    std::vector<SuiteEntry> suite;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        EpdRecord rec;
        try {
            rec = parse_epd(line);
        } catch (const FenError& e) {
            throw DataError("suite line " + std::to_string(line_no) + ": " + e.what());
        }
        std::string id = rec.operation("id").value_or("pos" + std::to_string(suite.size() + 1));
        if (id.empty()) throw DataError("suite line " + std::to_string(line_no) + ": empty id");
        if (!seen.insert(id).second) throw DataError("suite line " + std::to_string(line_no) + ": duplicate id '" + id + "'");
        suite.push_back({std::move(id), rec.position});
    }
    if (in.bad()) throw DataError("suite: read error");
    if (suite.empty()) throw DataError("suite is empty");
    return suite;
}

BookDescriptor BookDescriptor::describe(const Book& b, std::string path) {
    BookDescriptor d;
    d.path = std::move(path);
    d.source = b.source();
    d.games = b.game_count();
    d.positions = b.position_count();
    d.depth = b.max_depth();
    const std::string text = save_book(b);
    d.sha256 = text.substr(text.rfind("sha256 ") + 7, 64);
    return d;
}

ReportDocument run_comparison(const Book& first, const Book& second, const std::vector<SuiteEntry>& suite,
                              const CompareOptions& options, BookDescriptor first_desc, BookDescriptor second_desc) {
    ReportDocument doc;
    doc.options = options;
    doc.first = std::move(first_desc);
    doc.second = std::move(second_desc);

    std::vector<double> ew_first;
    std::vector<double> ew_second;
    for (const auto& entry : suite) {
        const RankedMoveList a = first.query(entry.position);
        const RankedMoveList b = second.query(entry.position);
        doc.comparisons.push_back(compare_position(entry.id, a, b, options.min_games));
        doc.expected.push_back(expected_score_row(entry.id, entry.side_to_move(), a, b, options.min_games));

        const auto& c = doc.comparisons.back();
        const auto& e = doc.expected.back();
        doc.undefined_cells += !c.m_measure + !c.max_m + !c.jsd + !c.overlap + !e.first + !e.second;
        if (e.first) ew_first.push_back(e.first->percent);
        if (e.second) ew_second.push_back(e.second->percent);
    }

    doc.summary = summarize(std::span<const ComparisonRow>(doc.comparisons));
    if (ew_first.size() >= 2) doc.expected_first = summarize(ew_first);
    if (ew_second.size() >= 2) doc.expected_second = summarize(ew_second);

    doc.correlation_all = correlate(doc.comparisons, {}, options, "all");
    doc.correlation_excluded =
        correlate(doc.comparisons, options.exclude, options, "excluding:" + (options.exclude.empty() ? "-" : join(options.exclude)));
    return doc;
}

std::string render_tsv(const ReportDocument& r) {
    const Precision p = r.options.precision;
    std::string out;
    out += fmt::format("# {}\n", kReportHeader);
    out += book_line("book1", r.first);
    out += book_line("book2", r.second);
    out += fmt::format("# min_games\t{}\n", r.options.min_games);
    out += fmt::format("# precision\t{}\n", p == Precision::Full ? "full" : "3");
    out += fmt::format("# bootstrap\tresamples={}\tseed={}\trng={}\tmethod=percentile\tquantile=linear\tlevel=0.95\n",
                       r.options.resamples, r.options.seed, kBootstrapRng);
    out += "# std\tsample(n-1)\n";
    out += fmt::format("# exclude\t{}\n", r.options.exclude.empty() ? "-" : join(r.options.exclude));
    out += fmt::format("# undefined_cells\t{}\n", r.undefined_cells);
    out += correlation_line(r.correlation_all, p);
    out += correlation_line(r.correlation_excluded, p);

    out += "id\tside\tm_measure\tmax_m\tjsd\toverlap\tew_book1\tgames_book1\tew_book2\tgames_book2\n";
    for (std::size_t i = 0; i < r.comparisons.size(); ++i) {
        const auto& c = r.comparisons[i];
        const auto& e = r.expected[i];
        auto ew = [&](const std::optional<ExpectedScore>& s) {
            return s ? format_value(s->percent, p) + '\t' + std::to_string(s->games)
                     : std::string(kUndefined) + '\t' + std::string(kUndefined);
        };
        out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n", c.id, e.side_to_move == Color::White ? "w" : "b",
                           format_value(c.m_measure, p), format_value(c.max_m, p), format_value(c.jsd, p),
                           format_value(c.overlap, p), ew(e.first), ew(e.second));
    }

    auto stat = [&](const std::optional<ColumnSummary>& s, bool mean) {
        return format_value(s ? std::optional<double>(mean ? s->mean : s->std) : std::nullopt, p);
    };
    for (bool mean : {true, false}) {
        out += fmt::format("{}\t-\t{}\t{}\t{}\t{}\t{}\t-\t{}\t-\n", mean ? "Avg" : "Std", stat(r.summary.m_measure, mean),
                           stat(r.summary.max_m, mean), stat(r.summary.jsd, mean), stat(r.summary.overlap, mean),
                           stat(r.expected_first, mean), stat(r.expected_second, mean));
    }
    return out;
}

std::optional<std::string> ParsedReport::meta(std::string_view key) const {
    for (const auto& [k, v] : metadata) {
        if (k == key) return v;
    }
    return std::nullopt;
}

std::size_t ParsedReport::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw DataError("report has no column '" + std::string(name) + "'");
}

std::vector<std::vector<std::string>> ParsedReport::position_rows() const {
    std::vector<std::vector<std::string>> out;
    for (const auto& row : rows) {
        if (!row.empty() && row[0] != "Avg" && row[0] != "Std") out.push_back(row);
    }
    return out;
}

ParsedReport parse_report_tsv(std::string_view tsv) {
    ParsedReport report;
    std::size_t i = 0;
    std::size_t line_no = 0;
    bool first_line = true;
    while (i < tsv.size()) {
        const std::size_t nl = tsv.find('\n', i);
        std::string_view line = tsv.substr(i, nl == std::string_view::npos ? std::string_view::npos : nl - i);
        i = nl == std::string_view::npos ? tsv.size() : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (first_line) {
            if (line != fmt::format("# {}", kReportHeader)) throw DataError("not an openbook report");
            first_line = false;
            continue;
        }
        if (line.empty()) continue;
        if (line.starts_with("# ")) {
            line.remove_prefix(2);
            const std::size_t tab = line.find('\t');
            report.metadata.emplace_back(std::string(line.substr(0, tab)),
                                         tab == std::string_view::npos ? "" : std::string(line.substr(tab + 1)));
            continue;
        }
        std::vector<std::string> cells;
        for (auto c : split_tabs(line)) cells.emplace_back(c);
        if (report.header.empty()) {
            report.header = std::move(cells);
        } else {
            if (cells.size() != report.header.size()) {
                throw DataError("report line " + std::to_string(line_no) + ": expected " +
                                std::to_string(report.header.size()) + " cells");
            }
            report.rows.push_back(std::move(cells));
        }
    }
    if (first_line) throw DataError("report is empty");
    if (report.header.empty()) throw DataError("report has no table");
    return report;
}

std::optional<double> parse_cell(std::string_view cell) {
    if (cell == kUndefined || cell == "-") return std::nullopt;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw DataError("not a number: '" + std::string(cell) + "'");
    }
    return v;
}

std::string render_markdown(std::string_view tsv) {
    const ParsedReport r = parse_report_tsv(tsv);
    const std::size_t id = r.column("id");
    const std::size_t side = r.column("side");
    auto cell = [&](const std::vector<std::string>& row, std::string_view name) { return row[r.column(name)]; };

    std::string out = "# Opening book comparison\n\n";
    for (std::string_view key : {"book1", "book2"}) {
        if (auto m = r.meta(key)) {
            std::string text = *m;
            for (char& c : text) {
                if (c == '\t') c = ' ';
            }
            out += fmt::format("- **{}**: {}\n", key, text);
        }
    }
    if (auto m = r.meta("min_games")) out += fmt::format("- minimum games per move (JSD, Ew%): {}\n", *m);
    if (auto m = r.meta("undefined_cells")) out += fmt::format("- undefined cells: {}\n", *m);

    out += "\n## Similarity per position\n\n| Pos | M-measure | MaxM | JSD | Overlap |\n|---|---|---|---|---|\n";
    for (const auto& row : r.rows) {
        out += fmt::format("| {} | {} | {} | {} | {} |\n", row[id], cell(row, "m_measure"), cell(row, "max_m"),
                           cell(row, "jsd"), cell(row, "overlap"));
    }

    out += "\n## Expected percentage score (White's viewpoint)\n\n"
           "| Pos | Ew%(book1) | # book1 | Ew%(book2) | # book2 |\n|---|---|---|---|---|\n";
    for (const auto& row : r.rows) {
        const std::string pos = row[side] == "-" ? row[id] : row[id] + ' ' + row[side];
        out += fmt::format("| {} | {} | {} | {} | {} |\n", pos, cell(row, "ew_book1"), cell(row, "games_book1"),
                           cell(row, "ew_book2"), cell(row, "games_book2"));
    }

    out += "\n## Correlation of M-measure and JSD\n\n";
    for (const auto& [key, value] : r.metadata) {
        if (key != "correlation") continue;
        std::string text = value;
        for (char& c : text) {
            if (c == '\t') c = ' ';
        }
        out += "- " + text + '\n';
    }
    return out;
}

std::string render_scatter_svg(const ParsedReport& report, const std::set<std::string>& marked) {
    const std::size_t id = report.column("id");
    const std::size_t mx = report.column("m_measure");
    const std::size_t jy = report.column("jsd");

    struct Point {
        std::string id;
        double m;
        double j;
    };
    std::vector<Point> points;
    for (const auto& row : report.position_rows()) {
        const auto m = parse_cell(row[mx]);
        const auto j = parse_cell(row[jy]);
        if (m && j) points.push_back({row[id], *m, *j});
    }
    if (points.empty()) throw DataError("no position has both an M-measure and a JSD value");

    constexpr double kWidth = 800;
    constexpr double kHeight = 600;
    constexpr double kLeft = 80;
    constexpr double kRight = 760;
    constexpr double kTop = 40;
    constexpr double kBottom = 530;
    auto px = [&](double v) { return kLeft + v * (kRight - kLeft); };
    auto py = [&](double v) { return kBottom - v * (kBottom - kTop); };

    std::string svg;
    svg += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
                       kWidth, kHeight);
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", kLeft, kBottom, kRight);
    svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", kLeft, kBottom, kTop);
    for (int t = 0; t <= 10; t += 2) {
        const double v = t / 10.0;
        svg += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1}\" x2=\"{0:.1f}\" y2=\"{2}\" stroke=\"black\"/>\n", px(v), kBottom,
                           kBottom + 6);
        svg += fmt::format("<text x=\"{:.1f}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{:.1f}</text>\n", px(v),
                           kBottom + 20, v);
        svg += fmt::format("<line x1=\"{0}\" y1=\"{1:.1f}\" x2=\"{2}\" y2=\"{1:.1f}\" stroke=\"black\"/>\n", kLeft - 6,
                           py(v), kLeft);
        svg += fmt::format("<text x=\"{}\" y=\"{:.1f}\" font-size=\"12\" text-anchor=\"end\">{:.1f}</text>\n", kLeft - 10,
                           py(v) + 4, v);
    }
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\">M-measure</text>\n",
                       (kLeft + kRight) / 2, kHeight - 25);
    svg += fmt::format("<text x=\"20\" y=\"{0:.1f}\" font-size=\"14\" text-anchor=\"middle\" "
                       "transform=\"rotate(-90 20 {0:.1f})\">JSD</text>\n",
                       (kTop + kBottom) / 2);

    for (const auto& pt : points) {
        const double x = px(pt.m);
        const double y = py(pt.j);
        const bool mark = marked.contains(pt.id);
        svg += fmt::format("<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"4\" fill=\"{}\" class=\"{}\"/>\n", x, y,
                           mark ? "red" : "black", mark ? "point outlier" : "point");
        svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"11\">{}</text>\n", x + 6, y - 6, escape_xml(pt.id));
        if (mark) {
            // Arrow from below-left pointing at the point.
            svg += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"red\" "
                               "stroke-width=\"1.5\" class=\"outlier-arrow\"/>\n",
                               x - 40, y + 40, x - 7, y + 7);
            svg += fmt::format("<polygon points=\"{:.1f},{:.1f} {:.1f},{:.1f} {:.1f},{:.1f}\" fill=\"red\"/>\n", x - 5,
                               y + 5, x - 14, y + 8, x - 8, y + 14);
        }
    }
    svg += "</svg>\n";
    return svg;
}

std::set<std::string> parse_id_list(std::string_view csv) {
    std::set<std::string> ids;
    std::size_t i = 0;
    while (i <= csv.size()) {
        const std::size_t comma = std::min(csv.find(',', i), csv.size());
        std::string_view part = csv.substr(i, comma - i);
        while (!part.empty() && std::isspace(static_cast<unsigned char>(part.front()))) part.remove_prefix(1);
        while (!part.empty() && std::isspace(static_cast<unsigned char>(part.back()))) part.remove_suffix(1);
        if (!part.empty()) ids.emplace(part);
        i = comma + 1;
    }
    return ids;
}

} // namespace openbook

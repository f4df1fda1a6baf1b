#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "openbook/book.hpp"
#include "openbook/measures.hpp"
#include "openbook/stats.hpp"

namespace openbook {

/// One test position of a comparison suite.
struct SuiteEntry {
    std::string id;
    Position position;

    Color side_to_move() const { return position.side_to_move(); }
};

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One EPD record per line; blank lines and lines starting with '#' are
/// skipped. Missing `id` opcodes become "pos<N>" with N the 1-based entry
/// number. Throws DataError naming the line for malformed input, duplicate
/// ids, or an empty suite.
std::vector<SuiteEntry> parse_epd_suite(std::istream& in);

enum class Precision { Table, Full };

struct CompareOptions {
    std::uint64_t min_games = kDefaultMinGames;
    std::size_t resamples = 10000;
    std::uint64_t seed = 2006;
    std::set<std::string> exclude;
    Precision precision = Precision::Table;
};

struct BookDescriptor {
    std::string path;
    std::string source;
    std::uint64_t games = 0;
    std::size_t positions = 0;
    int depth = 0;
    std::string sha256;

    static BookDescriptor describe(const Book& b, std::string path);
};

struct CorrelationBlock {
    std::string set; // "all" or "excluding:<ids>"
    std::size_t n = 0;
    std::optional<double> pearson;
    std::optional<BootstrapResult> ci;
};

struct ReportDocument {
    std::vector<ComparisonRow> comparisons;
    std::vector<ExpectedScoreRow> expected;
    ComparisonSummary summary;
    std::optional<ColumnSummary> expected_first;
    std::optional<ColumnSummary> expected_second;
    CorrelationBlock correlation_all;
    CorrelationBlock correlation_excluded;
    std::size_t undefined_cells = 0;
    BookDescriptor first;
    BookDescriptor second;
    CompareOptions options;
};

ReportDocument run_comparison(const Book& first, const Book& second, const std::vector<SuiteEntry>& suite,
                              const CompareOptions& options, BookDescriptor first_desc = {},
                              BookDescriptor second_desc = {});

/// Canonical machine-readable rendering. Byte-identical for identical inputs.
std::string render_tsv(const ReportDocument& report);

/// TSV report read back as text cells.
struct ParsedReport {
    std::vector<std::pair<std::string, std::string>> metadata; // "# key<TAB>rest"
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows; // includes the Avg and Std rows

    std::optional<std::string> meta(std::string_view key) const;
    std::size_t column(std::string_view name) const;
    /// Per-position rows only.
    std::vector<std::vector<std::string>> position_rows() const;
};

ParsedReport parse_report_tsv(std::string_view tsv);

/// Markdown tables rendered from the TSV cells.
std::string render_markdown(std::string_view tsv);

/// Cell text to value; "undefined" becomes nullopt.
std::optional<double> parse_cell(std::string_view cell);

/// Scatter plot of M-measure (x) against JSD (y). Throws DataError if no row
/// has both values.
std::string render_scatter_svg(const ParsedReport& report, const std::set<std::string>& marked);

std::set<std::string> parse_id_list(std::string_view csv);

} // namespace openbook

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mde/regression.hpp"

namespace mde {

// Benchmark samples carried in the binary so the fixture fits need no files.
std::vector<double> shoshoni();               // 20 rectangle width-to-length ratios
std::vector<double> drosophila_counts();      // 34 daughter-recombinant counts, one at 91
std::vector<double> telephone_calls();        // 24 yearly totals, 1950-1973 (millions)
RegressionData telephone_data();              // intercept + year (two digits) vs calls
RegressionData star_data();                   // intercept + log temperature vs log intensity

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // rectangular, header width
};

// RFC-4180 reader: quoted fields, escaped quotes, embedded separators and
// line breaks, optional CRLF. Every record must match the header width.
CsvTable read_csv(std::istream& in, const std::string& origin = "<stream>");
CsvTable read_csv_file(const std::string& path);

struct Dataset {
    RegressionData reg;                    // design has the intercept prepended
    std::vector<std::string> predictors;   // column names, design order after intercept
    std::string response;
    std::vector<std::string> notes;        // e.g. dropped label columns
};

// Column typing: a column whose every entry fails numeric parsing is a label
// column and is dropped with a note; a column mixing numbers and text is an
// error naming the first offending cell. The response defaults to the last
// numeric column; predictors default to the remaining numeric columns.
Dataset ingest_csv(const CsvTable& table,
                   const std::optional<std::string>& response = std::nullopt,
                   const std::vector<std::string>& predictors = {});

// 12 significant digits, RFC-4180 quoting where needed.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace mde

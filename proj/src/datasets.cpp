#include "mde/datasets.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <ostream>

#include "mde/errors.hpp"

namespace mde {

std::vector<double> shoshoni() {
    return {0.553, 0.570, 0.576, 0.601, 0.606, 0.606, 0.609, 0.611, 0.615, 0.628,
            0.654, 0.662, 0.668, 0.670, 0.672, 0.690, 0.693, 0.749, 0.844, 0.933};
}

std::vector<double> drosophila_counts() {
    std::vector<double> out;
    out.insert(out.end(), 23, 0.0);
    out.insert(out.end(), 7, 1.0);
    out.insert(out.end(), 3, 2.0);
    out.push_back(91.0);
    return out;
}

std::vector<double> telephone_calls() {
    return {0.44, 0.47, 0.47, 0.59,  0.66,  0.73,  0.81,  0.88,  1.06,  1.20,  1.35, 1.49,
            1.61, 2.12, 11.90, 12.40, 14.20, 15.90, 18.20, 21.20, 4.30,  2.40,  2.70, 2.90};
}

RegressionData telephone_data() {
    std::vector<double> y = telephone_calls();
    const int n = static_cast<int>(y.size());
    RegressionData d;
    d.x.resize(n, 2);
    d.y.resize(n);
    for (int i = 0; i < n; ++i) {
        d.x(i, 0) = 1.0;
        d.x(i, 1) = 50.0 + i;
        d.y[i] = y[static_cast<std::size_t>(i)];
    }
    return d;
}

RegressionData star_data() {
    static const double te[] = {4.37, 4.56, 4.26, 4.56, 4.30, 4.46, 3.84, 4.57, 4.26, 4.37,
                                3.49, 4.43, 4.48, 4.01, 4.29, 4.42, 4.23, 4.42, 4.23, 3.49,
                                4.29, 4.29, 4.42, 4.49, 4.38, 4.42, 4.29, 4.38, 4.22, 3.48,
                                4.38, 4.56, 4.45, 3.49, 4.23, 4.62, 4.53, 4.45, 4.53, 4.43,
                                4.38, 4.45, 4.50, 4.45, 4.55, 4.45, 4.42};
    static const double light[] = {5.23, 5.74, 4.93, 5.74, 5.19, 5.46, 4.65, 5.27, 5.57, 5.12,
                                   5.73, 5.45, 5.42, 4.05, 4.26, 4.58, 3.94, 4.18, 4.18, 5.89,
                                   4.38, 4.22, 4.42, 4.85, 5.02, 4.66, 4.66, 4.90, 4.39, 6.05,
                                   4.42, 5.10, 5.22, 6.29, 4.34, 5.62, 5.10, 5.22, 5.18, 5.57,
                                   4.62, 5.06, 5.34, 5.34, 5.54, 4.98, 4.50};
    const int n = static_cast<int>(sizeof(te) / sizeof(te[0]));
    RegressionData d;
    d.x.resize(n, 2);
    d.y.resize(n);
    for (int i = 0; i < n; ++i) {
        d.x(i, 0) = 1.0;
        d.x(i, 1) = te[i];
        d.y[i] = light[i];
    }
    return d;
}

namespace {

std::string trimmed(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool parse_number(const std::string& cell, double& out) {
    std::string t = trimmed(cell);
    if (t.empty()) return false;
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) return false;
    if (!std::isfinite(v)) return false;
    out = v;
    return true;
}

}  // namespace

CsvTable read_csv(std::istream& in, const std::string& origin) {
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> cur;
    std::string field;
    enum class State { start, unquoted, quoted, quote_end };
    State st = State::start;
    std::size_t line = 1;

    auto bad = [&](const std::string& what) {
        throw DataError(origin + ":" + std::to_string(line) + ": " + what);
    };
    auto end_field = [&] {
        cur.push_back(std::move(field));
        field.clear();
        st = State::start;
    };
    auto end_record = [&] {
        end_field();
        if (!(cur.size() == 1 && cur[0].empty())) records.push_back(std::move(cur));  // skip blank lines
        cur.clear();
    };

    std::size_t i = 0;
    const std::size_t len = text.size();
    while (i < len) {
        char ch = text[i];
        if (ch == '\r') {  // bare CR is treated as part of CRLF; strip it
            ++i;
            continue;
        }
        switch (st) {
            case State::start:
                if (ch == '"') {
                    st = State::quoted;
                } else if (ch == ',') {
                    end_field();
                } else if (ch == '\n') {
                    end_record();
                    ++line;
                } else {
                    field += ch;
                    st = State::unquoted;
                }
                break;
            case State::unquoted:
                if (ch == ',') {
                    end_field();
                } else if (ch == '\n') {
                    end_record();
                    ++line;
                } else if (ch == '"') {
                    bad("quote inside an unquoted field");
                } else {
                    field += ch;
                }
                break;
            case State::quoted:
                if (ch == '"') {
                    st = State::quote_end;
                } else {
                    if (ch == '\n') ++line;
                    field += ch;
                }
                break;
            case State::quote_end:
                if (ch == '"') {
                    field += '"';
                    st = State::quoted;
                } else if (ch == ',') {
                    end_field();
                } else if (ch == '\n') {
                    end_record();
                    ++line;
                } else {
                    bad("text after a closing quote");
                }
                break;
        }
        ++i;
    }
    if (st == State::quoted) bad("unterminated quoted field");
    if (st != State::start || !field.empty() || !cur.empty()) end_record();

    if (records.empty()) throw DataError(origin + ": no header row");
    CsvTable table;
    table.header = records.front();
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.header.size()) {
            throw DataError(origin + ": row " + std::to_string(r + 1) + " has " +
                            std::to_string(records[r].size()) + " fields, header has " +
                            std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    return read_csv(in, path);
}

Dataset ingest_csv(const CsvTable& table, const std::optional<std::string>& response,
                   const std::vector<std::string>& predictors) {
    const std::size_t w = table.header.size();
    if (w == 0) throw DataError("ingest_csv: empty header");
    if (table.rows.empty()) throw DataError("ingest_csv: no data rows");
    const std::size_t n = table.rows.size();

    Dataset out;
    std::vector<int> numeric_cols;
    std::vector<std::vector<double>> values(w);
    for (std::size_t j = 0; j < w; ++j) {
        std::size_t good = 0, first_bad = 0;
        std::string bad_cell;
        std::vector<double> col(n);
        for (std::size_t r = 0; r < n; ++r) {
            if (parse_number(table.rows[r][j], col[r])) {
                ++good;
            } else if (good == r) {  // record only the first failure
                first_bad = r;
                bad_cell = table.rows[r][j];
            }
        }
        if (good == n) {
            numeric_cols.push_back(static_cast<int>(j));
            values[j] = std::move(col);
        } else if (good == 0) {
            out.notes.push_back("dropped non-numeric column '" + table.header[j] +
                                "' (treated as row labels)");
        } else {
            // find the actual first bad row, not just a prefix failure
            for (std::size_t r = 0; r < n; ++r) {
                double tmp;
                if (!parse_number(table.rows[r][j], tmp)) {
                    first_bad = r;
                    bad_cell = table.rows[r][j];
                    break;
                }
            }
            throw DataError("column '" + table.header[j] + "' mixes numbers and text; first " +
                            "non-numeric cell is row " + std::to_string(first_bad + 2) + " ('" +
                            bad_cell + "')");
        }
    }
    if (numeric_cols.empty()) throw DataError("ingest_csv: no numeric columns");

    auto find_numeric = [&](const std::string& name) -> int {
        for (int j : numeric_cols) {
            if (table.header[static_cast<std::size_t>(j)] == name) return j;
        }
        for (std::size_t j = 0; j < w; ++j) {
            if (table.header[j] == name) {
                throw DataError("column '" + name + "' is non-numeric and was dropped");
            }
        }
        throw DataError("no column named '" + name + "'");
    };

    int resp_col = response ? find_numeric(*response) : numeric_cols.back();
    out.response = table.header[static_cast<std::size_t>(resp_col)];

    std::vector<int> pred_cols;
    if (!predictors.empty()) {
        for (const auto& name : predictors) {
            int j = find_numeric(name);
            if (j == resp_col) throw DataError("response '" + name + "' cannot also be a predictor");
            pred_cols.push_back(j);
        }
    } else {
        for (int j : numeric_cols) {
            if (j != resp_col) pred_cols.push_back(j);
        }
    }
    for (int j : pred_cols) out.predictors.push_back(table.header[static_cast<std::size_t>(j)]);

    out.reg.x.resize(static_cast<int>(n), static_cast<int>(pred_cols.size()) + 1);
    out.reg.y.resize(static_cast<int>(n));
    for (std::size_t r = 0; r < n; ++r) {
        out.reg.x(static_cast<int>(r), 0) = 1.0;
        for (std::size_t k = 0; k < pred_cols.size(); ++k) {
            out.reg.x(static_cast<int>(r), static_cast<int>(k) + 1) =
                values[static_cast<std::size_t>(pred_cols[k])][r];
        }
        out.reg.y[static_cast<int>(r)] = values[static_cast<std::size_t>(resp_col)][r];
    }
    return out;
}

namespace {
void write_field(std::ostream& out, const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        out << s;
        return;
    }
    out << '"';
    for (char c : s) {
        if (c == '"') out << '"';
        out << c;
    }
    out << '"';
}
}  // namespace

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    if (header.empty()) throw DomainError("write_csv: empty header");
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j) out << ',';
        write_field(out, header[j]);
    }
    out << '\n';
    char buf[40];
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != header.size()) {
            throw DomainError("write_csv: row " + std::to_string(r + 1) + " width mismatch");
        }
        for (std::size_t j = 0; j < rows[r].size(); ++j) {
            if (j) out << ',';
            std::snprintf(buf, sizeof(buf), "%.12g", rows[r][j]);
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace mde

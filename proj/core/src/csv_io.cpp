#include "noncausal/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "noncausal/errors.hpp"

namespace noncausal {
namespace detail {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + path);
    out << content;
    if (!out) throw InputError("write failed: " + path);
}

static std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    size_t pos = 0;
    while (true) {
        size_t comma = line.find(',', pos);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(pos));
            break;
        }
        fields.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return fields;
}

CsvTable read_csv(const std::string& path) {
    std::string text = read_text_file(path);
    CsvTable table;
    long line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string line = (nl == std::string::npos) ? text.substr(pos) : text.substr(pos, nl - pos);
        pos = (nl == std::string::npos) ? text.size() + 1 : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();  // tolerate CRLF on read
        if (line.empty()) continue;
        auto fields = split_fields(line);
        if (table.header.empty()) {
            table.header = std::move(fields);
        } else {
            if (fields.size() != table.header.size()) {
                throw ParseError("expected " + std::to_string(table.header.size()) +
                                     " fields, found " + std::to_string(fields.size()),
                                 line_no);
            }
            table.rows.push_back(std::move(fields));
            table.row_numbers.push_back(line_no);
        }
    }
    if (table.header.empty()) throw InputError("empty CSV file: " + path);
    return table;
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text, long row) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last || text.empty()) {
        throw ParseError("non-numeric value '" + text + "'", row);
    }
    if (!std::isfinite(value)) throw ParseError("non-finite value '" + text + "'", row);
    return value;
}

DatedColumns read_dated_csv(const std::string& path) {
    CsvTable table = read_csv(path);
    if (table.header.front() != "date") {
        throw InputError(path + ": first column must be named 'date'");
    }
    if (table.header.size() < 2) {
        throw InputError(path + ": need at least one value column");
    }
    if (table.rows.empty()) throw InputError(path + ": no data rows");

    struct Row {
        MonthDate date;
        long line;
        size_t source;
    };
    std::vector<Row> rows(table.rows.size());
    for (size_t i = 0; i < table.rows.size(); ++i) {
        MonthDate d;
        if (!try_parse_month(table.rows[i][0], d)) {
            throw ParseError("malformed date '" + table.rows[i][0] + "', expected YYYY-MM",
                             table.row_numbers[i]);
        }
        rows[i] = Row{d, table.row_numbers[i], i};
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.date < b.date; });
    for (size_t i = 1; i < rows.size(); ++i) {
        int step = months_between(rows[i - 1].date, rows[i].date);
        if (step == 0) {
            throw ParseError("duplicate date " + to_string(rows[i].date), rows[i].line);
        }
        if (step != 1) {
            throw ParseError("monthly gap before " + to_string(rows[i].date) + ", expected " +
                                 to_string(add_months(rows[i - 1].date, 1)),
                             rows[i].line);
        }
    }

    DatedColumns out;
    out.start = rows.front().date;
    out.names.assign(table.header.begin() + 1, table.header.end());
    out.columns.assign(out.names.size(), std::vector<double>(rows.size()));
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& fields = table.rows[rows[i].source];
        for (size_t c = 0; c < out.names.size(); ++c) {
            out.columns[c][i] = parse_double(fields[c + 1], rows[i].line);
        }
    }
    return out;
}

}  // namespace detail

using detail::DatedColumns;

TimeSeries load_series(const std::string& path, const std::string& column) {
    DatedColumns data = detail::read_dated_csv(path);
    for (size_t c = 0; c < data.names.size(); ++c) {
        if (data.names[c] == column) return TimeSeries(data.start, std::move(data.columns[c]));
    }
    throw InputError(path + ": no column named '" + column + "'");
}

void save_series(const std::string& path, const TimeSeries& series, const std::string& column) {
    std::string out = "date," + column + "\n";
    for (int i = 0; i < series.size(); ++i) {
        out += to_string(series.date(i));
        out += ',';
        out += detail::format_double(series[i]);
        out += '\n';
    }
    detail::write_text_file(path, out);
}

BoundsSeries load_bounds(const std::string& path) {
    DatedColumns data = detail::read_dated_csv(path);
    if (data.names.size() != 2 || data.names[0] != "lower" || data.names[1] != "upper") {
        throw InputError(path + ": bounds file must have columns date,lower,upper");
    }
    return BoundsSeries(data.start, std::move(data.columns[0]), std::move(data.columns[1]));
}

void save_bounds(const std::string& path, const BoundsSeries& bounds) {
    std::string out = "date,lower,upper\n";
    for (int i = 0; i < bounds.size(); ++i) {
        out += to_string(bounds.date(i));
        out += ',';
        out += detail::format_double(bounds.lower(i));
        out += ',';
        out += detail::format_double(bounds.upper(i));
        out += '\n';
    }
    detail::write_text_file(path, out);
}

ExogenousPanel load_panel(const std::string& path) {
    DatedColumns data = detail::read_dated_csv(path);
    return ExogenousPanel(data.start, std::move(data.names), std::move(data.columns));
}

void save_panel(const std::string& path, const ExogenousPanel& panel) {
    std::string out = "date";
    for (const auto& name : panel.names()) {
        out += ',';
        out += name;
    }
    out += '\n';
    for (int i = 0; i < panel.size(); ++i) {
        out += to_string(panel.date(i));
        for (int c = 0; c < panel.n_columns(); ++c) {
            out += ',';
            out += detail::format_double(panel.value(i, c));
        }
        out += '\n';
    }
    detail::write_text_file(path, out);
}

}  // namespace noncausal

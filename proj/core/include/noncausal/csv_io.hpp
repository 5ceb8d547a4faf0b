#pragma once

#include <string>
#include <vector>

#include "noncausal/timeseries.hpp"

namespace noncausal {

// CSV contract shared by every file this library reads or writes:
// header row required, first column named "date" with YYYY-MM values,
// remaining columns numeric with '.' decimal separator, UTF-8, and LF line
// endings on write. Rows may arrive unsorted; loaders sort by date and then
// reject duplicates and monthly gaps, naming the offending row.

TimeSeries load_series(const std::string& path, const std::string& column);
void save_series(const std::string& path, const TimeSeries& series, const std::string& column);

// Columns: date,lower,upper.
BoundsSeries load_bounds(const std::string& path);
void save_bounds(const std::string& path, const BoundsSeries& bounds);

// date plus one column per regressor.
ExogenousPanel load_panel(const std::string& path);
void save_panel(const std::string& path, const ExogenousPanel& panel);

namespace detail {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<long> row_numbers;  // 1-based physical line of each row
};

CsvTable read_csv(const std::string& path);

// Dated numeric block: parses the date column, sorts rows by date, checks
// for duplicates and gaps. Returns the start date and one vector per
// non-date column.
struct DatedColumns {
    MonthDate start;
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
};
DatedColumns read_dated_csv(const std::string& path);

// Shortest decimal form that parses back to the identical double.
std::string format_double(double x);
double parse_double(const std::string& text, long row);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace detail

}  // namespace noncausal

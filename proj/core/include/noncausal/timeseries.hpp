#pragma once

#include <string>
#include <vector>

#include "noncausal/calendar.hpp"

namespace noncausal {

// Inclusive span of months.
struct MonthRange {
    MonthDate first;
    MonthDate last;

    int size() const { return months_between(first, last) + 1; }
};

// Gap-free monthly series: a start date plus contiguous finite values. The
// date of element i is start + i months, so no per-row date storage is needed
// and gaps are unrepresentable by construction.
class TimeSeries {
public:
    TimeSeries() = default;
    TimeSeries(MonthDate start, std::vector<double> values);

    int size() const { return static_cast<int>(values_.size()); }
    bool empty() const { return values_.empty(); }
    MonthDate start() const { return start_; }
    MonthDate end() const;
    MonthRange range() const { return {start(), end()}; }
    MonthDate date(int i) const { return add_months(start_, i); }

    double operator[](int i) const { return values_[static_cast<size_t>(i)]; }
    double& operator[](int i) { return values_[static_cast<size_t>(i)]; }
    const std::vector<double>& values() const { return values_; }

    bool contains(MonthDate d) const;
    int index_of(MonthDate d) const;  // throws InputError when out of range
    double at(MonthDate d) const { return values_[static_cast<size_t>(index_of(d))]; }

    TimeSeries slice(MonthRange r) const;
    TimeSeries first_n(int n) const;
    TimeSeries up_to(MonthDate d) const;  // prefix ending at d

private:
    MonthDate start_;
    std::vector<double> values_;
};

// Monthly band with strict lower < upper at every date.
class BoundsSeries {
public:
    BoundsSeries() = default;
    BoundsSeries(MonthDate start, std::vector<double> lower, std::vector<double> upper);

    int size() const { return static_cast<int>(lower_.size()); }
    MonthDate start() const { return start_; }
    MonthDate end() const;
    MonthRange range() const { return {start(), end()}; }
    MonthDate date(int i) const { return add_months(start_, i); }

    double lower(int i) const { return lower_[static_cast<size_t>(i)]; }
    double upper(int i) const { return upper_[static_cast<size_t>(i)]; }
    const std::vector<double>& lower_values() const { return lower_; }
    const std::vector<double>& upper_values() const { return upper_; }

    bool contains(MonthDate d) const;
    int index_of(MonthDate d) const;
    double lower_at(MonthDate d) const { return lower_[static_cast<size_t>(index_of(d))]; }
    double upper_at(MonthDate d) const { return upper_[static_cast<size_t>(index_of(d))]; }

    BoundsSeries slice(MonthRange r) const;

private:
    MonthDate start_;
    std::vector<double> lower_;
    std::vector<double> upper_;
};

// Named regressor columns sharing one monthly date index.
class ExogenousPanel {
public:
    ExogenousPanel() = default;
    ExogenousPanel(MonthDate start, std::vector<std::string> names,
                   std::vector<std::vector<double>> columns);

    int size() const;  // number of rows
    int n_columns() const { return static_cast<int>(columns_.size()); }
    MonthDate start() const { return start_; }
    MonthDate end() const;
    MonthRange range() const { return {start(), end()}; }
    MonthDate date(int i) const { return add_months(start_, i); }

    const std::vector<std::string>& names() const { return names_; }
    double value(int row, int col) const { return columns_[static_cast<size_t>(col)][static_cast<size_t>(row)]; }
    const std::vector<double>& column(int col) const { return columns_[static_cast<size_t>(col)]; }
    TimeSeries column_series(int col) const { return TimeSeries(start_, columns_[static_cast<size_t>(col)]); }

    bool contains(MonthDate d) const;
    int index_of(MonthDate d) const;

    ExogenousPanel slice(MonthRange r) const;

private:
    MonthDate start_;
    std::vector<std::string> names_;
    std::vector<std::vector<double>> columns_;
};

// Year-over-year log growth of a positive monthly level series, in percent:
// 100 * (ln x_t - ln x_{t-12}). Output starts 12 months after the input.
TimeSeries yoy_log_inflation(const TimeSeries& levels);

// Year-over-year arithmetic growth in percent: 100 * (x_t - x_{t-12}) / x_{t-12}.
TimeSeries pct_change_yoy(const TimeSeries& levels);

struct DemeanResult {
    TimeSeries series;
    double mean = 0.0;
};
DemeanResult demean(const TimeSeries& series);

// Largest month range common to all inputs; throws AlignmentError when empty.
MonthRange intersect_ranges(const std::vector<MonthRange>& ranges);

// Restricts every series to the common range. Idempotent.
std::vector<TimeSeries> align(const std::vector<TimeSeries>& series);

}  // namespace noncausal

#include "noncausal/timeseries.hpp"

#include <cmath>

#include "noncausal/errors.hpp"

namespace noncausal {

static void check_finite(const std::vector<double>& values, const char* what) {
    for (size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw InputError(std::string(what) + " contains a non-finite value at offset " +
                             std::to_string(i));
        }
    }
}

TimeSeries::TimeSeries(MonthDate start, std::vector<double> values)
    : start_(start), values_(std::move(values)) {
    if (values_.empty()) throw InputError("time series must hold at least one value");
    check_finite(values_, "time series");
}

MonthDate TimeSeries::end() const { return add_months(start_, size() - 1); }

bool TimeSeries::contains(MonthDate d) const {
    int offset = months_between(start_, d);
    return offset >= 0 && offset < size();
}

int TimeSeries::index_of(MonthDate d) const {
    int offset = months_between(start_, d);
    if (offset < 0 || offset >= size()) {
        throw InputError("date " + to_string(d) + " outside series span " + to_string(start_) +
                         ".." + to_string(end()));
    }
    return offset;
}

TimeSeries TimeSeries::slice(MonthRange r) const {
    int lo = index_of(r.first);
    int hi = index_of(r.last);
    if (hi < lo) throw InputError("empty slice request");
    return TimeSeries(r.first, std::vector<double>(values_.begin() + lo, values_.begin() + hi + 1));
}

TimeSeries TimeSeries::first_n(int n) const {
    if (n < 1 || n > size()) throw InputError("prefix length out of range");
    return TimeSeries(start_, std::vector<double>(values_.begin(), values_.begin() + n));
}

TimeSeries TimeSeries::up_to(MonthDate d) const { return first_n(index_of(d) + 1); }

BoundsSeries::BoundsSeries(MonthDate start, std::vector<double> lower, std::vector<double> upper)
    : start_(start), lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.empty()) throw InputError("bounds series must hold at least one row");
    if (lower_.size() != upper_.size()) throw InputError("bounds columns differ in length");
    check_finite(lower_, "lower bound");
    check_finite(upper_, "upper bound");
    for (size_t i = 0; i < lower_.size(); ++i) {
        if (!(lower_[i] < upper_[i])) {
            throw InputError("bounds violated at " + to_string(add_months(start_, (int)i)) +
                             ": lower must be strictly below upper");
        }
    }
}

MonthDate BoundsSeries::end() const { return add_months(start_, size() - 1); }

bool BoundsSeries::contains(MonthDate d) const {
    int offset = months_between(start_, d);
    return offset >= 0 && offset < size();
}

int BoundsSeries::index_of(MonthDate d) const {
    int offset = months_between(start_, d);
    if (offset < 0 || offset >= size()) {
        throw InputError("date " + to_string(d) + " outside bounds span " + to_string(start_) +
                         ".." + to_string(end()));
    }
    return offset;
}

BoundsSeries BoundsSeries::slice(MonthRange r) const {
    int lo = index_of(r.first);
    int hi = index_of(r.last);
    if (hi < lo) throw InputError("empty slice request");
    return BoundsSeries(r.first, std::vector<double>(lower_.begin() + lo, lower_.begin() + hi + 1),
                        std::vector<double>(upper_.begin() + lo, upper_.begin() + hi + 1));
}

ExogenousPanel::ExogenousPanel(MonthDate start, std::vector<std::string> names,
                               std::vector<std::vector<double>> columns)
    : start_(start), names_(std::move(names)), columns_(std::move(columns)) {
    if (names_.empty()) throw InputError("panel must hold at least one column");
    if (names_.size() != columns_.size()) throw InputError("panel names and columns differ");
    size_t rows = columns_.front().size();
    if (rows == 0) throw InputError("panel must hold at least one row");
    for (const auto& col : columns_) {
        if (col.size() != rows) throw InputError("panel columns differ in length");
        check_finite(col, "panel column");
    }
}

int ExogenousPanel::size() const {
    return columns_.empty() ? 0 : static_cast<int>(columns_.front().size());
}

MonthDate ExogenousPanel::end() const { return add_months(start_, size() - 1); }

bool ExogenousPanel::contains(MonthDate d) const {
    int offset = months_between(start_, d);
    return offset >= 0 && offset < size();
}

int ExogenousPanel::index_of(MonthDate d) const {
    int offset = months_between(start_, d);
    if (offset < 0 || offset >= size()) {
        throw InputError("date " + to_string(d) + " outside panel span " + to_string(start_) +
                         ".." + to_string(end()));
    }
    return offset;
}

ExogenousPanel ExogenousPanel::slice(MonthRange r) const {
    int lo = index_of(r.first);
    int hi = index_of(r.last);
    if (hi < lo) throw InputError("empty slice request");
    std::vector<std::vector<double>> cols;
    cols.reserve(columns_.size());
    for (const auto& col : columns_) {
        cols.emplace_back(col.begin() + lo, col.begin() + hi + 1);
    }
    return ExogenousPanel(r.first, names_, std::move(cols));
}

TimeSeries yoy_log_inflation(const TimeSeries& levels) {
    if (levels.size() <= 12) {
        throw InsufficientDataError("need more than 12 observations for a year-over-year change");
    }
    for (int i = 0; i < levels.size(); ++i) {
        if (!(levels[i] > 0.0)) {
            throw InputError("non-positive level at " + to_string(levels.date(i)) +
                             "; log growth requires positive values");
        }
    }
    std::vector<double> out(static_cast<size_t>(levels.size() - 12));
    for (int t = 12; t < levels.size(); ++t) {
        out[static_cast<size_t>(t - 12)] = 100.0 * (std::log(levels[t]) - std::log(levels[t - 12]));
    }
    return TimeSeries(levels.date(12), std::move(out));
}

TimeSeries pct_change_yoy(const TimeSeries& levels) {
    if (levels.size() <= 12) {
        throw InsufficientDataError("need more than 12 observations for a year-over-year change");
    }
    std::vector<double> out(static_cast<size_t>(levels.size() - 12));
    for (int t = 12; t < levels.size(); ++t) {
        double base = levels[t - 12];
        if (base == 0.0) {
            throw InputError("zero level at " + to_string(levels.date(t - 12)) +
                             "; percent change undefined");
        }
        out[static_cast<size_t>(t - 12)] = 100.0 * (levels[t] - base) / base;
    }
    return TimeSeries(levels.date(12), std::move(out));
}

DemeanResult demean(const TimeSeries& series) {
    double sum = 0.0;
    for (int i = 0; i < series.size(); ++i) sum += series[i];
    double mean = sum / series.size();
    std::vector<double> out(static_cast<size_t>(series.size()));
    for (int i = 0; i < series.size(); ++i) out[static_cast<size_t>(i)] = series[i] - mean;
    return DemeanResult{TimeSeries(series.start(), std::move(out)), mean};
}

MonthRange intersect_ranges(const std::vector<MonthRange>& ranges) {
    if (ranges.empty()) throw AlignmentError("nothing to align");
    MonthRange out = ranges.front();
    for (const auto& r : ranges) {
        if (month_index(r.first) > month_index(out.first)) out.first = r.first;
        if (month_index(r.last) < month_index(out.last)) out.last = r.last;
    }
    if (month_index(out.first) > month_index(out.last)) {
        throw AlignmentError("series do not overlap; no common months");
    }
    return out;
}

std::vector<TimeSeries> align(const std::vector<TimeSeries>& series) {
    std::vector<MonthRange> ranges;
    ranges.reserve(series.size());
    for (const auto& s : series) ranges.push_back(s.range());
    MonthRange common = intersect_ranges(ranges);
    std::vector<TimeSeries> out;
    out.reserve(series.size());
    for (const auto& s : series) out.push_back(s.slice(common));
    return out;
}

}  // namespace noncausal

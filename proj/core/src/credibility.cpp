#include "noncausal/credibility.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "noncausal/csv_io.hpp"
#include "noncausal/errors.hpp"

namespace noncausal {

namespace {

std::string stem_of(const std::string& path) {
    const std::size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    const std::size_t dot = base.find_last_of('.');
    if (dot != std::string::npos && dot > 0) base = base.substr(0, dot);
    return base.empty() ? "index" : base;
}

void require_sorted_dates(const std::vector<MonthDate>& dates, const char* what) {
    for (std::size_t i = 1; i < dates.size(); ++i) {
        if (!(dates[i - 1] < dates[i])) {
            throw InputError(std::string(what) + " dates must be strictly increasing");
        }
    }
}

}  // namespace

CredibilityIndex rolling_index(const TimeSeries& series, const BoundsSeries& bounds,
                               const OriginForecaster& forecaster,
                               const std::vector<MonthDate>& origins, int h,
                               std::string name) {
    if (!forecaster) throw InputError("forecaster must be callable");
    if (h < 1) throw InputError("horizon must be >= 1");
    if (origins.empty()) throw InputError("need at least one forecast origin");
    require_sorted_dates(origins, "origin");

    CredibilityIndex out;
    out.name = std::move(name);
    out.horizon = h;
    for (MonthDate origin : origins) {
        if (!series.contains(origin)) {
            throw InputError("origin " + to_string(origin) + " lies outside the sample");
        }
        double p = 0.0;
        try {
            p = forecaster(series.up_to(origin), bounds, h);
        } catch (const Error&) {
            ++out.n_failed;
            continue;
        }
        if (!(p >= -1e-9 && p <= 1.0 + 1e-9)) {
            throw EvaluationError("forecaster returned a probability outside [0, 1]");
        }
        out.dates.push_back(add_months(origin, h));
        out.values.push_back(std::clamp(p, 0.0, 1.0));
    }
    return out;
}

OutcomeSeries outcomes_from_realized(const TimeSeries& realized, const BoundsSeries& bounds) {
    OutcomeSeries out;
    for (int i = 0; i < realized.size(); ++i) {
        const MonthDate d = realized.date(i);
        if (!bounds.contains(d)) continue;
        const double v = realized[i];
        out.dates.push_back(d);
        out.in_bounds.push_back(v >= bounds.lower_at(d) && v <= bounds.upper_at(d));
    }
    return out;
}

std::vector<bool> classify(const CredibilityIndex& index, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw InputError("classification threshold must lie in [0, 1]");
    }
    std::vector<bool> out(index.values.size());
    for (std::size_t i = 0; i < index.values.size(); ++i) {
        out[i] = index.values[i] > threshold;
    }
    return out;
}

RocCurve roc_curve(const CredibilityIndex& index, const OutcomeSeries& outcomes,
                   const std::vector<double>& thresholds) {
    require_sorted_dates(index.dates, "index");
    require_sorted_dates(outcomes.dates, "outcome");
    if (index.dates.size() != index.values.size()) {
        throw InputError("index dates and values differ in length");
    }
    if (outcomes.dates.size() != outcomes.in_bounds.size()) {
        throw InputError("outcome dates and labels differ in length");
    }

    // Inner join on dates; both inputs are sorted.
    std::vector<double> value;
    std::vector<bool> positive;
    {
        std::size_t i = 0, j = 0;
        while (i < index.dates.size() && j < outcomes.dates.size()) {
            if (index.dates[i] < outcomes.dates[j]) {
                ++i;
            } else if (outcomes.dates[j] < index.dates[i]) {
                ++j;
            } else {
                value.push_back(index.values[i]);
                positive.push_back(outcomes.in_bounds[j]);
                ++i;
                ++j;
            }
        }
    }
    if (value.empty()) throw InputError("index and outcomes share no dates");

    long n_pos = 0;
    for (bool b : positive) n_pos += b ? 1 : 0;
    const long n_neg = static_cast<long>(positive.size()) - n_pos;
    if (n_pos == 0) {
        throw EvaluationError("rates undefined: outcomes contain no in-bounds months");
    }
    if (n_neg == 0) {
        throw EvaluationError("rates undefined: outcomes contain no out-of-bounds months");
    }

    std::vector<double> grid = thresholds;
    const double min_value = *std::min_element(value.begin(), value.end());
    if (grid.empty()) {
        grid = value;
        grid.push_back(0.0);
        grid.push_back(1.0);
    }
    // Anchors guaranteeing the exact (1,1) and (0,0) endpoints under strict
    // "greater than" classification.
    grid.push_back(min_value - 1.0);
    grid.push_back(1.0);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    RocCurve out;
    out.index_name = index.name;
    out.n_obs = static_cast<int>(value.size());
    out.n_failed = index.n_failed;
    out.points.reserve(grid.size());
    for (double x : grid) {
        long tp = 0, fp = 0;
        for (std::size_t k = 0; k < value.size(); ++k) {
            if (value[k] > x) {
                if (positive[k]) {
                    ++tp;
                } else {
                    ++fp;
                }
            }
        }
        RocPoint pt;
        pt.threshold = x;
        pt.tpr = static_cast<double>(tp) / static_cast<double>(n_pos);
        pt.fpr = static_cast<double>(fp) / static_cast<double>(n_neg);
        out.points.push_back(pt);
    }

    // Area under the curve traversed from (0,0) to (1,1).
    std::vector<std::pair<double, double>> xy;
    xy.reserve(out.points.size());
    for (const RocPoint& pt : out.points) xy.emplace_back(pt.fpr, pt.tpr);
    std::sort(xy.begin(), xy.end());
    double auc = 0.0;
    for (std::size_t i = 1; i < xy.size(); ++i) {
        auc += 0.5 * (xy[i].first - xy[i - 1].first) * (xy[i].second + xy[i - 1].second);
    }
    out.auc = auc;
    return out;
}

std::vector<RocCurve> compare_indices(const std::vector<CredibilityIndex>& indices,
                                      const OutcomeSeries& outcomes) {
    if (indices.empty()) throw InputError("need at least one index to compare");
    std::vector<RocCurve> out;
    out.reserve(indices.size());
    for (const CredibilityIndex& index : indices) out.push_back(roc_curve(index, outcomes));
    std::stable_sort(out.begin(), out.end(),
                     [](const RocCurve& a, const RocCurve& b) { return a.auc > b.auc; });
    return out;
}

CredibilityIndex load_index(const std::string& path, const std::string& name) {
    const detail::CsvTable table = detail::read_csv(path);
    if (table.header.size() != 2 || table.header[0] != "date" || table.header[1] != "value") {
        throw ParseError("expected header date,value in " + path, 1);
    }
    std::vector<std::pair<MonthDate, double>> rows;
    rows.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const long line = table.row_numbers[i];
        if (table.rows[i].size() != 2) throw ParseError("expected 2 fields", line);
        MonthDate d;
        if (!try_parse_month(table.rows[i][0], d)) {
            throw ParseError("unparseable date '" + table.rows[i][0] + "'", line);
        }
        const double v = detail::parse_double(table.rows[i][1], line);
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ParseError("index value must lie in [0, 1]", line);
        }
        rows.emplace_back(d, v);
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].first == rows[i - 1].first) {
            throw ParseError("duplicate date " + to_string(rows[i].first), 0);
        }
    }
    CredibilityIndex out;
    out.name = name.empty() ? stem_of(path) : name;
    for (const auto& [d, v] : rows) {
        out.dates.push_back(d);
        out.values.push_back(v);
    }
    return out;
}

void save_index(const std::string& path, const CredibilityIndex& index) {
    if (index.dates.size() != index.values.size()) {
        throw InputError("index dates and values differ in length");
    }
    std::ostringstream os;
    os << "date,value\n";
    for (std::size_t i = 0; i < index.dates.size(); ++i) {
        os << to_string(index.dates[i]) << ',' << detail::format_double(index.values[i])
           << '\n';
    }
    detail::write_text_file(path, os.str());
}

OutcomeSeries load_outcomes(const std::string& path) {
    const detail::CsvTable table = detail::read_csv(path);
    if (table.header.size() != 2 || table.header[0] != "date" || table.header[1] != "outcome") {
        throw ParseError("expected header date,outcome in " + path, 1);
    }
    std::vector<std::pair<MonthDate, bool>> rows;
    rows.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const long line = table.row_numbers[i];
        if (table.rows[i].size() != 2) throw ParseError("expected 2 fields", line);
        MonthDate d;
        if (!try_parse_month(table.rows[i][0], d)) {
            throw ParseError("unparseable date '" + table.rows[i][0] + "'", line);
        }
        const std::string& label = table.rows[i][1];
        if (label != "in" && label != "out") {
            throw ParseError("outcome must be 'in' or 'out', got '" + label + "'", line);
        }
        rows.emplace_back(d, label == "in");
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].first == rows[i - 1].first) {
            throw ParseError("duplicate date " + to_string(rows[i].first), 0);
        }
    }
    OutcomeSeries out;
    for (const auto& [d, b] : rows) {
        out.dates.push_back(d);
        out.in_bounds.push_back(b);
    }
    return out;
}

void save_outcomes(const std::string& path, const OutcomeSeries& outcomes) {
    if (outcomes.dates.size() != outcomes.in_bounds.size()) {
        throw InputError("outcome dates and labels differ in length");
    }
    std::ostringstream os;
    os << "date,outcome\n";
    for (std::size_t i = 0; i < outcomes.dates.size(); ++i) {
        os << to_string(outcomes.dates[i]) << ',' << (outcomes.in_bounds[i] ? "in" : "out")
           << '\n';
    }
    detail::write_text_file(path, os.str());
}

}  // namespace noncausal

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "noncausal/timeseries.hpp"

namespace noncausal {

// Rolling record of the probability that the target month stays within its
// band; one entry per forecasted month. Dates are strictly increasing but
// may skip months whose origin failed.
struct CredibilityIndex {
    std::string name;
    std::vector<MonthDate> dates;
    std::vector<double> values;  // each in [0, 1]
    int horizon = 0;
    int n_failed = 0;  // origins dropped because fitting or forecasting threw

    int size() const { return static_cast<int>(values.size()); }
};

// Realized in-bounds / out-of-bounds classification per month.
struct OutcomeSeries {
    std::vector<MonthDate> dates;  // strictly increasing
    std::vector<bool> in_bounds;

    int size() const { return static_cast<int>(in_bounds.size()); }
};

// Refits on the sample ending at the origin and returns the probability that
// the value h months later stays within the band.
using OriginForecaster =
    std::function<double(const TimeSeries& history, const BoundsSeries& bounds, int h)>;

// Expanding-window evaluation: for each origin, call the forecaster on the
// series truncated at that origin and record the probability under the
// forecasted month. Origins whose forecaster throws a library error are
// skipped and counted.
CredibilityIndex rolling_index(const TimeSeries& series, const BoundsSeries& bounds,
                               const OriginForecaster& forecaster,
                               const std::vector<MonthDate>& origins, int h,
                               std::string name = "index");

// Classify realized values against the band wherever both are defined.
OutcomeSeries outcomes_from_realized(const TimeSeries& realized, const BoundsSeries& bounds);

// Predicted credible exactly when the index value exceeds the threshold.
std::vector<bool> classify(const CredibilityIndex& index, double threshold);

struct RocPoint {
    double threshold = 0.0;
    double fpr = 0.0;
    double tpr = 0.0;
};

struct RocCurve {
    std::string index_name;
    std::vector<RocPoint> points;  // sorted by threshold, rates nonincreasing
    double auc = 0.0;
    int n_obs = 0;     // months where index and outcome overlap
    int n_failed = 0;  // carried over from the index
};

// Empirical operating curve over the given thresholds (default: every
// distinct index value plus anchors guaranteeing the (1,1) and (0,0)
// endpoints). Index and outcomes are joined on dates.
RocCurve roc_curve(const CredibilityIndex& index, const OutcomeSeries& outcomes,
                   const std::vector<double>& thresholds = {});

// One curve per index, ranked by decreasing area.
std::vector<RocCurve> compare_indices(const std::vector<CredibilityIndex>& indices,
                                      const OutcomeSeries& outcomes);

// CSV forms: index files are "date,value" rows, outcome files are
// "date,outcome" rows with outcome in {in,out}. Dates may skip months but
// duplicates are rejected.
CredibilityIndex load_index(const std::string& path, const std::string& name = "");
void save_index(const std::string& path, const CredibilityIndex& index);
OutcomeSeries load_outcomes(const std::string& path);
void save_outcomes(const std::string& path, const OutcomeSeries& outcomes);

}  // namespace noncausal

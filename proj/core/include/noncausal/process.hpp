#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "noncausal/model.hpp"
#include "noncausal/timeseries.hpp"

namespace noncausal {

// y with one side of the dependence filtered out. noncausal_part applies the
// (composite) lag polynomial and keeps only the dependence on future errors;
// causal_part applies the lead polynomial and keeps the dependence on past
// errors. Each loses the corresponding polynomial order at one edge.
struct FilterDecomposition {
    TimeSeries noncausal_part;
    TimeSeries causal_part;
};
FilterDecomposition filter_components(const TimeSeries& y, const Model& m);

// Innovation estimates at every date where the full operator (and, for
// regressor models, the shifted regressor rows) is computable.
TimeSeries residuals(const TimeSeries& y, const Model& m,
                     const std::optional<ExogenousPanel>& x = std::nullopt);

// Two-sided moving average form y_t = sum_j weight(j) * eps_{t-j}; positive j
// reaches into the past, negative j into the future.
struct TwoSidedMaWeights {
    int truncation = 0;            // B: weights cover j = -B..B
    std::vector<double> weights;   // index j + truncation

    double weight(int j) const { return weights[static_cast<size_t>(j + truncation)]; }
};
TwoSidedMaWeights invert_to_ma(const Model& m, double tolerance = 1e-12);

// Draws n observations from the model. Innovations are scale * t(dof), one
// keyed draw stream per time index, so output is reproducible bit for bit
// given (model, n, seed, burn) no matter how the work is batched. The
// recursion runs burn extra steps on both sides of the kept window from zero
// edge conditions; regressor models need x to span exactly n + 2 * burn rows
// and the kept window takes its dates from x.
struct SimulationResult {
    TimeSeries series;
    TimeSeries innovations;  // same dates as series
};
int default_burn(const Model& m);  // max(200, 50 * (r + s + 1)) on composite orders
SimulationResult simulate(const Model& m, int n, std::uint64_t seed,
                          const std::optional<ExogenousPanel>& x = std::nullopt,
                          std::optional<int> burn = std::nullopt,
                          MonthDate origin = MonthDate{2000, 1});

// One-step additive form y_t = sum_d weight(d) y_{t+d} + error_scale * eps_t,
// available for models with lag and lead order at most one plus an optional
// seasonal lead factor. Displacement d < 0 points to the past.
struct AdditiveExpansion {
    std::map<int, double> weights;
    double error_scale = 1.0;

    double weight(int d) const {
        auto it = weights.find(d);
        return it == weights.end() ? 0.0 : it->second;
    }
};
AdditiveExpansion expand_additive(const Model& m);

}  // namespace noncausal

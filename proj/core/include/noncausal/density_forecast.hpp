#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "noncausal/estimation.hpp"
#include "noncausal/model.hpp"
#include "noncausal/timeseries.hpp"

namespace noncausal {

enum class ForecastMethod { lls, gj, sir };
std::string method_name(ForecastMethod m);

// Probability that the value at origin + horizon falls inside announced
// bounds, with the complementary tail masses. The three masses partition the
// simulated (or integrated) probability, so they sum to one.
struct ProbabilityForecast {
    MonthDate origin{2000, 1};
    int horizon = 1;
    double p_in_bounds = 0.0;
    double p_below_lower = 0.0;
    double p_above_upper = 0.0;
    ForecastMethod method = ForecastMethod::sir;
    long n_sims = 0;         // simulation draws (or grid size for the density route)
    int truncation = 0;      // future-error horizon M of the simulation estimator
    long n_resample = 0;     // resampled paths for the importance route
    std::uint64_t seed = 0;
    double effective_sample_size = 0.0;
    double point_mean = 0.0;
    double point_median = 0.0;
};

// Trajectories of future values starting the month after origin. weights,
// when present, are normalized importance weights over the paths.
struct ForecastPaths {
    MonthDate origin{2000, 1};
    int horizon = 0;
    std::vector<std::vector<double>> paths;
    std::optional<std::vector<double>> weights;
};

// Gaussian working model for the noncausal component, used only to propose
// paths that the importance weights then correct.
struct InstrumentalModel {
    double rho = 0.0;
    double sigma2 = 1.0;
    std::vector<double> eta;  // regressor loadings; empty without regressors
};

struct LlsSettings {
    long n_sims = 1000000;
    int truncation = 50;  // how many future errors each draw carries
    std::uint64_t seed = 1;
};

// Simulation estimator of the bounds probability: draws vectors of future
// errors, weights each by the density of the current noncausal component it
// implies, and averages the bound indicators under those weights.
ProbabilityForecast lls_probability(const FitResult& fit, const TimeSeries& series,
                                    const BoundsSeries& bounds, int h,
                                    const LlsSettings& settings);

// Predictive density on a grid, renormalized to integrate to one by the
// trapezoid rule. grid_warning flags a raw integral far from one, meaning
// the grid likely missed probability mass.
struct DensityEstimate {
    MonthDate origin{2000, 1};
    int horizon = 1;
    std::vector<double> grid;
    std::vector<double> density;
    double raw_integral = 0.0;
    bool grid_warning = false;
};

// Two-pass grid: a wide provisional scan locates the predictive median and
// spread, the final grid spans median +/- 12 spread units.
std::vector<double> gj_default_grid(const FitResult& fit, const TimeSeries& series,
                                    int n_points = 2001);

// One-step-ahead sample-based predictive density: error-density link times
// the ratio of kernel marginals over the filtered sample.
DensityEstimate gj_density_h1(const FitResult& fit, const TimeSeries& series,
                              const std::vector<double>& grid);

// Unnormalized joint predictive density of a path of future values; the log
// form is primary because the density product underflows at long horizons.
double gj_joint_log_density(const FitResult& fit, const TimeSeries& series,
                            const std::vector<double>& path);
double gj_joint_density(const FitResult& fit, const TimeSeries& series,
                        const std::vector<double>& path);

// Bounds probability and point summaries integrated from a density estimate.
ProbabilityForecast density_probability(const DensityEstimate& density,
                                        const BoundsSeries& bounds);
double density_mean(const DensityEstimate& density);
double density_quantile(const DensityEstimate& density, double prob);

struct SirSettings {
    long k_sims = 100000;
    long s_resample = 10000;
    std::uint64_t seed = 1;
};

// Importance-sampling forecast output. `resampled` holds the equal-weight
// paths drawn by systematic resampling; `weighted` keeps every proposal path
// with its normalized weight, which estimates expectations with less noise
// than the resampled subset.
struct SirForecast {
    ForecastPaths resampled;
    ForecastPaths weighted;
    InstrumentalModel instrumental;
    double effective_sample_size = 0.0;
};

// Sampling importance resampling: propose noncausal-component paths from a
// fitted Gaussian autoregression, weight by the ratio of the sample-based
// predictive density to the proposal density, resample, and rebuild value
// paths through the causal recursion.
SirForecast sir_forecast(const FitResult& fit, const TimeSeries& series, int h,
                         const SirSettings& settings);

// The Gaussian working model the importance sampler would propose from:
// least-squares slope of the component on its own lag, residual variance of
// the fitted model.
InstrumentalModel sir_instrumental(const FitResult& fit, const TimeSeries& series);

// Log density of a proposed path of future noncausal components
// (u_{T+1}..u_{T+h}); used to swap the importance target in tests.
using UPathLogDensity = std::function<double(const std::vector<double>&)>;

SirForecast sir_forecast_with_target(const FitResult& fit, const TimeSeries& series, int h,
                                     const SirSettings& settings,
                                     const UPathLogDensity& target_log_density);

// Regressor-augmented variant. x_future supplies regressor values for the
// forecast months; rows at or before the series end replace the stored
// panel values (data vintages), later rows extend it.
SirForecast marx_sir_forecast(const FitResult& fit, const TimeSeries& series,
                              const ExogenousPanel& x, const ExogenousPanel& x_future, int h,
                              const SirSettings& settings);

// Weighted fraction of paths whose terminal value lands inside the bounds
// at origin + horizon, with tail masses.
ProbabilityForecast probability_in_bounds(const ForecastPaths& paths, const BoundsSeries& bounds,
                                          ForecastMethod method = ForecastMethod::sir);

struct PointForecast {
    std::vector<double> mean;    // one entry per step 1..h
    std::vector<double> median;
};

PointForecast point_forecast(const ForecastPaths& paths);

}  // namespace noncausal

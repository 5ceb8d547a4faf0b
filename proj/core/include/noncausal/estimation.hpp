#pragma once

#include <optional>
#include <string>
#include <vector>

#include "noncausal/model.hpp"
#include "noncausal/timeseries.hpp"

namespace noncausal {

// Edge trims defining the likelihood window: observations with index in
// [lead_trim, T - trail_trim) enter the objective. A wider-than-natural
// window lets competing models share one sample so their likelihoods and
// BICs are comparable.
struct FitWindow {
    int lead_trim = 0;
    int trail_trim = 0;
};

// Least-squares autoregression without intercept:
// y_t = sum_i coeffs[i-1] * y_{t-i} + e_t.
struct ArFit {
    int order = 0;
    std::vector<double> coeffs;
    double rss = 0.0;
    int n_obs = 0;
    double bic = 0.0;
    double residual_sd = 0.0;
};

struct PseudoCausalFit {
    int p = 0;
    ArFit fit;                        // winning order on the shared window
    std::vector<double> bic_by_order;  // index = order, all on the shared window
};

struct FitResult {
    Model model;
    double loglik = 0.0;
    int n_effective = 0;
    double bic = 0.0;
    // Square roots of the inverse observed-information diagonal, ordered as
    // lag coeffs, lead coeffs, regressor coeffs, seasonal lag, seasonal
    // lead, dof, scale (absent entries skipped). Missing when the Hessian
    // is not positive definite at the optimum.
    std::optional<std::vector<double>> std_errors;
    bool converged = false;
    int n_starts_used = 0;
    double gradient_norm = 0.0;
    FitWindow window;
};

struct MarCandidate {
    int r = 0;
    int s = 0;
    double loglik = 0.0;
    double bic = 0.0;
    bool converged = false;
};

struct MarSelection {
    FitResult best;  // winner refitted on its natural window
    std::vector<MarCandidate> candidates;  // shared-window comparison
};

struct ArdlFit {
    int p = 0;
    std::vector<int> x_orders;  // distributed-lag order per regressor
    std::vector<double> ar_coeffs;
    std::vector<std::vector<double>> x_coeffs;  // x_coeffs[k][j], j = 0..x_orders[k]
    double rss = 0.0;
    int n_obs = 0;
    double bic = 0.0;
    MonthDate residual_start{2000, 1};
    std::vector<double> residuals;
};

struct MarxCandidate {
    std::vector<int> offsets;
    double loglik = 0.0;
    double bic = 0.0;
    bool converged = false;
};

struct MarxSelection {
    FitResult best;
    std::vector<MarxCandidate> candidates;
};

struct SmarCandidate {
    int lag_period = 0;   // 0 when the candidate has no seasonal lag factor
    int lead_period = 0;  // 0 when the candidate has no seasonal lead factor
    double loglik = 0.0;
    double bic = 0.0;
    bool converged = false;
};

struct SmarSelection {
    FitResult best;
    std::vector<SmarCandidate> candidates;
};

struct DiagnosticsReport {
    std::vector<double> acf;  // index = displacement, acf[0] = 1
    std::vector<int> significant_displacements;  // |acf| > 2/sqrt(n), displacement >= 1
    double jarque_bera_statistic = 0.0;
    double jarque_bera_p_value = 0.0;
    int n = 0;
};

struct RecursivePoint {
    MonthDate end{2000, 1};  // date of the last observation in the window
    int n_obs = 0;
    int p = 0;  // pseudo-causal order chosen for this window
    FitResult fit;
};

// Autoregression by least squares on observation indices [first, last) of
// values; predictors reach back `order` steps, so first >= order is required.
ArFit ar_least_squares(const std::vector<double>& values, int order, int first, int last);

// Scans AR(0..p_max) on the shared window [p_max, T) and returns the BIC
// argmin, ties toward the smaller order. BIC = n ln(RSS/n) + p ln(n).
PseudoCausalFit fit_pseudo_causal(const TimeSeries& series, int p_max = 15);

// Approximate maximum likelihood for the two-sided autoregression with
// scaled Student's-t noise. Multistart covers sign/magnitude combinations
// and the factorizations of the pseudo-causal fit's roots into lag and lead
// sides. `window`, when given, must contain the natural window {r, s}.
FitResult fit_mar_amle(const TimeSeries& series, int r, int s, int n_starts = 8,
                       std::optional<FitWindow> window = std::nullopt);

// Compares every (r, s) with r + s = p on the shared window {p, p}; ties go
// to the larger r. The winner is refitted on its natural window.
MarSelection select_mar(const TimeSeries& series, int p, int n_starts = 8);

// BIC scan over autoregressive order 0..max_lag_y and per-regressor
// distributed-lag orders 0..max_lag_x, least squares without intercept on a
// shared window; ties toward smaller orders.
ArdlFit fit_ardl(const TimeSeries& series, const ExogenousPanel& x, int max_lag_y = 4,
                 int max_lag_x = 2);

// Fits the regression-augmented model for every offset combination in
// {-1, 0, +1}^q on a shared window and keeps the likelihood winner, refitted
// on its natural window. Starts include the plain autoregressive fit with
// zero regression coefficients, so the winner can never fall below it.
MarxSelection select_marx_offsets(const TimeSeries& series, const ExogenousPanel& x, int r,
                                  int s, int n_starts = 8);

// Adds one seasonal factor per side at the given displacements. With both
// displacements the two candidates swap which side carries which period;
// with one displacement the candidates are lag-only versus lead-only. All
// parameters are re-optimized jointly from the base fit.
SmarSelection fit_smar(const TimeSeries& series, const FitResult& base, int d1,
                       std::optional<int> d2 = std::nullopt, int n_starts = 8);

// Residual autocorrelations with a 2/sqrt(n) significance band plus the
// Jarque-Bera normality statistic.
DiagnosticsReport diagnostics(const TimeSeries& residuals, int max_lag = 24);

// Expanding-window re-estimation: for each endpoint the pseudo-causal order
// is re-selected and the best two-sided model with that total order fitted.
std::vector<RecursivePoint> recursive_estimates(const TimeSeries& series,
                                                int initial_window = 100, int n_starts = 8,
                                                int p_max = 15);

// Log-likelihood of a fixed model on a chosen window (natural window when
// absent); regressor models require the panel.
double evaluate_loglik(const TimeSeries& series, const Model& model,
                       const ExogenousPanel* x = nullptr,
                       std::optional<FitWindow> window = std::nullopt);

}  // namespace noncausal

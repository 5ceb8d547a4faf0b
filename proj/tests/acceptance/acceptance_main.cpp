// Release gate: one self-contained check per shipping requirement, one
// printed line per check, process exit status equal to the number of
// failures. Every tolerance lives in the constants block below; the checks
// themselves must never loosen them.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "noncausal/credibility.hpp"
#include "noncausal/csv_io.hpp"
#include "noncausal/density_forecast.hpp"
#include "noncausal/errors.hpp"
#include "noncausal/estimation.hpp"
#include "noncausal/model.hpp"
#include "noncausal/process.hpp"
#include "noncausal/timeseries.hpp"
#include "oracles.hpp"

using namespace noncausal;

namespace {

// ---------------------------------------------------------------- gates

constexpr double kRoundtripTol = 1e-8;   // innovation recovery, max abs error
constexpr double kMedianLagTol = 0.05;   // median |lag estimate - truth|
constexpr double kMedianLeadTol = 0.03;  // median |lead estimate - truth|
constexpr int kMinOrderPicks = 80;       // order selection hits out of 100
constexpr double kTwoDecimalTol = 0.005; // agreement after rounding to 2 dp
constexpr double kAgreementTol = 0.02;   // cross-estimator probability gap
constexpr double kOracleTol = 0.01;      // estimator vs conditional oracle
constexpr double kKsTol = 0.02;          // resampled paths vs exact law
constexpr double kAucOracleTol = 1e-9;   // area vs pairwise-concordance oracle
constexpr double kNestingSlack = 1e-6;   // nested model may lose at most this

struct GateResult {
    bool pass = false;
    bool skipped = false;
    std::string detail;
};

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", x);
    return buf;
}

// ------------------------------------------------- 1: innovation recovery

// Simulated series must satisfy the generating recursion exactly: filtering
// the series back through the model has to reproduce the recorded noise.
GateResult check_innovation_roundtrip() {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> root(-0.9, 0.9);
    std::uniform_real_distribution<double> dof_draw(3.0, 8.0);
    std::uniform_real_distribution<double> scale_draw(0.5, 2.0);

    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        MarModel m;
        const int shape = k % 3;
        if (shape == 0) {
            m.lag_coeffs = {root(gen)};
            m.lead_coeffs = {root(gen)};
        } else {
            // Two real roots inside the unit disc keep the order-two side
            // stationary by construction.
            const double a = root(gen);
            const double b = root(gen);
            const std::vector<double> two = {a + b, -a * b};
            if (shape == 1) {
                m.lag_coeffs = two;
            } else {
                m.lead_coeffs = two;
            }
        }
        m.noise.dof = dof_draw(gen);
        m.noise.scale = scale_draw(gen);
        validate_model(Model(m));

        const SimulationResult sim = simulate(Model(m), 300, 1000 + k);
        const TimeSeries rec = residuals(sim.series, Model(m));
        for (int t = 0; t < rec.size(); ++t) {
            const MonthDate d = add_months(rec.start(), t);
            worst = std::max(worst, std::abs(rec[t] - sim.innovations.at(d)));
        }
    }

    GateResult g;
    g.pass = worst < kRoundtripTol;
    g.detail = "max|recovered - recorded| = " + num(worst) + " over 20 models";
    return g;
}

// ------------------------------------------------- 2: parameter recovery

GateResult check_parameter_recovery() {
    const MarModel truth{{0.58}, {0.94}, {3.25, 1.0}};
    std::vector<double> lag_err, lead_err;
    int picks = 0;
    for (int seed = 1; seed <= 100; ++seed) {
        const TimeSeries y = simulate(Model(truth), 277, seed).series;
        const FitResult fr = fit_mar_amle(y, 1, 1, 8);
        const MarModel& m = base_of(fr.model);
        lag_err.push_back(std::abs(m.lag_coeffs[0] - 0.58));
        lead_err.push_back(std::abs(m.lead_coeffs[0] - 0.94));
        try {
            const PseudoCausalFit pc = fit_pseudo_causal(y);
            const MarSelection sel = select_mar(y, pc.p, 8);
            const MarModel& win = base_of(sel.best.model);
            if (win.r() == 1 && win.s() == 1) ++picks;
        } catch (const Error&) {
            // a selection failure counts as a miss, not a crash
        }
    }
    const double med_lag = oracle::median(lag_err);
    const double med_lead = oracle::median(lead_err);

    GateResult g;
    g.pass = med_lag < kMedianLagTol && med_lead < kMedianLeadTol && picks >= kMinOrderPicks;
    g.detail = "median lag err = " + num(med_lag) + ", median lead err = " + num(med_lead) +
               ", order picks = " + std::to_string(picks) + "/100";
    return g;
}

// ------------------------------------------------- 3: additive expansion

// Hand-computed reference weights from the closed form: dividing the
// one-sided operators by (1 + lag * lead) gives the displayed one-step
// weights; agreement is required after rounding to two decimals.
GateResult check_additive_expansion() {
    auto ok = [](double got, double want) { return std::abs(got - want) < kTwoDecimalTol; };

    const AdditiveExpansion flat =
        expand_additive(Model(MarModel{{0.58}, {0.94}, {4.0, 1.0}}));
    const bool flat_ok = ok(flat.weight(-1), 0.38) && ok(flat.weight(1), 0.61);

    SmarModel seasonal;
    seasonal.base = MarModel{{0.59}, {0.96}, {3.99, 1.0}};
    seasonal.seasonal_lead_coeff = -0.30;
    seasonal.lead_period = 12;
    const AdditiveExpansion wide = expand_additive(Model(seasonal));
    const bool wide_ok = ok(wide.weight(-1), 0.38) && ok(wide.weight(1), 0.61) &&
                         ok(wide.weight(11), 0.11) && ok(wide.weight(12), -0.30) &&
                         ok(wide.weight(13), 0.18);

    GateResult g;
    g.pass = flat_ok && wide_ok;
    g.detail = "plain weights (" + num(flat.weight(-1)) + ", " + num(flat.weight(1)) +
               "), seasonal weights (" + num(wide.weight(-1)) + ", " + num(wide.weight(1)) +
               ", " + num(wide.weight(11)) + ", " + num(wide.weight(12)) + ", " +
               num(wide.weight(13)) + ")";
    return g;
}

// --------------------------------------------- 4: estimator cross-agreement

GateResult check_estimator_agreement() {
    // The density and resampling estimators replace the model marginal of the
    // forward component with an average over its filtered sample values, so
    // their gap to the pure-simulation estimate scales with that component's
    // persistence and shrinks with sample size. A long, fast-mixing series
    // keeps the comparison about the estimators rather than about how well a
    // few hundred observations approximate the component's marginal law.
    const MarModel gen{{0.5}, {0.3}, {6.0, 1.0}};
    const TimeSeries y = simulate(Model(gen), 2000, 321).series;
    const FitResult fr = fit_mar_amle(y, 1, 1, 8);

    // A fixed band between moderate sample quantiles keeps every origin's
    // probability away from 0 and 1, where agreement would be trivial.
    const double lo = oracle::quantile(y.values(), 0.2);
    const double hi = oracle::quantile(y.values(), 0.8);
    const BoundsSeries band(add_months(y.start(), 1), std::vector<double>(2100, lo),
                            std::vector<double>(2100, hi));

    double worst_sir = 0.0;
    double worst_gj = 0.0;
    for (int k = 0; k < 30; ++k) {
        const MonthDate origin = add_months(y.end(), -k);
        const TimeSeries hist = y.up_to(origin);

        const ProbabilityForecast p_lls =
            lls_probability(fr, hist, band, 1, LlsSettings{100000, 50, 900u + unsigned(k)});
        const DensityEstimate den = gj_density_h1(fr, hist, gj_default_grid(fr, hist, 501));
        const ProbabilityForecast p_gj = density_probability(den, band);
        const SirForecast sf =
            sir_forecast(fr, hist, 1, SirSettings{10000, 1000, 1700u + unsigned(k)});
        const ProbabilityForecast p_sir = probability_in_bounds(sf.weighted, band);

        worst_sir = std::max(worst_sir, std::abs(p_lls.p_in_bounds - p_sir.p_in_bounds));
        worst_gj = std::max(worst_gj, std::abs(p_lls.p_in_bounds - p_gj.p_in_bounds));
    }

    GateResult g;
    g.pass = worst_sir < kAgreementTol && worst_gj < kAgreementTol;
    g.detail = "30 origins at h=1: max|sim - resample| = " + num(worst_sir) +
               ", max|sim - density| = " + num(worst_gj);
    return g;
}

// ------------------------------------------------ 5: conditional oracle

// Reference probabilities by brute force: draw one long stationary component
// path with the standard library generator, keep the consecutive pairs whose
// first element falls inside a narrow window around the observed component,
// and use the retained successors as draws from the conditional law.
GateResult check_simulation_oracle() {
    const double lag = 0.5, lead = 0.7, dof = 4.0, scale = 1.0;
    const MarModel gen{{lag}, {lead}, {dof, scale}};
    const TimeSeries y = simulate(Model(gen), 150, 77).series;
    FitResult fr;
    fr.model = Model(gen);
    fr.converged = true;

    const double y_last = y[y.size() - 1];
    const double u_obs = y_last - lag * y[y.size() - 2];
    const double sd_u = scale * std::sqrt(dof / (dof - 2.0)) / std::sqrt(1.0 - lead * lead);

    // The component decays toward the future, so running the recursion
    // z_k = lead * z_{k-1} + noise enumerates it in reversed time: a pair
    // (z_k, z_{k-1}) is a draw of (component now, component one month later).
    const long path_len = 20000000;
    const double delta = 0.04 * sd_u;
    std::mt19937_64 rng(5150);
    std::student_t_distribution<double> tdraw(dof);
    std::vector<double> successors;        // y value implied one month ahead
    std::vector<double> successors_wide;   // fallback window, twice as wide
    double z_prev = 0.0;
    double z_cur = 0.0;
    for (long k = 0; k < path_len; ++k) {
        z_prev = z_cur;
        z_cur = lead * z_prev + scale * tdraw(rng);
        if (k < 1000) continue;  // flush the zero start
        const double gap = std::abs(z_cur - u_obs);
        if (gap <= 2.0 * delta) {
            successors_wide.push_back(lag * y_last + z_prev);
            if (gap <= delta) successors.push_back(lag * y_last + z_prev);
        }
    }
    if (successors.size() < 20000) successors.swap(successors_wide);

    // Five bands around the naive continuation, from wide to narrow plus
    // two asymmetric ones.
    const double center = lag * y_last + u_obs;
    const std::vector<std::pair<double, double>> bands = {
        {center - 2.0 * sd_u, center + 2.0 * sd_u},
        {center - 1.0 * sd_u, center + 1.0 * sd_u},
        {center - 0.5 * sd_u, center + 0.5 * sd_u},
        {center - 2.0 * sd_u, center},
        {center + 0.5 * sd_u, center + 3.0 * sd_u},
    };

    double worst = 0.0;
    for (size_t i = 0; i < bands.size(); ++i) {
        long hits = 0;
        for (double v : successors) {
            if (v >= bands[i].first && v <= bands[i].second) ++hits;
        }
        const double p_ref = double(hits) / double(successors.size());

        const BoundsSeries band(add_months(y.end(), 1), {bands[i].first}, {bands[i].second});
        const ProbabilityForecast p = lls_probability(
            fr, y, band, 1, LlsSettings{500000, 50, 4242u + unsigned(i)});
        worst = std::max(worst, std::abs(p.p_in_bounds - p_ref));
    }

    GateResult g;
    g.pass = worst < kOracleTol;
    g.detail = "max|estimate - oracle| = " + num(worst) + " over 5 bands, " +
               std::to_string(successors.size()) + " retained draws";
    return g;
}

// --------------------------------- 6: importance resampling sanity

GateResult check_importance_identity() {
    FitResult fr;
    fr.model = Model(MarModel{{0.5}, {0.8}, {5.0, 1.0}});
    fr.converged = true;
    const TimeSeries y = simulate(fr.model, 300, 11).series;
    const MarModel& m = std::get<MarModel>(fr.model);
    const InstrumentalModel inst = sir_instrumental(fr, y);
    const double y_last = y[y.size() - 1];
    const double u_last = y_last - m.lag_coeffs[0] * y[y.size() - 2];
    const double sd = std::sqrt(inst.sigma2);

    // With the importance target swapped for the proposal density itself,
    // resampling must reproduce plain sampling from the working model.
    const UPathLogDensity identity = [&](const std::vector<double>& upath) {
        double ll = 0.0;
        double prev = u_last;
        for (double uk : upath) {
            const double z = (uk - inst.rho * prev) / sd;
            ll += -0.5 * z * z - std::log(sd);
            prev = uk;
        }
        return ll;
    };

    const int h = 4;
    const SirForecast f =
        sir_forecast_with_target(fr, y, h, SirSettings{40000, 10000, 2718}, identity);

    // Exact terminal law under the working model: the value recursion is
    // linear in the jointly Gaussian components, so mean and variance follow
    // from a four-number recursion.
    const double phi = m.lag_coeffs[0];
    double mu_u = u_last, mu_y = y_last;
    double var_u = 0.0, var_y = 0.0, cov_yu = 0.0;
    for (int k = 0; k < h; ++k) {
        mu_u = inst.rho * mu_u;
        mu_y = phi * mu_y + mu_u;
        const double var_u_next = inst.rho * inst.rho * var_u + inst.sigma2;
        const double cov_next = phi * inst.rho * cov_yu + var_u_next;
        var_y = phi * phi * var_y + 2.0 * phi * inst.rho * cov_yu + var_u_next;
        var_u = var_u_next;
        cov_yu = cov_next;
    }
    const double sd_y = std::sqrt(var_y);

    std::vector<double> terminal;
    terminal.reserve(f.resampled.paths.size());
    for (const std::vector<double>& path : f.resampled.paths) terminal.push_back(path.back());
    const double ks = oracle::ks_statistic(
        terminal, [&](double x) { return oracle::normal_cdf((x - mu_y) / sd_y); });

    // An outlying final observation must be reported as degeneracy, not
    // silently absorbed: displace the current component far outside what the
    // proposal can reach. Multi-step paths compound the mismatch, so the
    // weights collapse within a few steps.
    std::vector<double> bent = y.values();
    bent.back() += 20.0 * sd;
    const TimeSeries ybent(y.start(), bent);
    bool degenerate = false;
    double reported_ess = -1.0;
    try {
        sir_forecast(fr, ybent, h, SirSettings{10000, 1000, 3});
    } catch (const DegeneracyError& e) {
        degenerate = true;
        reported_ess = e.effective_sample_size();
    }

    GateResult g;
    g.pass = ks < kKsTol && degenerate;
    g.detail = "KS(resampled, exact) = " + num(ks) + " on 10000 paths; displaced tail " +
               (degenerate ? "degenerated at ess " + num(reported_ess) : "did not degenerate");
    return g;
}

// ------------------------------------------------ 7: horizon dispersion

// Conditioning fades with the horizon: across origins, distant-horizon
// probabilities must huddle around the stationary value, so their spread
// has to fall below the one-step spread.
GateResult check_horizon_dispersion() {
    const MarModel gen{{0.5}, {0.8}, {4.0, 1.0}};
    const TimeSeries y = simulate(Model(gen), 430, 9090).series;
    const FitResult fr = fit_mar_amle(y, 1, 1, 8);

    const double lo = oracle::quantile(y.values(), 0.2);
    const double hi = oracle::quantile(y.values(), 0.8);
    const BoundsSeries band(add_months(y.start(), 1), std::vector<double>(520, lo),
                            std::vector<double>(520, hi));

    std::vector<double> p_near, p_far;
    for (int k = 0; k < 32; ++k) {
        const MonthDate origin = add_months(y.end(), -6 - k);
        const TimeSeries hist = y.up_to(origin);
        p_near.push_back(
            lls_probability(fr, hist, band, 1, LlsSettings{100000, 50, 40u + unsigned(k)})
                .p_in_bounds);
        p_far.push_back(
            lls_probability(fr, hist, band, 6, LlsSettings{100000, 50, 4000u + unsigned(k)})
                .p_in_bounds);
    }
    const double var_near = oracle::variance(p_near);
    const double var_far = oracle::variance(p_far);

    GateResult g;
    g.pass = var_far < var_near;
    g.detail = "32 origins: var(p at h=6) = " + num(var_far) + " vs var(p at h=1) = " +
               num(var_near);
    return g;
}

// --------------------------------------------------- 8: ranking curve

GateResult check_roc() {
    auto build = [](const std::vector<double>& vals, const std::vector<int>& ins) {
        CredibilityIndex idx;
        OutcomeSeries out;
        MonthDate d{2010, 1};
        for (size_t i = 0; i < vals.size(); ++i) {
            idx.dates.push_back(d);
            idx.values.push_back(vals[i]);
            out.dates.push_back(d);
            out.in_bounds.push_back(ins[i] == 1);
            d = add_months(d, 1);
        }
        idx.name = "case";
        return std::make_pair(idx, out);
    };
    auto oracle_auc = [](const CredibilityIndex& idx, const OutcomeSeries& out) {
        std::vector<double> pos, neg;
        for (size_t i = 0; i < idx.values.size(); ++i) {
            (out.in_bounds[i] ? pos : neg).push_back(idx.values[i]);
        }
        return oracle::mann_whitney_auc(pos, neg);
    };

    // Perfect separation scores exactly one.
    std::vector<double> pv;
    std::vector<int> pi;
    for (int i = 0; i < 24; ++i) {
        pi.push_back(i % 2);
        pv.push_back(i % 2 == 1 ? 0.9 : 0.1);
    }
    const auto perfect = build(pv, pi);
    const RocCurve perfect_curve = roc_curve(perfect.first, perfect.second);
    const bool perfect_ok = perfect_curve.auc == 1.0;

    // Hand cases, including heavy ties and a constant index, against the
    // pairwise-concordance oracle.
    std::vector<std::pair<CredibilityIndex, OutcomeSeries>> cases;
    cases.push_back(build({0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2}, {1, 0, 1, 1, 0, 1, 0, 0}));
    cases.push_back(build({0.5, 0.5, 0.5, 0.5, 0.7, 0.2}, {1, 0, 0, 1, 1, 0}));
    cases.push_back(build(std::vector<double>(10, 0.5), {1, 0, 1, 0, 1, 0, 1, 0, 1, 0}));
    {
        // A scrambled case from a tiny multiplicative generator.
        std::vector<double> vals;
        std::vector<int> ins;
        unsigned state = 12345;
        for (int i = 0; i < 40; ++i) {
            state = state * 1103515245u + 12345u;
            vals.push_back(double((state >> 16) % 1000) / 1000.0);
            state = state * 1103515245u + 12345u;
            ins.push_back(int((state >> 16) % 2));
        }
        cases.push_back(build(vals, ins));
    }
    double worst_gap = 0.0;
    for (const auto& c : cases) {
        const RocCurve curve = roc_curve(c.first, c.second);
        worst_gap = std::max(worst_gap, std::abs(curve.auc - oracle_auc(c.first, c.second)));
    }

    // Extreme thresholds must hit the corners exactly.
    const RocCurve corner = roc_curve(cases[0].first, cases[0].second);
    const bool corners_ok = corner.points.front().fpr == 1.0 &&
                            corner.points.front().tpr == 1.0 &&
                            corner.points.back().fpr == 0.0 && corner.points.back().tpr == 0.0;

    GateResult g;
    g.pass = perfect_ok && worst_gap < kAucOracleTol && corners_ok;
    g.detail = std::string("perfect area ") + (perfect_ok ? "exact" : "wrong") +
               ", max|area - concordance| = " + num(worst_gap) + ", corners " +
               (corners_ok ? "exact" : "wrong");
    return g;
}

// ------------------------------------------------ 9: nested likelihoods

// A model that contains another as a special case may never fit worse than
// it on the same window.
GateResult check_nesting() {
    const MarModel gen{{0.5}, {0.8}, {4.0, 1.0}};
    double margin_seasonal = 1e300;
    double margin_regressor = 1e300;
    for (int k = 1; k <= 10; ++k) {
        const TimeSeries y = simulate(Model(gen), 300, 5000 + k).series;
        const FitResult mar = fit_mar_amle(y, 1, 1, 6);

        const SmarSelection ss = fit_smar(y, mar, 12, std::nullopt, 6);
        const double mar_same_window = evaluate_loglik(y, mar.model, nullptr, ss.best.window);
        margin_seasonal = std::min(margin_seasonal, ss.best.loglik - mar_same_window);

        // One independent standard normal regressor covering the sample and
        // one month beyond each end, so every offset shift stays in range.
        std::mt19937_64 rg(777 + k);
        std::normal_distribution<double> nd;
        std::vector<double> xv(static_cast<size_t>(y.size() + 2));
        for (double& v : xv) v = nd(rg);
        const ExogenousPanel x(add_months(y.start(), -1), {"z"}, {xv});

        const MarxSelection ms = select_marx_offsets(y, x, 1, 1, 6);
        const double mar_marx_window = evaluate_loglik(y, mar.model, nullptr, ms.best.window);
        margin_regressor = std::min(margin_regressor, ms.best.loglik - mar_marx_window);
    }

    GateResult g;
    g.pass = margin_seasonal > -kNestingSlack && margin_regressor > -kNestingSlack;
    g.detail = "10 datasets: worst seasonal margin = " + num(margin_seasonal) +
               ", worst regressor margin = " + num(margin_regressor);
    return g;
}

// ------------------------------------------- 10: real-data reproduction

// Only runs when the caller supplies the real series; everything else in
// this binary is self-contained.
GateResult check_real_data() {
    const char* series_path = std::getenv("NONCAUSAL_REAL_SERIES_CSV");
    const char* bounds_path = std::getenv("NONCAUSAL_REAL_BOUNDS_CSV");
    GateResult g;
    if (series_path == nullptr || bounds_path == nullptr) {
        g.skipped = true;
        g.detail =
            "set NONCAUSAL_REAL_SERIES_CSV and NONCAUSAL_REAL_BOUNDS_CSV to enable "
            "(optional: NONCAUSAL_REAL_SERIES_COLUMN, NONCAUSAL_REAL_REGRESSORS_CSV, "
            "NONCAUSAL_REAL_REFERENCE_CSV)";
        return g;
    }

    const char* column_env = std::getenv("NONCAUSAL_REAL_SERIES_COLUMN");
    const std::string column = column_env == nullptr ? "value" : column_env;
    const TimeSeries y = load_series(series_path, column);

    const PseudoCausalFit pc = fit_pseudo_causal(y);
    const MarSelection sel = select_mar(y, pc.p, 8);
    const MarModel& m = base_of(sel.best.model);
    const bool orders_ok = m.r() == 1 && m.s() == 1;
    const bool coeffs_ok = orders_ok && std::abs(m.lag_coeffs[0] - 0.58) <= 0.03 &&
                           std::abs(m.lead_coeffs[0] - 0.94) <= 0.02 &&
                           std::abs(m.noise.dof - 3.25) <= 0.3;
    std::string detail = "orders (" + std::to_string(m.r()) + "," + std::to_string(m.s()) +
                         "), lag " + num(m.lag_coeffs[0]) + ", lead " + num(m.lead_coeffs[0]) +
                         ", dof " + num(m.noise.dof);
    bool pass = coeffs_ok;

    const char* reg_path = std::getenv("NONCAUSAL_REAL_REGRESSORS_CSV");
    if (reg_path != nullptr && orders_ok) {
        const ExogenousPanel x = load_panel(reg_path);
        const MarxSelection ms = select_marx_offsets(y, x, m.r(), m.s(), 8);
        const MarxModel& mx = std::get<MarxModel>(ms.best.model);
        bool all_lead = !mx.offsets.empty();
        for (int off : mx.offsets) all_lead = all_lead && off == 1;
        pass = pass && all_lead;
        detail += std::string(", regressor offsets ") + (all_lead ? "all lead" : "mixed");
    }

    const char* ref_path = std::getenv("NONCAUSAL_REAL_REFERENCE_CSV");
    if (ref_path != nullptr) {
        // Reference file: date,value rows holding previously published
        // one-month in-bounds probabilities; recompute each from the data up
        // to the month before and compare.
        const CredibilityIndex ref = load_index(ref_path);
        const BoundsSeries bounds = load_bounds(bounds_path);
        double worst = 0.0;
        int used = 0;
        for (int i = 0; i < ref.size(); ++i) {
            const MonthDate origin = add_months(ref.dates[i], -1);
            if (!y.contains(origin)) continue;
            const TimeSeries hist = y.up_to(origin);
            const FitResult fr = fit_mar_amle(hist, 1, 1, 8);
            const ProbabilityForecast p =
                lls_probability(fr, hist, bounds, 1, LlsSettings{100000, 50, 99});
            worst = std::max(worst, std::abs(p.p_in_bounds - ref.values[i]));
            ++used;
        }
        pass = pass && worst <= 0.05 && used > 0;
        detail += ", max reference gap " + num(worst) + " over " + std::to_string(used) +
                  " months";
    }

    g.pass = pass;
    g.detail = detail;
    return g;
}

}  // namespace

int main() {
    struct Gate {
        const char* name;
        std::function<GateResult()> run;
    };
    const std::vector<Gate> gates = {
        {"innovation-roundtrip", check_innovation_roundtrip},
        {"parameter-recovery", check_parameter_recovery},
        {"additive-expansion", check_additive_expansion},
        {"estimator-agreement", check_estimator_agreement},
        {"conditional-oracle", check_simulation_oracle},
        {"importance-resampling", check_importance_identity},
        {"horizon-dispersion", check_horizon_dispersion},
        {"ranking-curve", check_roc},
        {"nested-likelihoods", check_nesting},
        {"real-data", check_real_data},
    };

    int failed = 0;
    int skipped = 0;
    for (size_t i = 0; i < gates.size(); ++i) {
        const auto started = std::chrono::steady_clock::now();
        GateResult r;
        try {
            r = gates[i].run();
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("threw: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

        const char* tag = r.skipped ? "[SKIP]" : r.pass ? "[PASS]" : "[FAIL]";
        if (r.skipped) {
            ++skipped;
        } else if (!r.pass) {
            ++failed;
        }
        std::printf("%s %02zu %-22s %s (%.1fs)\n", tag, i + 1, gates[i].name,
                    r.detail.c_str(), secs);
        std::fflush(stdout);
    }

    std::printf("acceptance: %zu checks, %d failed, %d skipped\n", gates.size(), failed,
                skipped);
    return failed;
}

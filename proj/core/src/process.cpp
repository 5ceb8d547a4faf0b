#include "noncausal/process.hpp"

#include <algorithm>
#include <cmath>

#include "noncausal/errors.hpp"
#include "noncausal/rng.hpp"

namespace noncausal {

// out_t = y_t - sum_m c_m y_{t-m}, defined for t >= order.
static std::vector<double> apply_lag_filter(const std::vector<double>& y,
                                            const std::vector<double>& c) {
    int k = static_cast<int>(c.size());
    int n = static_cast<int>(y.size());
    if (n <= k) throw InsufficientDataError("series shorter than the lag filter order");
    std::vector<double> out(static_cast<size_t>(n - k));
    for (int t = k; t < n; ++t) {
        double acc = y[(size_t)t];
        for (int m = 1; m <= k; ++m) acc -= c[(size_t)(m - 1)] * y[(size_t)(t - m)];
        out[(size_t)(t - k)] = acc;
    }
    return out;
}

// out_t = y_t - sum_m c_m y_{t+m}, defined for t <= n-1-order.
static std::vector<double> apply_lead_filter(const std::vector<double>& y,
                                             const std::vector<double>& c) {
    int k = static_cast<int>(c.size());
    int n = static_cast<int>(y.size());
    if (n <= k) throw InsufficientDataError("series shorter than the lead filter order");
    std::vector<double> out(static_cast<size_t>(n - k));
    for (int t = 0; t < n - k; ++t) {
        double acc = y[(size_t)t];
        for (int m = 1; m <= k; ++m) acc -= c[(size_t)(m - 1)] * y[(size_t)(t + m)];
        out[(size_t)t] = acc;
    }
    return out;
}

FilterDecomposition filter_components(const TimeSeries& y, const Model& m) {
    auto lag_c = composite_lag_coeffs(m);
    auto lead_c = composite_lead_coeffs(m);
    FilterDecomposition out;
    // The noncausal part keeps the original dates shifted past the lost lags;
    // the causal part keeps the series start and loses the tail.
    out.noncausal_part =
        TimeSeries(y.date(static_cast<int>(lag_c.size())), apply_lag_filter(y.values(), lag_c));
    out.causal_part = TimeSeries(y.start(), apply_lead_filter(y.values(), lead_c));
    return out;
}

TimeSeries residuals(const TimeSeries& y, const Model& m,
                     const std::optional<ExogenousPanel>& x) {
    auto lag_c = composite_lag_coeffs(m);
    auto lead_c = composite_lead_coeffs(m);
    int lead_trim = static_cast<int>(lag_c.size());
    if (y.size() <= lead_trim + static_cast<int>(lead_c.size())) {
        throw InsufficientDataError("series too short for the model's residual support");
    }
    std::vector<double> w = apply_lag_filter(y.values(), lag_c);
    std::vector<double> eps = apply_lead_filter(w, lead_c);
    MonthDate start = y.date(lead_trim);

    if (const auto* marx = std::get_if<MarxModel>(&m)) {
        if (marx->q() > 0) {
            if (!x) throw InputError("model carries regressors but no panel was supplied");
            if (x->n_columns() != marx->q()) {
                throw InputError("panel has " + std::to_string(x->n_columns()) +
                                 " columns, model expects " + std::to_string(marx->q()));
            }
            for (size_t t = 0; t < eps.size(); ++t) {
                MonthDate date = add_months(start, static_cast<int>(t));
                for (int k = 0; k < marx->q(); ++k) {
                    MonthDate shifted = add_months(date, marx->offsets[(size_t)k]);
                    if (!x->contains(shifted)) {
                        throw InputError("panel does not cover " + to_string(shifted) +
                                         " required by regressor offset");
                    }
                    eps[t] -= marx->beta[(size_t)k] * x->value(x->index_of(shifted), k);
                }
            }
        }
    }
    return TimeSeries(start, std::move(eps));
}

TwoSidedMaWeights invert_to_ma(const Model& m, double tolerance) {
    validate_model(m);
    if (!(tolerance > 0.0)) throw InputError("tolerance must be positive");
    auto lag_c = composite_lag_coeffs(m);
    auto lead_c = composite_lead_coeffs(m);

    // Expand each side until its own tail is safely below tolerance, then
    // grow the two-sided truncation until the edge weights drop under it.
    auto expand_side = [&](const std::vector<double>& c) {
        int len = 64;
        while (true) {
            auto w = one_sided_inverse(c, len);
            double tail = 0.0;
            int probe = std::max(1, len / 8);
            for (int i = len - probe; i < len; ++i) tail = std::max(tail, std::abs(w[(size_t)i]));
            if (tail < tolerance * 1e-3 || len >= (1 << 20)) return w;
            len *= 2;
        }
    };
    std::vector<double> a = expand_side(lag_c);   // causal chain
    std::vector<double> b = expand_side(lead_c);  // anticausal chain

    auto weight_at = [&](int d) {
        double acc = 0.0;
        if (d >= 0) {
            for (size_t j = 0; j + static_cast<size_t>(d) < a.size() && j < b.size(); ++j) {
                acc += a[j + static_cast<size_t>(d)] * b[j];
            }
        } else {
            size_t off = static_cast<size_t>(-d);
            for (size_t i = 0; i < a.size() && i + off < b.size(); ++i) {
                acc += a[i] * b[i + off];
            }
        }
        return acc;
    };

    int truncation = 1;
    while (truncation < (1 << 19) &&
           (std::abs(weight_at(truncation)) >= tolerance ||
            std::abs(weight_at(-truncation)) >= tolerance)) {
        ++truncation;
    }
    TwoSidedMaWeights out;
    out.truncation = truncation;
    out.weights.resize(2 * static_cast<size_t>(truncation) + 1);
    for (int d = -truncation; d <= truncation; ++d) {
        out.weights[static_cast<size_t>(d + truncation)] = weight_at(d);
    }
    return out;
}

int default_burn(const Model& m) {
    int r = static_cast<int>(composite_lag_coeffs(m).size());
    int s = static_cast<int>(composite_lead_coeffs(m).size());
    return std::max(200, 50 * (r + s + 1));
}

SimulationResult simulate(const Model& m, int n, std::uint64_t seed,
                          const std::optional<ExogenousPanel>& x, std::optional<int> burn_opt,
                          MonthDate origin) {
    validate_model(m);
    if (n < 1) throw InputError("simulation length must be positive");
    int burn = burn_opt.value_or(default_burn(m));
    if (burn < 1) throw InputError("burn length must be positive");
    const MarModel& base = base_of(m);
    auto lag_c = composite_lag_coeffs(m);
    auto lead_c = composite_lead_coeffs(m);
    int total = n + 2 * burn;

    const auto* marx = std::get_if<MarxModel>(&m);
    if (marx && marx->q() > 0) {
        if (!x) throw InputError("model carries regressors but no panel was supplied");
        if (x->n_columns() != marx->q()) {
            throw InputError("panel has " + std::to_string(x->n_columns()) +
                             " columns, model expects " + std::to_string(marx->q()));
        }
        if (x->size() != total) {
            throw InputError("panel must span exactly n + 2*burn = " + std::to_string(total) +
                             " rows, found " + std::to_string(x->size()));
        }
    }

    // One keyed stream per time index: draw order never matters.
    std::vector<double> eps(static_cast<size_t>(total));
    for (int t = 0; t < total; ++t) {
        rng::Substream stream(seed, rng::stream_label("simulate"), static_cast<std::uint64_t>(t));
        eps[(size_t)t] = base.noise.scale * stream.student_t(base.noise.dof);
    }

    std::vector<double> z = eps;
    if (marx && marx->q() > 0) {
        for (int t = 0; t < total; ++t) {
            for (int k = 0; k < marx->q(); ++k) {
                int row = t + marx->offsets[(size_t)k];
                if (row < 0 || row >= total) continue;  // edge rows sit deep inside the burn
                z[(size_t)t] += marx->beta[(size_t)k] * x->value(row, k);
            }
        }
    }

    // Backward recursion against the lead polynomial from zero edge values.
    std::vector<double> u(static_cast<size_t>(total));
    int s_ord = static_cast<int>(lead_c.size());
    for (int t = total - 1; t >= 0; --t) {
        double acc = z[(size_t)t];
        for (int k = 1; k <= s_ord; ++k) {
            if (t + k < total) acc += lead_c[(size_t)(k - 1)] * u[(size_t)(t + k)];
        }
        u[(size_t)t] = acc;
    }
    // Forward recursion against the lag polynomial from zero edge values.
    std::vector<double> y(static_cast<size_t>(total));
    int r_ord = static_cast<int>(lag_c.size());
    for (int t = 0; t < total; ++t) {
        double acc = u[(size_t)t];
        for (int k = 1; k <= r_ord; ++k) {
            if (t - k >= 0) acc += lag_c[(size_t)(k - 1)] * y[(size_t)(t - k)];
        }
        y[(size_t)t] = acc;
    }

    MonthDate start = (marx && marx->q() > 0) ? add_months(x->start(), burn) : origin;
    SimulationResult out;
    out.series = TimeSeries(start, std::vector<double>(y.begin() + burn, y.begin() + burn + n));
    out.innovations =
        TimeSeries(start, std::vector<double>(eps.begin() + burn, eps.begin() + burn + n));
    return out;
}

AdditiveExpansion expand_additive(const Model& m) {
    validate_model(m);
    if (std::holds_alternative<MarxModel>(m)) {
        throw UnsupportedOrderError("additive expansion not defined for regressor models");
    }
    const MarModel& base = base_of(m);
    if (base.r() > 1 || base.s() > 1) {
        throw UnsupportedOrderError("additive expansion needs lag and lead order at most one");
    }
    double lag = base.r() == 1 ? base.lag_coeffs[0] : 0.0;
    double lead = base.s() == 1 ? base.lead_coeffs[0] : 0.0;
    double seasonal = 0.0;
    int displacement = 0;
    if (const auto* smar = std::get_if<SmarModel>(&m)) {
        if (smar->seasonal_lag_coeff != 0.0) {
            throw UnsupportedOrderError("additive expansion supports a seasonal lead factor only");
        }
        seasonal = smar->seasonal_lead_coeff;
        displacement = smar->lead_period;
        if (seasonal != 0.0 && displacement < 2) {
            throw UnsupportedOrderError("seasonal lead displacement must be at least 2");
        }
    }

    // Multiplying out the factors and collecting y_t on the left gives
    // (1 + lag*lead) y_t = lag y_{t-1} + lead y_{t+1}
    //                    + seasonal terms at t+S-1, t+S, t+S+1 + eps_t.
    double denom = 1.0 + lag * lead;
    AdditiveExpansion out;
    out.error_scale = 1.0 / denom;
    auto put = [&](int d, double w) {
        if (w != 0.0) out.weights[d] += w;
    };
    put(-1, lag / denom);
    put(+1, lead / denom);
    if (seasonal != 0.0) {
        put(displacement - 1, -lag * seasonal / denom);
        put(displacement, (seasonal + lag * lead * seasonal) / denom);
        put(displacement + 1, -lead * seasonal / denom);
    }
    return out;
}

}  // namespace noncausal

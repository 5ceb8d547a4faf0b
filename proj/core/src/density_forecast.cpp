#include "noncausal/density_forecast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include <Eigen/Dense>

#include "noncausal/distributions.hpp"
#include "noncausal/errors.hpp"
#include "noncausal/process.hpp"
#include "noncausal/rng.hpp"

namespace noncausal {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Mar11 {
    double lag = 0.0;
    double lead = 0.0;
    double dof = 4.0;
    double scale = 1.0;
};

Mar11 require_mar11(const FitResult& fit, const char* where) {
    const auto* m = std::get_if<MarModel>(&fit.model);
    if (m == nullptr || m->r() != 1 || m->s() != 1) {
        throw UnsupportedOrderError(std::string(where) +
                                    " is derived for one lag and one lead only");
    }
    validate_model(fit.model);
    return {m->lag_coeffs[0], m->lead_coeffs[0], m->noise.dof, m->noise.scale};
}

// Noncausal components u_t = y_t - lag * y_{t-1}, defined from the second
// observation on; the final entry is the current component.
std::vector<double> filtered_u(const TimeSeries& y, double lag) {
    if (y.size() < 2) throw InsufficientDataError("need at least two observations to filter");
    std::vector<double> u(static_cast<size_t>(y.size()) - 1);
    for (int t = 1; t < y.size(); ++t) {
        u[static_cast<size_t>(t) - 1] = y[t] - lag * y[t - 1];
    }
    return u;
}

// log sum_i g(point - lead * u_i), stabilized by max subtraction.
double log_kernel_marginal(const ScaledTDensity& g, double lead, const std::vector<double>& u,
                           double point) {
    double mx = kNegInf;
    for (double ui : u) mx = std::max(mx, g.log_pdf(point - lead * ui));
    if (!std::isfinite(mx)) return kNegInf;
    double acc = 0.0;
    for (double ui : u) acc += std::exp(g.log_pdf(point - lead * ui) - mx);
    return mx + std::log(acc);
}

double weighted_median(std::vector<std::pair<double, double>>& value_weight) {
    std::sort(value_weight.begin(), value_weight.end());
    double total = 0.0;
    for (const auto& [v, w] : value_weight) total += w;
    const double half = 0.5 * total;
    double cum = 0.0;
    for (const auto& [v, w] : value_weight) {
        cum += w;
        if (cum >= half) return v;
    }
    return value_weight.back().first;
}

void require_band_at(const BoundsSeries& bounds, MonthDate target) {
    if (!bounds.contains(target)) {
        throw InputError("bounds provide no band at " + to_string(target));
    }
}

}  // namespace

std::string method_name(ForecastMethod m) {
    switch (m) {
        case ForecastMethod::lls: return "LLS";
        case ForecastMethod::gj: return "GJ";
        case ForecastMethod::sir: return "SIR";
    }
    return "?";
}

// -------------------------------------------------------------------- LLS

ProbabilityForecast lls_probability(const FitResult& fit, const TimeSeries& series,
                                    const BoundsSeries& bounds, int h,
                                    const LlsSettings& settings) {
    const Mar11 m = require_mar11(fit, "the simulation estimator");
    if (h < 1) throw InputError("horizon must be >= 1");
    const int trunc = settings.truncation;
    if (trunc < 2 || h > trunc / 2) {
        throw InputError("horizon must satisfy h <= truncation/2");
    }
    const long n = settings.n_sims;
    if (n < 2) throw InputError("need at least two simulation draws");

    const MonthDate origin = series.end();
    const MonthDate target = add_months(origin, h);
    require_band_at(bounds, target);
    const double lb = bounds.lower_at(target);
    const double ub = bounds.upper_at(target);

    const std::vector<double> u = filtered_u(series, m.lag);
    const double u_last = u.back();
    const double pi_last = series[series.size() - 1];

    // The future value is linear in the drawn errors:
    //   value = lag^h * pi_T + sum_m value_coef[m-1] * eps_m,
    // and the implied current component residual is
    //   u_T - sum_m lead^m * eps_m.
    std::vector<double> lag_pow(static_cast<size_t>(h) + 1, 1.0);
    for (int i = 1; i <= h; ++i) lag_pow[static_cast<size_t>(i)] = lag_pow[static_cast<size_t>(i) - 1] * m.lag;
    std::vector<double> lead_pow(static_cast<size_t>(trunc) + 1, 1.0);
    for (int i = 1; i <= trunc; ++i) {
        lead_pow[static_cast<size_t>(i)] = lead_pow[static_cast<size_t>(i) - 1] * m.lead;
    }
    std::vector<double> value_coef(static_cast<size_t>(trunc), 0.0);
    std::vector<double> weight_coef(static_cast<size_t>(trunc), 0.0);
    for (int mm = 1; mm <= trunc; ++mm) {
        double acc = 0.0;
        for (int i = std::max(0, h - mm); i <= h - 1; ++i) {
            acc += lag_pow[static_cast<size_t>(i)] * lead_pow[static_cast<size_t>(mm - h + i)];
        }
        value_coef[static_cast<size_t>(mm) - 1] = acc;
        weight_coef[static_cast<size_t>(mm) - 1] = lead_pow[static_cast<size_t>(mm)];
    }
    const double drift = lag_pow[static_cast<size_t>(h)] * pi_last;

    const ScaledTDensity g(m.dof, m.scale);
    std::vector<double> values(static_cast<size_t>(n));
    std::vector<double> log_weights(static_cast<size_t>(n));
    std::vector<double> eps(static_cast<size_t>(trunc));
    for (long j = 0; j < n; ++j) {
        rng::Substream stream(settings.seed, rng::stream_label("lls"),
                              static_cast<std::uint64_t>(j));
        for (int i = 0; i < trunc; ++i) eps[static_cast<size_t>(i)] = m.scale * stream.student_t(m.dof);
        double value = drift;
        double implied = u_last;
        for (int i = 0; i < trunc; ++i) {
            value += value_coef[static_cast<size_t>(i)] * eps[static_cast<size_t>(i)];
            implied -= weight_coef[static_cast<size_t>(i)] * eps[static_cast<size_t>(i)];
        }
        values[static_cast<size_t>(j)] = value;
        log_weights[static_cast<size_t>(j)] = g.log_pdf(implied);
    }

    double max_lw = kNegInf;
    for (double lw : log_weights) max_lw = std::max(max_lw, lw);
    if (!std::isfinite(max_lw) || max_lw < -700.0) {
        throw DegeneracyError("every importance weight vanished", 0.0);
    }

    double mass_below = 0.0, mass_in = 0.0, mass_above = 0.0, sum_sq = 0.0;
    std::vector<std::pair<double, double>> value_weight(static_cast<size_t>(n));
    double mean_acc = 0.0;
    for (long j = 0; j < n; ++j) {
        const double w = std::exp(log_weights[static_cast<size_t>(j)] - max_lw);
        const double v = values[static_cast<size_t>(j)];
        sum_sq += w * w;
        if (v < lb) {
            mass_below += w;
        } else if (v > ub) {
            mass_above += w;
        } else {
            mass_in += w;
        }
        mean_acc += w * v;
        value_weight[static_cast<size_t>(j)] = {v, w};
    }
    const double total = mass_below + mass_in + mass_above;
    if (!(total > 0.0)) throw DegeneracyError("every importance weight vanished", 0.0);

    ProbabilityForecast out;
    out.origin = origin;
    out.horizon = h;
    out.p_below_lower = mass_below / total;
    out.p_in_bounds = mass_in / total;
    out.p_above_upper = mass_above / total;
    out.method = ForecastMethod::lls;
    out.n_sims = n;
    out.truncation = trunc;
    out.seed = settings.seed;
    out.effective_sample_size = total * total / sum_sq;
    out.point_mean = mean_acc / total;
    out.point_median = weighted_median(value_weight);
    return out;
}

// --------------------------------------------------------------------- GJ

DensityEstimate gj_density_h1(const FitResult& fit, const TimeSeries& series,
                              const std::vector<double>& grid) {
    const Mar11 m = require_mar11(fit, "the sample-based density");
    if (grid.size() < 2) throw InputError("density grid needs at least two points");
    for (size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || (i > 0 && grid[i] <= grid[i - 1])) {
            throw InputError("density grid must be finite and strictly increasing");
        }
    }

    const std::vector<double> u = filtered_u(series, m.lag);
    const double u_last = u.back();
    const double pi_last = series[series.size() - 1];
    const ScaledTDensity g(m.dof, m.scale);

    const double log_den = log_kernel_marginal(g, m.lead, u, u_last);
    if (!std::isfinite(log_den)) {
        throw EvaluationError("sample marginal vanished at the current component");
    }

    DensityEstimate out;
    out.origin = series.end();
    out.horizon = 1;
    out.grid = grid;
    out.density.resize(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        const double u_next = grid[i] - m.lag * pi_last;
        const double log_link = g.log_pdf(u_last - m.lead * u_next);
        const double log_num = log_kernel_marginal(g, m.lead, u, u_next);
        const double lv = log_link + log_num - log_den;
        out.density[i] = std::isfinite(lv) ? std::exp(lv) : 0.0;
    }

    double integral = 0.0;
    for (size_t i = 1; i < grid.size(); ++i) {
        integral += 0.5 * (grid[i] - grid[i - 1]) * (out.density[i] + out.density[i - 1]);
    }
    if (!(integral > 0.0)) {
        throw EvaluationError("predictive density vanished everywhere on the grid");
    }
    for (double& d : out.density) d /= integral;
    out.raw_integral = integral;
    out.grid_warning = integral < 0.5 || integral > 2.0;
    return out;
}

std::vector<double> gj_default_grid(const FitResult& fit, const TimeSeries& series,
                                    int n_points) {
    const Mar11 m = require_mar11(fit, "the sample-based density");
    if (n_points < 11) throw InputError("grid needs at least 11 points");

    const std::vector<double> u = filtered_u(series, m.lag);
    const double u_last = u.back();
    const double pi_last = series[series.size() - 1];

    const double spread_u =
        u.size() >= 2 ? std::sqrt(std::max(variance_of(u), 0.0)) : m.scale;
    const double center = m.lag * pi_last + m.lead * u_last;
    const double half = 30.0 * std::max({spread_u, m.scale, 1e-12});

    std::vector<double> coarse(1001);
    for (size_t i = 0; i < coarse.size(); ++i) {
        coarse[i] = center - half + 2.0 * half * static_cast<double>(i) /
                    static_cast<double>(coarse.size() - 1);
    }
    const DensityEstimate scan = gj_density_h1(fit, series, coarse);
    const double q16 = density_quantile(scan, 0.16);
    const double q50 = density_quantile(scan, 0.50);
    const double q84 = density_quantile(scan, 0.84);
    const double spread = std::max({0.5 * (q84 - q16), m.scale * 0.01, 1e-12});

    std::vector<double> grid(static_cast<size_t>(n_points));
    const double lo = q50 - 12.0 * spread;
    const double hi = q50 + 12.0 * spread;
    for (int i = 0; i < n_points; ++i) {
        grid[static_cast<size_t>(i)] =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_points - 1);
    }
    return grid;
}

double gj_joint_log_density(const FitResult& fit, const TimeSeries& series,
                            const std::vector<double>& path) {
    const Mar11 m = require_mar11(fit, "the sample-based density");
    if (path.empty()) throw InputError("path must contain at least one step");
    for (double v : path) {
        if (!std::isfinite(v)) throw InputError("path values must be finite");
    }

    const std::vector<double> u = filtered_u(series, m.lag);
    const double u_last = u.back();
    const double pi_last = series[series.size() - 1];
    const ScaledTDensity g(m.dof, m.scale);

    double ll = 0.0;
    double prev_pi = pi_last;
    double prev_u = u_last;
    double u_next = 0.0;
    for (double pi_k : path) {
        u_next = pi_k - m.lag * prev_pi;
        ll += g.log_pdf(prev_u - m.lead * u_next);
        prev_pi = pi_k;
        prev_u = u_next;
    }
    ll += log_kernel_marginal(g, m.lead, u, u_next);
    ll -= log_kernel_marginal(g, m.lead, u, u_last);
    return ll;
}

double gj_joint_density(const FitResult& fit, const TimeSeries& series,
                        const std::vector<double>& path) {
    return std::exp(gj_joint_log_density(fit, series, path));
}

// ------------------------------------------------------- density integrals

namespace {

// Mass of the piecewise-linear density restricted to [a, b].
double clipped_mass(const DensityEstimate& d, double a, double b) {
    if (!(b > a)) return 0.0;
    double mass = 0.0;
    for (size_t i = 1; i < d.grid.size(); ++i) {
        const double x0 = d.grid[i - 1];
        const double x1 = d.grid[i];
        const double lo = std::max(x0, a);
        const double hi = std::min(x1, b);
        if (hi <= lo) continue;
        const double f0 = d.density[i - 1];
        const double f1 = d.density[i];
        const double slope = (f1 - f0) / (x1 - x0);
        const double flo = f0 + slope * (lo - x0);
        const double fhi = f0 + slope * (hi - x0);
        mass += 0.5 * (hi - lo) * (flo + fhi);
    }
    return mass;
}

}  // namespace

double density_mean(const DensityEstimate& d) {
    double acc = 0.0;
    for (size_t i = 1; i < d.grid.size(); ++i) {
        const double x0 = d.grid[i - 1];
        const double x1 = d.grid[i];
        const double f0 = d.density[i - 1];
        const double f1 = d.density[i];
        // Exact first moment of a linear density segment.
        acc += (x1 - x0) * (f0 * (2.0 * x0 + x1) + f1 * (x0 + 2.0 * x1)) / 6.0;
    }
    return acc;
}

double density_quantile(const DensityEstimate& d, double prob) {
    if (!(prob >= 0.0 && prob <= 1.0)) throw InputError("quantile level must lie in [0, 1]");
    const double total = clipped_mass(d, d.grid.front(), d.grid.back());
    if (!(total > 0.0)) throw EvaluationError("density carries no mass");
    double target = prob * total;
    for (size_t i = 1; i < d.grid.size(); ++i) {
        const double x0 = d.grid[i - 1];
        const double x1 = d.grid[i];
        const double f0 = d.density[i - 1];
        const double f1 = d.density[i];
        const double seg = 0.5 * (x1 - x0) * (f0 + f1);
        if (target > seg) {
            target -= seg;
            continue;
        }
        const double width = x1 - x0;
        const double a = 0.5 * (f1 - f0) / width;
        double t;
        if (std::fabs(a) < 1e-300) {
            t = f0 > 0.0 ? target / f0 : width;
        } else {
            const double disc = std::max(f0 * f0 + 4.0 * a * target, 0.0);
            t = (-f0 + std::sqrt(disc)) / (2.0 * a);
        }
        return x0 + std::clamp(t, 0.0, width);
    }
    return d.grid.back();
}

ProbabilityForecast density_probability(const DensityEstimate& d, const BoundsSeries& bounds) {
    const MonthDate target = add_months(d.origin, d.horizon);
    require_band_at(bounds, target);
    const double lb = bounds.lower_at(target);
    const double ub = bounds.upper_at(target);

    const double lo_edge = d.grid.front();
    const double hi_edge = d.grid.back();
    const double below = clipped_mass(d, lo_edge, lb);
    const double inside = clipped_mass(d, std::max(lb, lo_edge), std::min(ub, hi_edge));
    const double above = clipped_mass(d, ub, hi_edge);
    const double total = below + inside + above;
    if (!(total > 0.0)) throw EvaluationError("density carries no mass");

    ProbabilityForecast out;
    out.origin = d.origin;
    out.horizon = d.horizon;
    out.p_below_lower = below / total;
    out.p_in_bounds = inside / total;
    out.p_above_upper = above / total;
    out.method = ForecastMethod::gj;
    out.n_sims = static_cast<long>(d.grid.size());
    out.point_mean = density_mean(d);
    out.point_median = density_quantile(d, 0.5);
    out.effective_sample_size = static_cast<double>(d.grid.size());
    return out;
}

// -------------------------------------------------------------------- SIR

namespace {

double ols_autoregression(const std::vector<double>& u) {
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 1; i < u.size(); ++i) {
        sxx += u[i - 1] * u[i - 1];
        sxy += u[i - 1] * u[i];
    }
    double rho = sxx > 0.0 ? sxy / sxx : 0.0;
    return std::clamp(rho, -0.9999, 0.9999);
}

SirForecast run_sir(const Mar11& m, const TimeSeries& series, int h, const SirSettings& settings,
                    const InstrumentalModel& inst, const std::vector<double>& proposal_shift,
                    const UPathLogDensity& target_log_density) {
    const long k_sims = settings.k_sims;
    const long s_resample = settings.s_resample;
    if (h < 1) throw InputError("horizon must be >= 1");
    if (s_resample < 1 || k_sims < s_resample) {
        throw InputError("need k_sims >= s_resample >= 1");
    }
    if (!(inst.sigma2 > 0.0)) throw EvaluationError("instrumental variance must be positive");

    const std::vector<double> u = filtered_u(series, m.lag);
    const double u_last = u.back();
    const double pi_last = series[series.size() - 1];
    const double sd = std::sqrt(inst.sigma2);

    std::vector<std::vector<double>> upaths(static_cast<size_t>(k_sims));
    std::vector<double> log_w(static_cast<size_t>(k_sims));
    std::vector<double> path(static_cast<size_t>(h));
    for (long i = 0; i < k_sims; ++i) {
        rng::Substream stream(settings.seed, rng::stream_label("sir"),
                              static_cast<std::uint64_t>(i));
        double prev = u_last;
        double log_proposal = 0.0;
        for (int k = 0; k < h; ++k) {
            const double mean =
                inst.rho * prev +
                (proposal_shift.empty() ? 0.0 : proposal_shift[static_cast<size_t>(k)]);
            const double draw = mean + sd * stream.normal();
            log_proposal += normal_log_pdf(draw, mean, sd);
            path[static_cast<size_t>(k)] = draw;
            prev = draw;
        }
        upaths[static_cast<size_t>(i)] = path;
        log_w[static_cast<size_t>(i)] = target_log_density(path) - log_proposal;
    }

    double max_lw = kNegInf;
    for (double lw : log_w) max_lw = std::max(max_lw, lw);
    if (!std::isfinite(max_lw)) {
        throw DegeneracyError("every importance weight vanished", 0.0);
    }
    double sum_w = 0.0, sum_sq = 0.0;
    std::vector<double> weights(static_cast<size_t>(k_sims));
    for (long i = 0; i < k_sims; ++i) {
        const double w = std::exp(log_w[static_cast<size_t>(i)] - max_lw);
        weights[static_cast<size_t>(i)] = w;
        sum_w += w;
        sum_sq += w * w;
    }
    if (!(sum_w > 0.0)) throw DegeneracyError("every importance weight vanished", 0.0);
    const double ess = sum_w * sum_w / sum_sq;
    if (ess < static_cast<double>(k_sims) / 1000.0) {
        throw DegeneracyError("importance sampling degenerated: effective sample size " +
                                  std::to_string(ess) + " of " + std::to_string(k_sims),
                              ess);
    }
    for (double& w : weights) w /= sum_w;

    // Systematic resampling: one uniform offset, evenly spaced positions.
    rng::Substream pick(settings.seed, rng::stream_label("resample"), 0);
    const double offset = pick.uniform();
    std::vector<long> chosen(static_cast<size_t>(s_resample));
    {
        long i = 0;
        double cum = weights[0];
        for (long j = 0; j < s_resample; ++j) {
            const double pos = (static_cast<double>(j) + offset) / static_cast<double>(s_resample);
            while (cum < pos && i + 1 < k_sims) {
                ++i;
                cum += weights[static_cast<size_t>(i)];
            }
            chosen[static_cast<size_t>(j)] = i;
        }
    }

    auto to_value_path = [&](const std::vector<double>& up) {
        std::vector<double> out(up.size());
        double prev = pi_last;
        for (size_t k = 0; k < up.size(); ++k) {
            prev = m.lag * prev + up[k];
            out[k] = prev;
        }
        return out;
    };

    SirForecast out;
    out.instrumental = inst;
    out.effective_sample_size = ess;
    out.weighted.origin = series.end();
    out.weighted.horizon = h;
    out.weighted.paths.reserve(static_cast<size_t>(k_sims));
    for (const auto& up : upaths) out.weighted.paths.push_back(to_value_path(up));
    out.weighted.weights = std::move(weights);
    out.resampled.origin = series.end();
    out.resampled.horizon = h;
    out.resampled.paths.reserve(static_cast<size_t>(s_resample));
    for (long j : chosen) {
        out.resampled.paths.push_back(out.weighted.paths[static_cast<size_t>(j)]);
    }
    return out;
}

InstrumentalModel plain_instrumental(const FitResult& fit, const TimeSeries& series,
                                     const Mar11& m) {
    const std::vector<double> u = filtered_u(series, m.lag);
    if (u.size() < 3) throw InsufficientDataError("too few observations for the working model");
    InstrumentalModel inst;
    inst.rho = ols_autoregression(u);
    const TimeSeries resid = residuals(series, fit.model);
    if (resid.size() < 2) throw InsufficientDataError("too few residuals for a variance");
    inst.sigma2 = variance_of(resid.values());
    if (!(inst.sigma2 > 0.0)) throw EvaluationError("residual variance is zero");
    return inst;
}

}  // namespace

InstrumentalModel sir_instrumental(const FitResult& fit, const TimeSeries& series) {
    const Mar11 m = require_mar11(fit, "importance resampling");
    return plain_instrumental(fit, series, m);
}

SirForecast sir_forecast_with_target(const FitResult& fit, const TimeSeries& series, int h,
                                     const SirSettings& settings,
                                     const UPathLogDensity& target_log_density) {
    const Mar11 m = require_mar11(fit, "importance resampling");
    const InstrumentalModel inst = plain_instrumental(fit, series, m);
    return run_sir(m, series, h, settings, inst, {}, target_log_density);
}

SirForecast sir_forecast(const FitResult& fit, const TimeSeries& series, int h,
                         const SirSettings& settings) {
    const Mar11 m = require_mar11(fit, "importance resampling");
    const InstrumentalModel inst = plain_instrumental(fit, series, m);

    const std::vector<double> u = filtered_u(series, m.lag);
    const double u_last = u.back();
    const ScaledTDensity g(m.dof, m.scale);
    const double log_den = log_kernel_marginal(g, m.lead, u, u_last);
    if (!std::isfinite(log_den)) {
        throw EvaluationError("sample marginal vanished at the current component");
    }

    UPathLogDensity target = [&g, &u, u_last, lead = m.lead, log_den](
                                 const std::vector<double>& upath) {
        double ll = 0.0;
        double prev = u_last;
        for (double uk : upath) {
            ll += g.log_pdf(prev - lead * uk);
            prev = uk;
        }
        ll += log_kernel_marginal(g, lead, u, upath.back());
        return ll - log_den;
    };
    return run_sir(m, series, h, settings, inst, {}, target);
}

SirForecast marx_sir_forecast(const FitResult& fit, const TimeSeries& series,
                              const ExogenousPanel& x, const ExogenousPanel& x_future, int h,
                              const SirSettings& settings) {
    const auto* marx = std::get_if<MarxModel>(&fit.model);
    if (marx == nullptr || marx->base.r() != 1 || marx->base.s() != 1 || marx->q() < 1) {
        throw UnsupportedOrderError(
            "regressor importance resampling needs a fitted one-lag one-lead model with "
            "regressors");
    }
    validate_model(fit.model);
    if (h < 1) throw InputError("horizon must be >= 1");
    const Mar11 m{marx->base.lag_coeffs[0], marx->base.lead_coeffs[0], marx->base.noise.dof,
                  marx->base.noise.scale};

    if (x.n_columns() != x_future.n_columns()) {
        throw InputError("future panel column count differs from the stored panel");
    }
    for (int k = 0; k < x.n_columns(); ++k) {
        if (x.names()[static_cast<size_t>(k)] != x_future.names()[static_cast<size_t>(k)]) {
            throw InputError("future panel columns must match the stored panel names");
        }
    }

    // Merge: rows of x_future inside the stored range replace stored values
    // (vintage revisions); rows beyond it extend the panel.
    std::vector<std::vector<double>> cols(static_cast<size_t>(x.n_columns()));
    for (int k = 0; k < x.n_columns(); ++k) cols[static_cast<size_t>(k)] = x.column(k);
    for (int row = 0; row < x_future.size(); ++row) {
        const int at = months_between(x.start(), x_future.date(row));
        if (at < 0) throw InputError("future panel starts before the stored panel");
        if (at > static_cast<int>(cols[0].size())) {
            throw InputError("future panel leaves a gap after " +
                             to_string(add_months(x.start(), static_cast<int>(cols[0].size()) - 1)));
        }
        for (int k = 0; k < x.n_columns(); ++k) {
            if (at == static_cast<int>(cols[static_cast<size_t>(k)].size())) {
                cols[static_cast<size_t>(k)].push_back(x_future.value(row, k));
            } else {
                cols[static_cast<size_t>(k)][static_cast<size_t>(at)] = x_future.value(row, k);
            }
        }
    }
    const ExogenousPanel merged(x.start(), x.names(), std::move(cols));

    const MonthDate last = series.end();
    // The link at step k uses regressor dates (T+k-1) + offset; the latest
    // needed is T+h for a +1 offset, the proposal needs T+1..T+h.
    int max_off = 0;
    for (int off : marx->offsets) max_off = std::max(max_off, off);
    const MonthDate needed = add_months(last, h + std::max(max_off, 0));
    if (!merged.contains(needed) || !merged.contains(add_months(last, h))) {
        throw InputError("future panel must cover " + to_string(add_months(last, h)));
    }

    const std::vector<double> u = filtered_u(series, m.lag);
    if (u.size() < 3) throw InsufficientDataError("too few observations for the working model");
    const double u_last = u.back();

    // Working model u_t = rho u_{t-1} + eta'X_t + e_t by least squares over
    // the observed sample.
    InstrumentalModel inst;
    {
        const int q = marx->q();
        const int n_rows = static_cast<int>(u.size()) - 1;
        if (n_rows < q + 3) throw InsufficientDataError("too few observations for the working model");
        Eigen::MatrixXd design(n_rows, 1 + q);
        Eigen::VectorXd response(n_rows);
        for (int j = 1; j < static_cast<int>(u.size()); ++j) {
            response(j - 1) = u[static_cast<size_t>(j)];
            design(j - 1, 0) = u[static_cast<size_t>(j) - 1];
            const MonthDate d = series.date(j + 1);
            if (!merged.contains(d)) {
                throw AlignmentError("regressor panel lacks " + to_string(d));
            }
            const int row = merged.index_of(d);
            for (int k = 0; k < q; ++k) design(j - 1, 1 + k) = merged.value(row, k);
        }
        Eigen::VectorXd coef = design.colPivHouseholderQr().solve(response);
        inst.rho = std::clamp(coef(0), -0.9999, 0.9999);
        inst.eta.assign(coef.data() + 1, coef.data() + 1 + q);
        const TimeSeries resid = residuals(series, fit.model, x);
        if (resid.size() < 2) throw InsufficientDataError("too few residuals for a variance");
        inst.sigma2 = variance_of(resid.values());
        if (!(inst.sigma2 > 0.0)) throw EvaluationError("residual variance is zero");
    }

    // Proposal mean shifts eta'X_{T+k} and link adjustments beta'X at the
    // offset dates, both read from the merged panel.
    std::vector<double> proposal_shift(static_cast<size_t>(h), 0.0);
    for (int k = 1; k <= h; ++k) {
        const int row = merged.index_of(add_months(last, k));
        double acc = 0.0;
        for (int j = 0; j < marx->q(); ++j) {
            acc += inst.eta[static_cast<size_t>(j)] * merged.value(row, j);
        }
        proposal_shift[static_cast<size_t>(k) - 1] = acc;
    }
    std::vector<double> link_shift(static_cast<size_t>(h), 0.0);
    for (int k = 1; k <= h; ++k) {
        double acc = 0.0;
        for (int j = 0; j < marx->q(); ++j) {
            const MonthDate d =
                add_months(last, k - 1 + marx->offsets[static_cast<size_t>(j)]);
            if (!merged.contains(d)) {
                throw AlignmentError("regressor panel lacks " + to_string(d));
            }
            acc += marx->beta[static_cast<size_t>(j)] * merged.value(merged.index_of(d), j);
        }
        link_shift[static_cast<size_t>(k) - 1] = acc;
    }

    const ScaledTDensity g(m.dof, m.scale);
    const double log_den = log_kernel_marginal(g, m.lead, u, u_last);
    if (!std::isfinite(log_den)) {
        throw EvaluationError("sample marginal vanished at the current component");
    }
    UPathLogDensity target = [&g, &u, u_last, lead = m.lead, log_den,
                              &link_shift](const std::vector<double>& upath) {
        double ll = 0.0;
        double prev = u_last;
        for (size_t k = 0; k < upath.size(); ++k) {
            ll += g.log_pdf(prev - lead * upath[k] - link_shift[k]);
            prev = upath[k];
        }
        ll += log_kernel_marginal(g, lead, u, upath.back());
        return ll - log_den;
    };
    return run_sir(m, series, h, settings, inst, proposal_shift, target);
}

// -------------------------------------------------------------- summaries

ProbabilityForecast probability_in_bounds(const ForecastPaths& paths, const BoundsSeries& bounds,
                                          ForecastMethod method) {
    if (paths.paths.empty() || paths.horizon < 1) {
        throw InputError("forecast paths are empty");
    }
    const MonthDate target = add_months(paths.origin, paths.horizon);
    require_band_at(bounds, target);
    const double lb = bounds.lower_at(target);
    const double ub = bounds.upper_at(target);

    const size_t n = paths.paths.size();
    if (paths.weights && paths.weights->size() != n) {
        throw InputError("weight count differs from path count");
    }

    double mass_below = 0.0, mass_in = 0.0, mass_above = 0.0, sum_sq = 0.0;
    double mean_acc = 0.0;
    std::vector<std::pair<double, double>> value_weight(n);
    for (size_t i = 0; i < n; ++i) {
        const auto& p = paths.paths[i];
        if (static_cast<int>(p.size()) != paths.horizon) {
            throw InputError("path length differs from the declared horizon");
        }
        const double v = p.back();
        const double w = paths.weights ? (*paths.weights)[i] : 1.0;
        if (w < 0.0) throw InputError("weights must be nonnegative");
        sum_sq += w * w;
        if (v < lb) {
            mass_below += w;
        } else if (v > ub) {
            mass_above += w;
        } else {
            mass_in += w;
        }
        mean_acc += w * v;
        value_weight[i] = {v, w};
    }
    const double total = mass_below + mass_in + mass_above;
    if (!(total > 0.0)) throw EvaluationError("all path weights are zero");

    ProbabilityForecast out;
    out.origin = paths.origin;
    out.horizon = paths.horizon;
    out.p_below_lower = mass_below / total;
    out.p_in_bounds = mass_in / total;
    out.p_above_upper = mass_above / total;
    out.method = method;
    out.n_sims = static_cast<long>(n);
    out.effective_sample_size = total * total / sum_sq;
    out.point_mean = mean_acc / total;
    out.point_median = weighted_median(value_weight);
    return out;
}

PointForecast point_forecast(const ForecastPaths& paths) {
    if (paths.paths.empty() || paths.horizon < 1) {
        throw InputError("forecast paths are empty");
    }
    const size_t n = paths.paths.size();
    if (paths.weights && paths.weights->size() != n) {
        throw InputError("weight count differs from path count");
    }
    for (const auto& p : paths.paths) {
        if (static_cast<int>(p.size()) != paths.horizon) {
            throw InputError("path length differs from the declared horizon");
        }
    }
    PointForecast out;
    out.mean.resize(static_cast<size_t>(paths.horizon));
    out.median.resize(static_cast<size_t>(paths.horizon));
    std::vector<std::pair<double, double>> value_weight(n);
    for (int k = 0; k < paths.horizon; ++k) {
        double acc = 0.0, total = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double v = paths.paths[i][static_cast<size_t>(k)];
            const double w = paths.weights ? (*paths.weights)[i] : 1.0;
            acc += w * v;
            total += w;
            value_weight[i] = {v, w};
        }
        if (!(total > 0.0)) throw EvaluationError("all path weights are zero");
        out.mean[static_cast<size_t>(k)] = acc / total;
        out.median[static_cast<size_t>(k)] = weighted_median(value_weight);
    }
    return out;
}

}  // namespace noncausal

#include "noncausal/estimation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "noncausal/calendar.hpp"
#include "noncausal/distributions.hpp"
#include "noncausal/errors.hpp"
#include "noncausal/optim.hpp"
#include "noncausal/polynomial.hpp"

namespace noncausal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Objective value returned outside the admissible region; real negative
// log-likelihoods on sane data sit many orders of magnitude below this.
constexpr double kPenalty = 1e9;

// ------------------------------------------------------------ free layout
// Free parameters are packed as: lag coeffs, lead coeffs, regressor coeffs,
// seasonal lag coeff, seasonal lead coeff, then the two noise parameters.
// The inner optimizer works on (a, b) with dof = 2 + exp(a), scale = exp(b);
// reports and Hessians use the natural (dof, scale) pair.

struct Structure {
    int r = 0;
    int s = 0;
    int q = 0;
    std::vector<int> offsets;  // size q, months relative to the response date
    bool seasonal_lag = false;
    int lag_period = 1;
    bool seasonal_lead = false;
    int lead_period = 1;

    int n_coeffs() const {
        return r + s + q + (seasonal_lag ? 1 : 0) + (seasonal_lead ? 1 : 0);
    }
    int dim() const { return n_coeffs() + 2; }
    int composite_lag_order() const { return r + (seasonal_lag ? lag_period : 0); }
    int composite_lead_order() const { return s + (seasonal_lead ? lead_period : 0); }
};

std::vector<double> to_natural(const Structure& st, const std::vector<double>& x) {
    std::vector<double> th = x;
    const int d = st.dim();
    th[d - 2] = 2.0 + std::exp(std::min(x[d - 2], 30.0));
    th[d - 1] = std::exp(std::clamp(x[d - 1], -300.0, 300.0));
    return th;
}

std::vector<double> to_internal(const Structure& st, const std::vector<double>& th) {
    std::vector<double> x = th;
    const int d = st.dim();
    x[d - 2] = std::log(std::max(th[d - 2] - 2.0, 1e-12));
    x[d - 1] = std::log(std::max(th[d - 1], 1e-300));
    return x;
}

std::vector<double> seasonal_factor_vec(double coeff, int period) {
    std::vector<double> f(static_cast<size_t>(period), 0.0);
    f[static_cast<size_t>(period) - 1] = coeff;
    return f;
}

double stationarity_violation(const std::vector<double>& coeffs) {
    StationarityResult res = check_stationarity(coeffs);
    if (res.stationary) return 0.0;
    double v = 1e-12;
    for (double m : res.root_moduli) v += std::max(0.0, 1.0 + kStationarityMargin - m);
    return v;
}

// ------------------------------------------------------- likelihood problem

class LikelihoodProblem {
public:
    LikelihoodProblem(const TimeSeries& y, Structure st, const ExogenousPanel* x, FitWindow w)
        : y_(y.values()), st_(std::move(st)), lo_(w.lead_trim), hi_(y.size() - w.trail_trim) {
        if (w.lead_trim < st_.composite_lag_order() || w.trail_trim < st_.composite_lead_order()) {
            throw InputError("likelihood window narrower than the operator support");
        }
        const int n = hi_ - lo_;
        if (n < st_.n_coeffs() + 3) {
            throw InsufficientDataError("effective sample too small for the parameter count");
        }
        if (st_.q > 0) {
            if (x == nullptr) throw InputError("model uses regressors but no panel was given");
            if (x->n_columns() != st_.q) {
                throw InputError("panel holds " + std::to_string(x->n_columns()) +
                                 " columns, model expects " + std::to_string(st_.q));
            }
            const int shift = months_between(x->start(), y.start());
            xrows_.assign(static_cast<size_t>(n) * static_cast<size_t>(st_.q), 0.0);
            for (int k = 0; k < st_.q; ++k) {
                const int base = st_.offsets[static_cast<size_t>(k)] + shift;
                if (lo_ + base < 0 || hi_ - 1 + base >= x->size()) {
                    const int bad_t = (lo_ + base < 0) ? lo_ : hi_ - 1;
                    MonthDate missing =
                        add_months(y.date(bad_t), st_.offsets[static_cast<size_t>(k)]);
                    throw AlignmentError("regressor panel lacks " + to_string(missing));
                }
                for (int t = lo_; t < hi_; ++t) {
                    xrows_[static_cast<size_t>(t - lo_) * static_cast<size_t>(st_.q) +
                           static_cast<size_t>(k)] = x->value(t + base, k);
                }
            }
        }
    }

    const Structure& structure() const { return st_; }
    int n_effective() const { return hi_ - lo_; }

    // Negative log-likelihood in natural parameters, with a graded penalty
    // outside the stationarity region so optimizers are pushed back inside.
    double negative_loglik(const std::vector<double>& th) const {
        const int d = st_.dim();
        const double dof = th[static_cast<size_t>(d) - 2];
        const double scale = th[static_cast<size_t>(d) - 1];
        if (!std::isfinite(dof) || !std::isfinite(scale) || dof <= 2.0 || scale <= 0.0) {
            return kPenalty;
        }
        for (double v : th) {
            if (!std::isfinite(v)) return kPenalty;
        }

        lag_c_.assign(th.begin(), th.begin() + st_.r);
        lead_c_.assign(th.begin() + st_.r, th.begin() + st_.r + st_.s);
        if (st_.seasonal_lag) {
            lag_c_ = multiply_one_minus(
                lag_c_, seasonal_factor_vec(th[static_cast<size_t>(st_.r + st_.s + st_.q)],
                                            st_.lag_period));
        }
        if (st_.seasonal_lead) {
            const int at = st_.r + st_.s + st_.q + (st_.seasonal_lag ? 1 : 0);
            lead_c_ = multiply_one_minus(
                lead_c_, seasonal_factor_vec(th[static_cast<size_t>(at)], st_.lead_period));
        }
        const double viol = stationarity_violation(lag_c_) + stationarity_violation(lead_c_);
        if (viol > 0.0) return kPenalty * (1.0 + viol);

        const int rc = static_cast<int>(lag_c_.size());
        const int sc = static_cast<int>(lead_c_.size());
        w_.resize(static_cast<size_t>(hi_ - lo_ + sc));
        for (int t = lo_; t < hi_ + sc; ++t) {
            double acc = y_[static_cast<size_t>(t)];
            for (int m = 1; m <= rc; ++m) {
                acc -= lag_c_[static_cast<size_t>(m) - 1] * y_[static_cast<size_t>(t - m)];
            }
            w_[static_cast<size_t>(t - lo_)] = acc;
        }

        const ScaledTDensity dens(dof, scale);
        double ll = 0.0;
        for (int t = lo_; t < hi_; ++t) {
            double e = w_[static_cast<size_t>(t - lo_)];
            for (int k = 1; k <= sc; ++k) {
                e -= lead_c_[static_cast<size_t>(k) - 1] * w_[static_cast<size_t>(t - lo_ + k)];
            }
            if (st_.q > 0) {
                const double* row =
                    &xrows_[static_cast<size_t>(t - lo_) * static_cast<size_t>(st_.q)];
                for (int k = 0; k < st_.q; ++k) {
                    e -= th[static_cast<size_t>(st_.r + st_.s + k)] * row[static_cast<size_t>(k)];
                }
            }
            ll += dens.log_pdf(e);
        }
        return std::isfinite(ll) ? -ll : kPenalty;
    }

    double objective(const std::vector<double>& x) const {
        return negative_loglik(to_natural(st_, x));
    }

private:
    const std::vector<double>& y_;
    Structure st_;
    int lo_;
    int hi_;
    std::vector<double> xrows_;  // row-major [n_effective x q], pre-shifted
    mutable std::vector<double> w_;
    mutable std::vector<double> lag_c_;
    mutable std::vector<double> lead_c_;
};

// ----------------------------------------------------------- model <-> params

Structure structure_of(const Model& m) {
    Structure st;
    const MarModel& base = base_of(m);
    st.r = base.r();
    st.s = base.s();
    if (const auto* marx = std::get_if<MarxModel>(&m)) {
        st.q = marx->q();
        st.offsets = marx->offsets;
    } else if (const auto* smar = std::get_if<SmarModel>(&m)) {
        if (smar->seasonal_lag_coeff != 0.0) {
            st.seasonal_lag = true;
            st.lag_period = smar->lag_period;
        }
        if (smar->seasonal_lead_coeff != 0.0) {
            st.seasonal_lead = true;
            st.lead_period = smar->lead_period;
        }
    }
    return st;
}

std::vector<double> natural_params_of(const Model& m) {
    const MarModel& base = base_of(m);
    std::vector<double> th(base.lag_coeffs.begin(), base.lag_coeffs.end());
    th.insert(th.end(), base.lead_coeffs.begin(), base.lead_coeffs.end());
    if (const auto* marx = std::get_if<MarxModel>(&m)) {
        th.insert(th.end(), marx->beta.begin(), marx->beta.end());
    } else if (const auto* smar = std::get_if<SmarModel>(&m)) {
        if (smar->seasonal_lag_coeff != 0.0) th.push_back(smar->seasonal_lag_coeff);
        if (smar->seasonal_lead_coeff != 0.0) th.push_back(smar->seasonal_lead_coeff);
    }
    th.push_back(base.noise.dof);
    th.push_back(base.noise.scale);
    return th;
}

Model make_model(const Structure& st, const std::vector<double>& th,
                 const std::vector<std::string>& names) {
    MarModel base;
    base.lag_coeffs.assign(th.begin(), th.begin() + st.r);
    base.lead_coeffs.assign(th.begin() + st.r, th.begin() + st.r + st.s);
    const int d = st.dim();
    base.noise.dof = th[static_cast<size_t>(d) - 2];
    base.noise.scale = th[static_cast<size_t>(d) - 1];
    if (st.q > 0) {
        MarxModel m;
        m.base = std::move(base);
        m.beta.assign(th.begin() + st.r + st.s, th.begin() + st.r + st.s + st.q);
        m.offsets = st.offsets;
        m.regressor_names = names;
        return m;
    }
    if (st.seasonal_lag || st.seasonal_lead) {
        SmarModel m;
        m.base = std::move(base);
        int at = st.r + st.s;
        if (st.seasonal_lag) {
            m.seasonal_lag_coeff = th[static_cast<size_t>(at++)];
            m.lag_period = st.lag_period;
        }
        if (st.seasonal_lead) {
            m.seasonal_lead_coeff = th[static_cast<size_t>(at)];
            m.lead_period = st.lead_period;
        }
        return m;
    }
    return base;
}

// ------------------------------------------------------------------ starts

// Expand prod(1 - z/root) and return the one-minus coefficients, or nothing
// when the root set is not closed under conjugation.
std::optional<std::vector<double>> coeffs_from_roots(
    const std::vector<std::complex<double>>& roots) {
    std::vector<std::complex<double>> poly{1.0};
    for (const auto& z : roots) {
        if (std::abs(z) < 1e-12) return std::nullopt;
        std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
        for (size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + 1] -= poly[i] / z;
        }
        poly = std::move(next);
    }
    std::vector<double> coeffs(poly.size() - 1);
    for (size_t i = 1; i < poly.size(); ++i) {
        if (std::abs(poly[i].imag()) > 1e-8 * (1.0 + std::abs(poly[i]))) return std::nullopt;
        coeffs[i - 1] = -poly[i].real();
    }
    return coeffs;
}

// Splits the roots of a one-sided fit into every (lag side, lead side)
// partition of sizes (r, s), keeping conjugate pairs together.
std::vector<std::vector<double>> factorization_starts(const std::vector<double>& ar_coeffs,
                                                      int r, int s) {
    std::vector<std::vector<double>> out;
    if (r + s == 0) return out;
    std::vector<std::complex<double>> roots;
    try {
        roots = polynomial_roots(ar_coeffs);
    } catch (const Error&) {
        return out;
    }
    if (static_cast<int>(roots.size()) != r + s) return out;

    std::vector<std::vector<int>> units;
    std::vector<char> used(roots.size(), 0);
    for (size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        used[i] = 1;
        if (std::fabs(roots[i].imag()) <= 1e-9 * (1.0 + std::abs(roots[i]))) {
            roots[i] = {roots[i].real(), 0.0};
            units.push_back({static_cast<int>(i)});
            continue;
        }
        int mate = -1;
        for (size_t j = i + 1; j < roots.size(); ++j) {
            if (!used[j] &&
                std::abs(std::conj(roots[i]) - roots[j]) <= 1e-6 * (1.0 + std::abs(roots[i]))) {
                mate = static_cast<int>(j);
                break;
            }
        }
        if (mate < 0) {
            units.push_back({static_cast<int>(i)});  // unmatched; rejected downstream
            continue;
        }
        used[static_cast<size_t>(mate)] = 1;
        units.push_back({static_cast<int>(i), mate});
    }

    const int n_units = static_cast<int>(units.size());
    if (n_units > 16) return out;
    for (unsigned mask = 0; mask < (1u << n_units); ++mask) {
        int picked = 0;
        for (int u = 0; u < n_units; ++u) {
            if (mask & (1u << u)) picked += static_cast<int>(units[static_cast<size_t>(u)].size());
        }
        if (picked != r) continue;
        std::vector<std::complex<double>> lag_roots, lead_roots;
        for (int u = 0; u < n_units; ++u) {
            auto& dst = (mask & (1u << u)) ? lag_roots : lead_roots;
            for (int idx : units[static_cast<size_t>(u)]) {
                dst.push_back(roots[static_cast<size_t>(idx)]);
            }
        }
        auto lag_c = coeffs_from_roots(lag_roots);
        auto lead_c = coeffs_from_roots(lead_roots);
        if (!lag_c || !lead_c) continue;
        if (!check_stationarity(*lag_c).stationary || !check_stationarity(*lead_c).stationary) {
            continue;
        }
        std::vector<double> start = *lag_c;
        start.insert(start.end(), lead_c->begin(), lead_c->end());
        out.push_back(std::move(start));
    }
    return out;
}

void append_grid_starts(std::vector<std::vector<double>>& out, int r, int s) {
    const double magnitudes[2] = {0.8, 0.3};
    const double signs[2] = {1.0, -1.0};
    for (double ml : magnitudes) {
        for (double sl : signs) {
            for (double mv : magnitudes) {
                for (double sv : signs) {
                    std::vector<double> c(static_cast<size_t>(r + s), 0.0);
                    if (r > 0) c[0] = sl * ml;
                    if (s > 0) c[static_cast<size_t>(r)] = sv * mv;
                    out.push_back(std::move(c));
                }
            }
        }
    }
    out.emplace_back(static_cast<size_t>(r + s), 0.0);
}

// Least-squares residual scale for initializing the noise parameters; falls
// back to the sample standard deviation when the regression is infeasible.
double pseudo_residual_sd(const TimeSeries& y, int order) {
    if (order > 0 && y.size() > 2 * order + 4) {
        try {
            return ar_least_squares(y.values(), order, order, y.size()).residual_sd;
        } catch (const Error&) {
        }
    }
    if (y.size() >= 2) return std::sqrt(variance_of(y.values()));
    return 1.0;
}

struct NoiseStart {
    double a = 0.0;  // ln(dof - 2) at dof = 4
    double b = 0.0;
};

NoiseStart default_noise_start(double residual_sd) {
    NoiseStart ns;
    ns.a = std::log(2.0);
    // Match the t(4) standard deviation sqrt(dof/(dof-2)) * scale to the
    // least-squares residual spread.
    ns.b = std::log(std::max(residual_sd * std::sqrt(0.5), 1e-8));
    return ns;
}

std::vector<double> assemble_start(const std::vector<double>& coeffs, int n_extra_zeros,
                                   double a, double b) {
    std::vector<double> x = coeffs;
    x.insert(x.end(), static_cast<size_t>(n_extra_zeros), 0.0);
    x.push_back(a);
    x.push_back(b);
    return x;
}

// ------------------------------------------------------------ optimization

struct OptRun {
    std::vector<double> x;
    double value = kInf;
    int used = 0;
};

OptRun run_multistart(const LikelihoodProblem& prob, const std::vector<std::vector<double>>& starts,
                      int n_starts) {
    if (n_starts < 1) throw InputError("n_starts must be >= 1");
    const Structure& st = prob.structure();
    const int d = st.dim();

    std::vector<std::vector<double>> pool;
    for (const auto& s : starts) {
        if (static_cast<int>(pool.size()) >= n_starts) break;
        if (static_cast<int>(s.size()) != d) continue;
        bool dup = false;
        for (const auto& p : pool) {
            double dist = 0.0;
            for (size_t i = 0; i < p.size(); ++i) {
                dist = std::max(dist, std::fabs(p[i] - s[i]));
            }
            if (dist < 1e-9) {
                dup = true;
                break;
            }
        }
        if (!dup) pool.push_back(s);
    }
    if (pool.empty()) throw InputError("no usable optimizer start");

    optim::Objective obj = [&prob](const std::vector<double>& x) { return prob.objective(x); };
    std::vector<double> steps(static_cast<size_t>(d), 0.1);
    for (int k = 0; k < st.q; ++k) steps[static_cast<size_t>(st.r + st.s + k)] = 0.25;
    steps[static_cast<size_t>(d) - 2] = 0.5;
    steps[static_cast<size_t>(d) - 1] = 0.3;

    OptRun best;
    best.used = static_cast<int>(pool.size());
    for (const auto& x0 : pool) {
        optim::Result simplex = optim::nelder_mead(obj, x0, steps, 1e-8, 400 * d + 200);
        optim::Result refined = optim::bfgs(obj, simplex.x, 1e-6, 150);
        const optim::Result& cand = (refined.value <= simplex.value) ? refined : simplex;
        if (cand.value < best.value) {
            best.x = cand.x;
            best.value = cand.value;
        }
    }
    if (!std::isfinite(best.value) || best.value >= 0.5 * kPenalty) {
        throw ConvergenceError("no start reached a stationary optimum");
    }
    return best;
}

std::optional<std::vector<double>> hessian_std_errors(const LikelihoodProblem& prob,
                                                      const std::vector<double>& th) {
    const int d = static_cast<int>(th.size());
    auto f = [&prob](const std::vector<double>& t) { return prob.negative_loglik(t); };
    const double f0 = f(th);
    if (!std::isfinite(f0) || f0 >= 0.5 * kPenalty) return std::nullopt;

    std::vector<double> h(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) {
        h[static_cast<size_t>(i)] = 1e-4 * (1.0 + std::fabs(th[static_cast<size_t>(i)]));
    }

    auto ok = [](double v) { return std::isfinite(v) && v < 0.25 * kPenalty; };
    std::vector<double> probe = th;
    Eigen::MatrixXd hess(d, d);
    for (int i = 0; i < d; ++i) {
        probe[static_cast<size_t>(i)] = th[static_cast<size_t>(i)] + h[static_cast<size_t>(i)];
        const double fp = f(probe);
        probe[static_cast<size_t>(i)] = th[static_cast<size_t>(i)] - h[static_cast<size_t>(i)];
        const double fm = f(probe);
        probe[static_cast<size_t>(i)] = th[static_cast<size_t>(i)];
        if (!ok(fp) || !ok(fm)) return std::nullopt;
        hess(i, i) =
            (fp - 2.0 * f0 + fm) / (h[static_cast<size_t>(i)] * h[static_cast<size_t>(i)]);
    }
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            double v[4];
            const double si = h[static_cast<size_t>(i)];
            const double sj = h[static_cast<size_t>(j)];
            const double signs[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
            for (int c = 0; c < 4; ++c) {
                probe[static_cast<size_t>(i)] = th[static_cast<size_t>(i)] + signs[c][0] * si;
                probe[static_cast<size_t>(j)] = th[static_cast<size_t>(j)] + signs[c][1] * sj;
                v[c] = f(probe);
                if (!ok(v[c])) return std::nullopt;
            }
            probe[static_cast<size_t>(i)] = th[static_cast<size_t>(i)];
            probe[static_cast<size_t>(j)] = th[static_cast<size_t>(j)];
            const double mixed = (v[0] - v[1] - v[2] + v[3]) / (4.0 * si * sj);
            hess(i, j) = mixed;
            hess(j, i) = mixed;
        }
    }

    Eigen::LLT<Eigen::MatrixXd> llt(hess);
    if (llt.info() != Eigen::Success) return std::nullopt;
    Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(d, d));
    std::vector<double> se(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) {
        const double var = inv(i, i);
        if (!std::isfinite(var) || var <= 0.0) return std::nullopt;
        se[static_cast<size_t>(i)] = std::sqrt(var);
    }
    return se;
}

FitResult finalize_fit(const LikelihoodProblem& prob, const OptRun& run, FitWindow window,
                       const std::vector<std::string>& names) {
    const Structure& st = prob.structure();
    const std::vector<double> th = to_natural(st, run.x);

    FitResult fr;
    fr.model = make_model(st, th, names);
    fr.loglik = -run.value;
    fr.n_effective = prob.n_effective();
    fr.bic = 2.0 * run.value + st.dim() * std::log(static_cast<double>(fr.n_effective));
    fr.n_starts_used = run.used;
    fr.window = window;

    optim::Objective obj = [&prob](const std::vector<double>& x) { return prob.objective(x); };
    const std::vector<double> grad = optim::numeric_gradient(obj, run.x, 1e-6);
    double gnorm = 0.0;
    for (double g : grad) gnorm = std::max(gnorm, std::fabs(g));
    fr.gradient_norm = gnorm;
    fr.converged = std::isfinite(gnorm) && gnorm < 1e-4 * (1.0 + std::fabs(fr.loglik));
    fr.std_errors = hessian_std_errors(prob, th);
    return fr;
}

FitWindow natural_mar_window(int r, int s) { return FitWindow{r, s}; }

void require_orders(int r, int s) {
    if (r < 0 || s < 0) throw InputError("polynomial orders must be nonnegative");
}

}  // namespace

// ----------------------------------------------------------- least squares

ArFit ar_least_squares(const std::vector<double>& values, int order, int first, int last) {
    if (order < 0) throw InputError("autoregressive order must be nonnegative");
    if (first < order || last > static_cast<int>(values.size()) || first > last) {
        throw InputError("regression window outside the sample");
    }
    const int n = last - first;
    if (n < order + 1 || n < 1) {
        throw InsufficientDataError("regression window shorter than the parameter count");
    }

    ArFit fit;
    fit.order = order;
    fit.n_obs = n;
    if (order == 0) {
        double rss = 0.0;
        for (int t = first; t < last; ++t) {
            rss += values[static_cast<size_t>(t)] * values[static_cast<size_t>(t)];
        }
        fit.rss = rss;
    } else {
        Eigen::MatrixXd design(n, order);
        Eigen::VectorXd response(n);
        for (int t = first; t < last; ++t) {
            response(t - first) = values[static_cast<size_t>(t)];
            for (int m = 1; m <= order; ++m) {
                design(t - first, m - 1) = values[static_cast<size_t>(t - m)];
            }
        }
        Eigen::VectorXd coef = design.colPivHouseholderQr().solve(response);
        fit.coeffs.assign(coef.data(), coef.data() + order);
        fit.rss = (response - design * coef).squaredNorm();
    }
    const double rss = std::max(fit.rss, 1e-300);
    fit.bic = n * std::log(rss / n) + order * std::log(static_cast<double>(n));
    fit.residual_sd = std::sqrt(rss / n);
    return fit;
}

PseudoCausalFit fit_pseudo_causal(const TimeSeries& series, int p_max) {
    if (p_max < 0) throw InputError("maximum order must be nonnegative");
    if (series.size() <= p_max + 10) {
        throw InsufficientDataError("series too short for the order scan");
    }
    PseudoCausalFit out;
    std::optional<ArFit> best;
    for (int p = 0; p <= p_max; ++p) {
        ArFit fit = ar_least_squares(series.values(), p, p_max, series.size());
        out.bic_by_order.push_back(fit.bic);
        if (!best || fit.bic < best->bic) {
            best = fit;
            out.p = p;
        }
    }
    out.fit = *best;
    return out;
}

// ------------------------------------------------------------------- AMLE

FitResult fit_mar_amle(const TimeSeries& series, int r, int s, int n_starts,
                       std::optional<FitWindow> window) {
    require_orders(r, s);
    if (series.size() <= r + s + 10) {
        throw InsufficientDataError("series too short for the requested orders");
    }
    const FitWindow w = window.value_or(natural_mar_window(r, s));
    Structure st;
    st.r = r;
    st.s = s;
    LikelihoodProblem prob(series, st, nullptr, w);

    const NoiseStart ns = default_noise_start(pseudo_residual_sd(series, r + s));
    std::vector<std::vector<double>> coeff_starts;
    if (r + s > 0) {
        ArFit pseudo;
        try {
            pseudo = ar_least_squares(series.values(), r + s, r + s, series.size());
            coeff_starts = factorization_starts(pseudo.coeffs, r, s);
        } catch (const Error&) {
        }
        append_grid_starts(coeff_starts, r, s);
    } else {
        coeff_starts.push_back({});
    }

    std::vector<std::vector<double>> starts;
    starts.reserve(coeff_starts.size());
    for (const auto& c : coeff_starts) starts.push_back(assemble_start(c, 0, ns.a, ns.b));

    const OptRun run = run_multistart(prob, starts, n_starts);
    return finalize_fit(prob, run, w, {});
}

MarSelection select_mar(const TimeSeries& series, int p, int n_starts) {
    if (p < 0) throw InputError("total order must be nonnegative");
    const FitWindow common{p, p};
    std::vector<MarCandidate> candidates;
    std::optional<FitResult> best;
    std::string last_failure;

    for (int r = p; r >= 0; --r) {
        const int s = p - r;
        try {
            FitResult fit = fit_mar_amle(series, r, s, n_starts, common);
            candidates.push_back({r, s, fit.loglik, fit.bic, fit.converged});
            if (!best || fit.loglik > best->loglik) best = std::move(fit);
        } catch (const ConvergenceError& e) {
            candidates.push_back({r, s, -kInf, kInf, false});
            last_failure = e.what();
        }
    }
    if (!best) {
        throw ConvergenceError("every candidate order failed to converge: " + last_failure);
    }
    const MarModel& winner = std::get<MarModel>(best->model);
    FitResult refit = fit_mar_amle(series, winner.r(), winner.s(), n_starts);
    return {std::move(refit), std::move(candidates)};
}

// ------------------------------------------------------------------- ARDL

ArdlFit fit_ardl(const TimeSeries& series, const ExogenousPanel& x, int max_lag_y,
                 int max_lag_x) {
    if (max_lag_y < 0 || max_lag_x < 0) throw InputError("lag bounds must be nonnegative");
    const int t_len = series.size();
    const int q = x.n_columns();
    const int shift = q > 0 ? months_between(x.start(), series.start()) : 0;

    int lead = max_lag_y;
    int trail = 0;
    if (q > 0) {
        lead = std::max(lead, max_lag_x - shift);
        trail = std::max(trail, t_len - x.size() + shift);
    }
    lead = std::max(lead, 0);
    trail = std::max(trail, 0);
    const int n = t_len - lead - trail;
    const int k_max = max_lag_y + q * (max_lag_x + 1);
    if (n < k_max + 5) throw InsufficientDataError("aligned sample too small for the lag scan");

    const auto& yv = series.values();
    Eigen::VectorXd response(n);
    for (int t = lead; t < t_len - trail; ++t) response(t - lead) = yv[static_cast<size_t>(t)];

    std::optional<ArdlFit> best;
    std::vector<int> x_orders(static_cast<size_t>(q), 0);

    for (int p = 0; p <= max_lag_y; ++p) {
        std::fill(x_orders.begin(), x_orders.end(), 0);
        while (true) {
            int cols = p;
            for (int o : x_orders) cols += o + 1;

            ArdlFit cand;
            cand.p = p;
            cand.x_orders = x_orders;
            cand.n_obs = n;
            cand.residual_start = series.date(lead);
            if (cols == 0) {
                cand.rss = response.squaredNorm();
                cand.residuals.assign(response.data(), response.data() + n);
            } else {
                Eigen::MatrixXd design(n, cols);
                for (int t = lead; t < t_len - trail; ++t) {
                    int c = 0;
                    for (int m = 1; m <= p; ++m) {
                        design(t - lead, c++) = yv[static_cast<size_t>(t - m)];
                    }
                    for (int k = 0; k < q; ++k) {
                        for (int j = 0; j <= x_orders[static_cast<size_t>(k)]; ++j) {
                            design(t - lead, c++) = x.value(t - j + shift, k);
                        }
                    }
                }
                Eigen::JacobiSVD<Eigen::MatrixXd> svd(design,
                                                      Eigen::ComputeThinU | Eigen::ComputeThinV);
                const auto& sing = svd.singularValues();
                const double smax = sing(0);
                const double smin = sing(sing.size() - 1);
                if (!(smin > 0.0) || smax / smin > 1e10) {
                    throw DegeneracyError("collinear regression design in the lag scan");
                }
                Eigen::VectorXd coef = svd.solve(response);
                Eigen::VectorXd resid = response - design * coef;
                cand.rss = resid.squaredNorm();
                cand.residuals.assign(resid.data(), resid.data() + n);
                cand.ar_coeffs.assign(coef.data(), coef.data() + p);
                int c = p;
                for (int k = 0; k < q; ++k) {
                    const int o = x_orders[static_cast<size_t>(k)];
                    cand.x_coeffs.emplace_back(coef.data() + c, coef.data() + c + o + 1);
                    c += o + 1;
                }
            }
            cand.bic = n * std::log(std::max(cand.rss, 1e-300) / n) +
                       cols * std::log(static_cast<double>(n));
            if (!best || cand.bic < best->bic) best = std::move(cand);

            int i = q - 1;
            while (i >= 0 && x_orders[static_cast<size_t>(i)] == max_lag_x) {
                x_orders[static_cast<size_t>(i)] = 0;
                --i;
            }
            if (i < 0) break;
            ++x_orders[static_cast<size_t>(i)];
        }
    }
    return *best;
}

// ------------------------------------------------------------------- MARX

MarxSelection select_marx_offsets(const TimeSeries& series, const ExogenousPanel& x, int r,
                                  int s, int n_starts) {
    require_orders(r, s);
    const int q = x.n_columns();
    if (q < 1) throw InputError("at least one regressor is required");
    const int t_len = series.size();
    if (t_len <= r + s + 10) throw InsufficientDataError("series too short for the requested orders");
    const int shift = months_between(x.start(), series.start());
    const FitWindow common{std::max({r, 1 - shift, 0}),
                           std::max({s, t_len - x.size() + 1 + shift, 0})};

    // Shared-window base fit: its parameters seed every offset combination,
    // so the winner cannot fall below the regressor-free likelihood.
    const FitResult base = fit_mar_amle(series, r, s, n_starts, common);
    const MarModel& bm = std::get<MarModel>(base.model);
    std::vector<double> base_coeffs = bm.lag_coeffs;
    base_coeffs.insert(base_coeffs.end(), bm.lead_coeffs.begin(), bm.lead_coeffs.end());
    const double a_base = std::log(std::max(bm.noise.dof - 2.0, 1e-12));
    const double b_base = std::log(std::max(bm.noise.scale, 1e-300));
    const NoiseStart ns = default_noise_start(pseudo_residual_sd(series, r + s));

    std::vector<std::vector<double>> grid;
    append_grid_starts(grid, r, s);

    auto build_starts = [&]() {
        std::vector<std::vector<double>> starts;
        starts.push_back(assemble_start(base_coeffs, q, a_base, b_base));
        for (const auto& c : grid) starts.push_back(assemble_start(c, q, ns.a, ns.b));
        return starts;
    };

    std::vector<MarxCandidate> candidates;
    std::optional<FitResult> best_fit;
    std::vector<int> best_offsets;
    std::string last_failure;

    std::vector<int> offsets(static_cast<size_t>(q), -1);
    while (true) {
        Structure st;
        st.r = r;
        st.s = s;
        st.q = q;
        st.offsets = offsets;
        try {
            LikelihoodProblem prob(series, st, &x, common);
            const OptRun run = run_multistart(prob, build_starts(), n_starts);
            FitResult fit = finalize_fit(prob, run, common, x.names());
            candidates.push_back({offsets, fit.loglik, fit.bic, fit.converged});
            if (!best_fit || fit.loglik > best_fit->loglik) {
                best_fit = std::move(fit);
                best_offsets = offsets;
            }
        } catch (const ConvergenceError& e) {
            candidates.push_back({offsets, -kInf, kInf, false});
            last_failure = e.what();
        }

        int i = q - 1;
        while (i >= 0 && offsets[static_cast<size_t>(i)] == 1) {
            offsets[static_cast<size_t>(i)] = -1;
            --i;
        }
        if (i < 0) break;
        ++offsets[static_cast<size_t>(i)];
    }
    if (!best_fit) {
        throw ConvergenceError("every offset combination failed to converge: " + last_failure);
    }

    // Refit the winner on its own natural window.
    FitWindow natural{r, s};
    for (int off : best_offsets) {
        natural.lead_trim = std::max(natural.lead_trim, -(off + shift));
        natural.trail_trim = std::max(natural.trail_trim, t_len - x.size() + off + shift);
    }
    natural.lead_trim = std::max(natural.lead_trim, 0);
    natural.trail_trim = std::max(natural.trail_trim, 0);

    Structure st;
    st.r = r;
    st.s = s;
    st.q = q;
    st.offsets = best_offsets;
    LikelihoodProblem prob(series, st, &x, natural);
    const OptRun run = run_multistart(prob, build_starts(), n_starts);
    FitResult refit = finalize_fit(prob, run, natural, x.names());
    return {std::move(refit), std::move(candidates)};
}

// ------------------------------------------------------------------- SMAR

SmarSelection fit_smar(const TimeSeries& series, const FitResult& base, int d1,
                       std::optional<int> d2, int n_starts) {
    const MarModel* bm = std::get_if<MarModel>(&base.model);
    if (bm == nullptr) {
        throw InputError("seasonal extension requires a plain two-sided base fit");
    }
    if (d1 < 1 || (d2 && *d2 < 1)) throw InputError("seasonal displacement must be >= 1");
    const int r = bm->r();
    const int s = bm->s();

    struct CandSpec {
        bool lag = false;
        int lag_period = 1;
        bool lead = false;
        int lead_period = 1;
    };
    std::vector<CandSpec> specs;
    if (d2) {
        specs.push_back({true, d1, true, *d2});
        specs.push_back({true, *d2, true, d1});
    } else {
        specs.push_back({true, d1, false, 1});
        specs.push_back({false, 1, true, d1});
    }

    FitWindow common{r, s};
    for (const auto& sp : specs) {
        if (sp.lag) common.lead_trim = std::max(common.lead_trim, r + sp.lag_period);
        if (sp.lead) common.trail_trim = std::max(common.trail_trim, s + sp.lead_period);
    }

    std::vector<double> base_coeffs = bm->lag_coeffs;
    base_coeffs.insert(base_coeffs.end(), bm->lead_coeffs.begin(), bm->lead_coeffs.end());
    const double a_base = std::log(std::max(bm->noise.dof - 2.0, 1e-12));
    const double b_base = std::log(std::max(bm->noise.scale, 1e-300));
    const NoiseStart ns = default_noise_start(pseudo_residual_sd(series, r + s));
    std::vector<std::vector<double>> grid;
    append_grid_starts(grid, r, s);

    auto fit_spec = [&](const CandSpec& sp, FitWindow w) {
        Structure st;
        st.r = r;
        st.s = s;
        st.seasonal_lag = sp.lag;
        st.lag_period = sp.lag_period;
        st.seasonal_lead = sp.lead;
        st.lead_period = sp.lead_period;
        const int n_seasonal = (sp.lag ? 1 : 0) + (sp.lead ? 1 : 0);

        std::vector<std::vector<double>> starts;
        starts.push_back(assemble_start(base_coeffs, n_seasonal, a_base, b_base));
        // Nudged seasonal starts help when the seasonal signal is strong.
        for (double nudge : {0.3, -0.3}) {
            std::vector<double> c = base_coeffs;
            c.insert(c.end(), static_cast<size_t>(n_seasonal), nudge);
            starts.push_back(assemble_start(c, 0, a_base, b_base));
        }
        for (const auto& c : grid) starts.push_back(assemble_start(c, n_seasonal, ns.a, ns.b));

        LikelihoodProblem prob(series, st, nullptr, w);
        const OptRun run = run_multistart(prob, starts, n_starts);
        return finalize_fit(prob, run, w, {});
    };

    std::vector<SmarCandidate> candidates;
    std::optional<FitResult> best;
    std::optional<CandSpec> best_spec;
    std::string last_failure;
    for (const auto& sp : specs) {
        try {
            FitResult fit = fit_spec(sp, common);
            candidates.push_back({sp.lag ? sp.lag_period : 0, sp.lead ? sp.lead_period : 0,
                                  fit.loglik, fit.bic, fit.converged});
            if (!best || fit.loglik > best->loglik) {
                best = std::move(fit);
                best_spec = sp;
            }
        } catch (const ConvergenceError& e) {
            candidates.push_back({sp.lag ? sp.lag_period : 0, sp.lead ? sp.lead_period : 0, -kInf,
                                  kInf, false});
            last_failure = e.what();
        }
    }
    if (!best) {
        throw ConvergenceError("every seasonal candidate failed to converge: " + last_failure);
    }

    const FitWindow natural{r + (best_spec->lag ? best_spec->lag_period : 0),
                            s + (best_spec->lead ? best_spec->lead_period : 0)};
    FitResult refit = fit_spec(*best_spec, natural);
    return {std::move(refit), std::move(candidates)};
}

// ------------------------------------------------------------- diagnostics

DiagnosticsReport diagnostics(const TimeSeries& residuals, int max_lag) {
    if (max_lag < 1) throw InputError("diagnostics need max_lag >= 1");
    const int n = residuals.size();
    if (n <= max_lag + 5) throw InsufficientDataError("residual sample too short for diagnostics");

    DiagnosticsReport report;
    report.n = n;
    report.acf = sample_acf(residuals.values(), max_lag);
    const double band = 2.0 / std::sqrt(static_cast<double>(n));
    for (int k = 1; k <= max_lag; ++k) {
        if (std::fabs(report.acf[static_cast<size_t>(k)]) > band) {
            report.significant_displacements.push_back(k);
        }
    }
    const JarqueBeraResult jb = jarque_bera(residuals.values());
    report.jarque_bera_statistic = jb.statistic;
    report.jarque_bera_p_value = jb.p_value;
    return report;
}

std::vector<RecursivePoint> recursive_estimates(const TimeSeries& series, int initial_window,
                                                int n_starts, int p_max) {
    if (initial_window <= p_max + 10) {
        throw InputError("initial window too short for the order scan");
    }
    if (series.size() < initial_window) {
        throw InsufficientDataError("series shorter than the initial window");
    }
    std::vector<RecursivePoint> out;
    for (int n = initial_window; n <= series.size(); ++n) {
        const TimeSeries prefix = series.first_n(n);
        const PseudoCausalFit pc = fit_pseudo_causal(prefix, p_max);
        MarSelection sel = select_mar(prefix, pc.p, n_starts);
        RecursivePoint pt;
        pt.end = prefix.date(n - 1);
        pt.n_obs = n;
        pt.p = pc.p;
        pt.fit = std::move(sel.best);
        out.push_back(std::move(pt));
    }
    return out;
}

double evaluate_loglik(const TimeSeries& series, const Model& model, const ExogenousPanel* x,
                       std::optional<FitWindow> window) {
    validate_model(model);
    const EdgeTrims trims = residual_trims(model);
    const FitWindow w = window.value_or(FitWindow{trims.lead, trims.trail});
    LikelihoodProblem prob(series, structure_of(model), x, w);
    const double neg = prob.negative_loglik(natural_params_of(model));
    if (!std::isfinite(neg) || neg >= 0.5 * kPenalty) {
        throw EvaluationError("log-likelihood undefined for this model on the given data");
    }
    return -neg;
}

}  // namespace noncausal

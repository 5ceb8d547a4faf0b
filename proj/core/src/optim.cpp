#include "noncausal/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace noncausal {
namespace optim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double guarded(const Objective& f, const std::vector<double>& x, int& evals) {
    ++evals;
    const double v = f(x);
    return std::isfinite(v) ? v : kInf;
}

struct BestTracker {
    std::vector<double> x;
    double value = kInf;

    void offer(const std::vector<double>& cand, double v) {
        if (v < value) {
            value = v;
            x = cand;
        }
    }
};

}  // namespace

Result nelder_mead(const Objective& f, const std::vector<double>& x0,
                   const std::vector<double>& steps, double tol_rel, int max_evaluations) {
    const std::size_t n = x0.size();
    int evals = 0;
    BestTracker best;

    std::vector<std::vector<double>> verts(n + 1, x0);
    std::vector<double> vals(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        double step = (i < steps.size() && steps[i] != 0.0) ? steps[i] : 0.1;
        verts[i + 1][i] += step;
    }
    for (std::size_t i = 0; i <= n; ++i) {
        vals[i] = guarded(f, verts[i], evals);
        best.offer(verts[i], vals[i]);
    }

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), trial(n);
    bool converged = false;

    while (evals < max_evaluations) {
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const std::size_t lo = order[0];
        const std::size_t hi = order[n];
        const std::size_t next_hi = order[n - 1];

        if (std::isfinite(vals[hi]) &&
            vals[hi] - vals[lo] <= tol_rel * (1.0 + std::fabs(vals[lo]))) {
            converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == hi) continue;
            for (std::size_t j = 0; j < n; ++j) centroid[j] += verts[i][j];
        }
        for (std::size_t j = 0; j < n; ++j) centroid[j] /= static_cast<double>(n);

        auto blend = [&](double coef) {
            for (std::size_t j = 0; j < n; ++j)
                trial[j] = centroid[j] + coef * (centroid[j] - verts[hi][j]);
        };

        blend(1.0);  // reflect
        const double f_reflect = guarded(f, trial, evals);
        best.offer(trial, f_reflect);

        if (f_reflect < vals[lo]) {
            auto reflected = trial;
            blend(2.0);  // expand
            const double f_expand = guarded(f, trial, evals);
            best.offer(trial, f_expand);
            if (f_expand < f_reflect) {
                verts[hi] = trial;
                vals[hi] = f_expand;
            } else {
                verts[hi] = reflected;
                vals[hi] = f_reflect;
            }
            continue;
        }
        if (f_reflect < vals[next_hi]) {
            verts[hi] = trial;
            vals[hi] = f_reflect;
            continue;
        }

        blend(f_reflect < vals[hi] ? 0.5 : -0.5);  // contract toward the better side
        const double f_contract = guarded(f, trial, evals);
        best.offer(trial, f_contract);
        if (f_contract < std::min(f_reflect, vals[hi])) {
            verts[hi] = trial;
            vals[hi] = f_contract;
            continue;
        }

        // Shrink everything toward the current best vertex.
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == lo) continue;
            for (std::size_t j = 0; j < n; ++j)
                verts[i][j] = verts[lo][j] + 0.5 * (verts[i][j] - verts[lo][j]);
            vals[i] = guarded(f, verts[i], evals);
            best.offer(verts[i], vals[i]);
        }
    }

    Result out;
    out.x = best.x.empty() ? x0 : best.x;
    out.value = best.value;
    out.evaluations = evals;
    out.converged = converged;
    return out;
}

std::vector<double> numeric_gradient(const Objective& f, const std::vector<double>& x,
                                     double step_scale) {
    const std::size_t n = x.size();
    std::vector<double> g(n, 0.0);
    std::vector<double> probe = x;
    for (std::size_t i = 0; i < n; ++i) {
        const double h = step_scale * (1.0 + std::fabs(x[i]));
        probe[i] = x[i] + h;
        const double fp = f(probe);
        probe[i] = x[i] - h;
        const double fm = f(probe);
        probe[i] = x[i];
        if (std::isfinite(fp) && std::isfinite(fm)) {
            g[i] = (fp - fm) / (2.0 * h);
        } else {
            g[i] = kInf;
        }
    }
    return g;
}

Result bfgs(const Objective& f, const std::vector<double>& x0, double grad_tol,
            int max_iterations) {
    const std::size_t n = x0.size();
    int evals = 0;
    BestTracker best;

    std::vector<double> x = x0;
    double fx = guarded(f, x, evals);
    best.offer(x, fx);

    // Inverse Hessian estimate, identity to start.
    std::vector<double> h_inv(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) h_inv[i * n + i] = 1.0;

    auto grad_at = [&](const std::vector<double>& p) {
        auto g = numeric_gradient(f, p, 1e-6);
        evals += static_cast<int>(2 * n);
        return g;
    };

    std::vector<double> g = grad_at(x);
    bool converged = false;

    std::vector<double> dir(n), x_new(n), g_new(n), s(n), y(n), hy(n);
    for (int iter = 0; iter < max_iterations; ++iter) {
        double g_norm = 0.0;
        for (double v : g) g_norm = std::max(g_norm, std::fabs(v));
        if (!std::isfinite(g_norm)) break;
        if (g_norm <= grad_tol * (1.0 + std::fabs(fx))) {
            converged = true;
            break;
        }

        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += h_inv[i * n + j] * g[j];
            dir[i] = -acc;
        }
        double slope = 0.0;
        for (std::size_t i = 0; i < n; ++i) slope += dir[i] * g[i];
        if (!(slope < 0.0)) {
            // Reset to steepest descent when curvature information degrades.
            for (std::size_t i = 0; i < n; ++i) {
                std::fill(h_inv.begin() + static_cast<long>(i * n),
                          h_inv.begin() + static_cast<long>((i + 1) * n), 0.0);
                h_inv[i * n + i] = 1.0;
                dir[i] = -g[i];
            }
            slope = 0.0;
            for (std::size_t i = 0; i < n; ++i) slope += dir[i] * g[i];
            if (!(slope < 0.0)) break;
        }

        double step = 1.0;
        double f_new = kInf;
        bool accepted = false;
        for (int half = 0; half < 40; ++half) {
            for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * dir[i];
            f_new = guarded(f, x_new, evals);
            best.offer(x_new, f_new);
            if (f_new <= fx + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        g_new = grad_at(x_new);
        double ys = 0.0, s_norm = 0.0, y_norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = x_new[i] - x[i];
            y[i] = g_new[i] - g[i];
            ys += y[i] * s[i];
            s_norm = std::max(s_norm, std::fabs(s[i]));
            y_norm = std::max(y_norm, std::fabs(y[i]));
        }
        x = x_new;
        fx = f_new;
        g = g_new;

        bool y_ok = std::isfinite(ys) && std::isfinite(y_norm);
        if (y_ok && ys > 1e-12 * (1.0 + s_norm) * (1.0 + y_norm)) {
            const double rho = 1.0 / ys;
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < n; ++j) acc += h_inv[i * n + j] * y[j];
                hy[i] = acc;
            }
            double y_h_y = 0.0;
            for (std::size_t i = 0; i < n; ++i) y_h_y += y[i] * hy[i];
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    h_inv[i * n + j] += -rho * (s[i] * hy[j] + hy[i] * s[j]) +
                                        rho * rho * y_h_y * s[i] * s[j] + rho * s[i] * s[j];
                }
            }
        }
        if (s_norm == 0.0) break;
    }

    Result out;
    out.x = best.x.empty() ? x0 : best.x;
    out.value = best.value;
    out.evaluations = evals;
    out.converged = converged;
    return out;
}

}  // namespace optim
}  // namespace noncausal

#pragma once

#include <functional>
#include <vector>

namespace noncausal {
namespace optim {

// Scalar objective to be minimized. Non-finite returns are treated as +inf.
using Objective = std::function<double(const std::vector<double>&)>;

struct Result {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;  // stop rule met before the evaluation cap
};

// Derivative-free simplex search. steps sets the initial simplex edge per
// coordinate; stops when the simplex value spread falls under
// tol_rel * (1 + |best|).
Result nelder_mead(const Objective& f, const std::vector<double>& x0,
                   const std::vector<double>& steps, double tol_rel, int max_evaluations);

std::vector<double> numeric_gradient(const Objective& f, const std::vector<double>& x,
                                     double step_scale = 1e-6);

// Quasi-Newton refinement with numeric gradients and backtracking line
// search; stops when the gradient infinity norm falls under
// grad_tol * (1 + |f|).
Result bfgs(const Objective& f, const std::vector<double>& x0, double grad_tol,
            int max_iterations);

}  // namespace optim
}  // namespace noncausal

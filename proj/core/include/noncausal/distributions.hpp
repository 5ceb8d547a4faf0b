#pragma once

#include <cmath>
#include <vector>

namespace noncausal {

// Log density of the standardized Student's t distribution.
double student_t_log_pdf(double x, double dof);
double student_t_pdf(double x, double dof);

// Density of scale times a t(dof) variable: (1/scale) f(x/scale). The scale
// here is the raw density scale, not the standard deviation.
double scaled_t_log_pdf(double x, double dof, double scale);
double scaled_t_pdf(double x, double dof, double scale);

double normal_log_pdf(double x, double mean, double sd);

// Caches the dof-dependent normalizing constants; forecasting loops evaluate
// millions of points at a single (dof, scale) pair.
class ScaledTDensity {
public:
    ScaledTDensity(double dof, double scale);

    double log_pdf(double x) const {
        double z = x * inv_scale_;
        return log_norm_ - half_exponent_ * std::log1p(z * z * inv_dof_);
    }
    double pdf(double x) const { return std::exp(log_pdf(x)); }

    double dof() const { return dof_; }
    double scale() const { return scale_; }

private:
    double dof_;
    double scale_;
    double inv_scale_;
    double inv_dof_;
    double log_norm_;
    double half_exponent_;
};

struct JarqueBeraResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

// Moment-based normality statistic with its chi-squared(2) tail probability.
JarqueBeraResult jarque_bera(const std::vector<double>& x);

// Sample autocorrelations rho(0..max_lag) about the sample mean.
std::vector<double> sample_acf(const std::vector<double>& x, int max_lag);

double mean_of(const std::vector<double>& x);
double variance_of(const std::vector<double>& x);  // unbiased

}  // namespace noncausal

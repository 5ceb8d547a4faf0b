#include "noncausal/distributions.hpp"

#include <cmath>

#include "noncausal/errors.hpp"

namespace noncausal {

static constexpr double kPi = 3.14159265358979323846;

double student_t_log_pdf(double x, double dof) {
    return std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof) -
           0.5 * std::log(dof * kPi) - 0.5 * (dof + 1.0) * std::log1p(x * x / dof);
}

double student_t_pdf(double x, double dof) { return std::exp(student_t_log_pdf(x, dof)); }

double scaled_t_log_pdf(double x, double dof, double scale) {
    return student_t_log_pdf(x / scale, dof) - std::log(scale);
}

double scaled_t_pdf(double x, double dof, double scale) {
    return std::exp(scaled_t_log_pdf(x, dof, scale));
}

double normal_log_pdf(double x, double mean, double sd) {
    double z = (x - mean) / sd;
    return -0.5 * z * z - std::log(sd) - 0.5 * std::log(2.0 * kPi);
}

ScaledTDensity::ScaledTDensity(double dof, double scale)
    : dof_(dof),
      scale_(scale),
      inv_scale_(1.0 / scale),
      inv_dof_(1.0 / dof),
      log_norm_(std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof) -
                0.5 * std::log(dof * kPi) - std::log(scale)),
      half_exponent_(0.5 * (dof + 1.0)) {
    if (!(dof > 0.0)) throw InputError("degrees of freedom must be positive");
    if (!(scale > 0.0)) throw InputError("density scale must be positive");
}

double mean_of(const std::vector<double>& x) {
    double sum = 0.0;
    for (double v : x) sum += v;
    return sum / static_cast<double>(x.size());
}

double variance_of(const std::vector<double>& x) {
    if (x.size() < 2) throw InsufficientDataError("variance needs at least two values");
    double m = mean_of(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
}

JarqueBeraResult jarque_bera(const std::vector<double>& x) {
    if (x.size() < 8) throw InsufficientDataError("too few observations for a normality test");
    double n = static_cast<double>(x.size());
    double m = mean_of(x);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        double d = v - m;
        double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    double skew = m3 / std::pow(m2, 1.5);
    double kurt = m4 / (m2 * m2);
    JarqueBeraResult out;
    out.statistic = n * (skew * skew / 6.0 + (kurt - 3.0) * (kurt - 3.0) / 24.0);
    out.p_value = std::exp(-0.5 * out.statistic);  // chi-squared(2) survival
    return out;
}

std::vector<double> sample_acf(const std::vector<double>& x, int max_lag) {
    int n = static_cast<int>(x.size());
    if (n <= max_lag) throw InsufficientDataError("series shorter than requested lag span");
    double m = mean_of(x);
    double denom = 0.0;
    for (double v : x) denom += (v - m) * (v - m);
    if (denom == 0.0) throw InputError("constant series has undefined autocorrelation");
    std::vector<double> acf(static_cast<size_t>(max_lag) + 1);
    for (int k = 0; k <= max_lag; ++k) {
        double num = 0.0;
        for (int t = k; t < n; ++t) num += (x[(size_t)t] - m) * (x[(size_t)(t - k)] - m);
        acf[(size_t)k] = num / denom;
    }
    return acf;
}

}  // namespace noncausal

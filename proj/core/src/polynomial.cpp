#include "noncausal/polynomial.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "noncausal/errors.hpp"

namespace noncausal {

static std::vector<double> trim_trailing_zeros(const std::vector<double>& coeffs) {
    std::vector<double> c = coeffs;
    while (!c.empty() && c.back() == 0.0) c.pop_back();
    return c;
}

// Reciprocal roots of 1 - sum c_i z^i are the eigenvalues of the companion
// matrix of lambda^k - c_1 lambda^{k-1} - ... - c_k.
static std::vector<std::complex<double>> reciprocal_roots(const std::vector<double>& c) {
    int k = static_cast<int>(c.size());
    std::vector<std::complex<double>> lam;
    if (k == 0) return lam;
    if (k == 1) {
        lam.emplace_back(c[0], 0.0);
        return lam;
    }
    if (k == 2) {
        std::complex<double> half(0.5 * c[0], 0.0);
        std::complex<double> disc = std::sqrt(std::complex<double>(0.25 * c[0] * c[0] + c[1], 0.0));
        lam.push_back(half + disc);
        lam.push_back(half - disc);
        return lam;
    }
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(k, k);
    for (int j = 0; j < k; ++j) companion(0, j) = c[static_cast<size_t>(j)];
    for (int i = 1; i < k; ++i) companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    for (int i = 0; i < k; ++i) lam.push_back(solver.eigenvalues()[i]);
    return lam;
}

std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& coeffs) {
    auto c = trim_trailing_zeros(coeffs);
    std::vector<std::complex<double>> roots;
    for (const auto& lam : reciprocal_roots(c)) {
        roots.push_back(1.0 / lam);  // lambda = 0 cannot occur once trailing zeros are trimmed
    }
    return roots;
}

StationarityResult check_stationarity(const std::vector<double>& coeffs) {
    for (double c : coeffs) {
        if (!std::isfinite(c)) throw InputError("polynomial coefficient is not finite");
    }
    auto c = trim_trailing_zeros(coeffs);
    StationarityResult out;
    for (const auto& lam : reciprocal_roots(c)) {
        double mag = std::abs(lam);
        out.root_moduli.push_back(mag > 0.0 ? 1.0 / mag
                                            : std::numeric_limits<double>::infinity());
    }
    std::sort(out.root_moduli.begin(), out.root_moduli.end());
    for (double m : out.root_moduli) {
        if (!(m > 1.0 + kStationarityMargin)) {
            out.stationary = false;
            break;
        }
    }
    return out;
}

StationarityResult check_stationarity(const LagPolynomial& poly) {
    return check_stationarity(poly.coeffs);
}

std::vector<double> one_sided_inverse(const std::vector<double>& coeffs, int length) {
    if (length < 1) throw InputError("expansion length must be positive");
    std::vector<double> w(static_cast<size_t>(length), 0.0);
    w[0] = 1.0;
    int k = static_cast<int>(coeffs.size());
    for (int i = 1; i < length; ++i) {
        double acc = 0.0;
        int m_max = std::min(i, k);
        for (int m = 1; m <= m_max; ++m) acc += coeffs[(size_t)(m - 1)] * w[(size_t)(i - m)];
        w[(size_t)i] = acc;
    }
    return w;
}

std::vector<double> multiply_one_minus(const std::vector<double>& a, const std::vector<double>& b) {
    // (1 - sum a_i z^i)(1 - sum b_j z^j) = 1 - sum c_k z^k with
    // c_k = a_k + b_k - sum_{i+j=k} a_i b_j.
    if (a.empty()) return b;
    if (b.empty()) return a;
    std::vector<double> c(a.size() + b.size(), 0.0);
    for (size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (size_t j = 0; j < b.size(); ++j) c[j] += b[j];
    for (size_t i = 0; i < a.size(); ++i) {
        for (size_t j = 0; j < b.size(); ++j) {
            c[i + j + 1] -= a[i] * b[j];
        }
    }
    return c;
}

}  // namespace noncausal

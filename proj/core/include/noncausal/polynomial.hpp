#pragma once

#include <complex>
#include <vector>

namespace noncausal {

// Shift operator direction: toward the past (lag) or the future (lead).
enum class ShiftDirection { lag, lead };

// Coefficients c_1..c_k of the filter 1 - c_1 B - ... - c_k B^k.
struct LagPolynomial {
    std::vector<double> coeffs;
    ShiftDirection direction = ShiftDirection::lag;

    int order() const { return static_cast<int>(coeffs.size()); }
};

struct StationarityResult {
    bool stationary = true;
    std::vector<double> root_moduli;  // ascending; one per root of the trimmed polynomial
};

// Roots of 1 - sum c_i z^i. Stationary (invertible toward its own direction)
// when every root modulus exceeds 1 + 1e-8; the margin keeps borderline unit
// roots out regardless of rounding.
StationarityResult check_stationarity(const LagPolynomial& poly);
StationarityResult check_stationarity(const std::vector<double>& coeffs);

constexpr double kStationarityMargin = 1e-8;

// All roots of 1 - sum c_i z^i (trailing zero coefficients trimmed first).
std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& coeffs);

// First `length` weights of 1 / (1 - sum c_i z^i); weights[0] = 1.
std::vector<double> one_sided_inverse(const std::vector<double>& coeffs, int length);

// Coefficient vector of the product (1 - sum a_i z^i)(1 - sum b_j z^j),
// returned in the same one-minus convention.
std::vector<double> multiply_one_minus(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace noncausal

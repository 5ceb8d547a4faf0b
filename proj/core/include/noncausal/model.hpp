#pragma once

#include <string>
#include <variant>
#include <vector>

#include "noncausal/polynomial.hpp"

namespace noncausal {

// Innovation law: scale times a Student's t variable. dof must stay above 2
// so the process has finite variance; the scale is the raw density scale of
// the t distribution, not its standard deviation.
struct NoiseSpec {
    double dof = 4.0;
    double scale = 1.0;
};

// Mixed causal-noncausal autoregression. The lag polynomial acts on past
// values, the lead polynomial on future values; with heavy-tailed noise the
// two directions are separately identifiable from data.
struct MarModel {
    std::vector<double> lag_coeffs;
    std::vector<double> lead_coeffs;
    NoiseSpec noise;

    int r() const { return static_cast<int>(lag_coeffs.size()); }
    int s() const { return static_cast<int>(lead_coeffs.size()); }
    LagPolynomial lag_polynomial() const { return {lag_coeffs, ShiftDirection::lag}; }
    LagPolynomial lead_polynomial() const { return {lead_coeffs, ShiftDirection::lead}; }
};

// Adds exogenous regressors. offsets[k] in {-1, 0, +1} shifts regressor k by
// that many months where it enters the equation.
struct MarxModel {
    MarModel base;
    std::vector<double> beta;
    std::vector<int> offsets;
    std::vector<std::string> regressor_names;  // optional, carried into reports

    int q() const { return static_cast<int>(beta.size()); }
};

// Adds one seasonal factor of order one on each side: (1 - c B^period) on
// the lag side and its mirror on the lead side. A zero coefficient means the
// factor is absent; the period is then ignored.
struct SmarModel {
    MarModel base;
    double seasonal_lag_coeff = 0.0;
    double seasonal_lead_coeff = 0.0;
    int lag_period = 1;
    int lead_period = 1;
};

using Model = std::variant<MarModel, MarxModel, SmarModel>;

const MarModel& base_of(const Model& m);

// Composite one-minus coefficient vectors including seasonal factors; these
// drive filtering, simulation, and residual support.
std::vector<double> composite_lag_coeffs(const Model& m);
std::vector<double> composite_lead_coeffs(const Model& m);

// Observations lost at either end when applying the full operator.
struct EdgeTrims {
    int lead = 0;
    int trail = 0;
};
EdgeTrims residual_trims(const Model& m);

// Throws InputError on any violated invariant (noise law, stationarity of
// every factor, offset values, displacement bounds).
void validate_model(const Model& m);
bool is_stationary(const Model& m);

// Flat key-value text form; numeric fields round-trip exactly.
std::string serialize_model(const Model& m);
Model deserialize_model(const std::string& text);
void save_model(const std::string& path, const Model& m);
Model load_model(const std::string& path);

}  // namespace noncausal

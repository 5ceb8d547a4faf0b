#include "noncausal/model.hpp"

#include <cmath>
#include <sstream>

#include "noncausal/csv_io.hpp"
#include "noncausal/errors.hpp"

namespace noncausal {

const MarModel& base_of(const Model& m) {
    return std::visit([](const auto& v) -> const MarModel& {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, MarModel>) return v;
        else return v.base;
    }, m);
}

// Seasonal factor (1 - c B^d) expressed in the one-minus coefficient layout.
static std::vector<double> seasonal_factor(double coeff, int displacement) {
    std::vector<double> c(static_cast<size_t>(displacement), 0.0);
    c.back() = coeff;
    return c;
}

std::vector<double> composite_lag_coeffs(const Model& m) {
    const MarModel& base = base_of(m);
    if (const auto* smar = std::get_if<SmarModel>(&m); smar && smar->seasonal_lag_coeff != 0.0) {
        return multiply_one_minus(base.lag_coeffs,
                                  seasonal_factor(smar->seasonal_lag_coeff, smar->lag_period));
    }
    return base.lag_coeffs;
}

std::vector<double> composite_lead_coeffs(const Model& m) {
    const MarModel& base = base_of(m);
    if (const auto* smar = std::get_if<SmarModel>(&m); smar && smar->seasonal_lead_coeff != 0.0) {
        return multiply_one_minus(base.lead_coeffs,
                                  seasonal_factor(smar->seasonal_lead_coeff, smar->lead_period));
    }
    return base.lead_coeffs;
}

EdgeTrims residual_trims(const Model& m) {
    EdgeTrims t;
    t.lead = static_cast<int>(composite_lag_coeffs(m).size());
    t.trail = static_cast<int>(composite_lead_coeffs(m).size());
    return t;
}

bool is_stationary(const Model& m) {
    const MarModel& base = base_of(m);
    if (!check_stationarity(base.lag_coeffs).stationary) return false;
    if (!check_stationarity(base.lead_coeffs).stationary) return false;
    if (const auto* smar = std::get_if<SmarModel>(&m)) {
        if (std::abs(smar->seasonal_lag_coeff) >= 1.0 - kStationarityMargin) return false;
        if (std::abs(smar->seasonal_lead_coeff) >= 1.0 - kStationarityMargin) return false;
    }
    return true;
}

void validate_model(const Model& m) {
    const MarModel& base = base_of(m);
    if (!(base.noise.dof > 2.0)) {
        throw InputError("noise degrees of freedom must exceed 2");
    }
    if (!(base.noise.scale > 0.0) || !std::isfinite(base.noise.scale)) {
        throw InputError("noise scale must be positive and finite");
    }
    if (!check_stationarity(base.lag_coeffs).stationary) {
        throw InputError("lag polynomial has a root on or inside the unit circle");
    }
    if (!check_stationarity(base.lead_coeffs).stationary) {
        throw InputError("lead polynomial has a root on or inside the unit circle");
    }
    if (const auto* marx = std::get_if<MarxModel>(&m)) {
        if (marx->beta.size() != marx->offsets.size()) {
            throw InputError("regressor coefficients and offsets differ in length");
        }
        for (int o : marx->offsets) {
            if (o < -1 || o > 1) throw InputError("regressor offsets must be -1, 0, or +1");
        }
        if (!marx->regressor_names.empty() &&
            marx->regressor_names.size() != marx->beta.size()) {
            throw InputError("regressor names and coefficients differ in length");
        }
    }
    if (const auto* smar = std::get_if<SmarModel>(&m)) {
        if (smar->lag_period < 1 || smar->lead_period < 1) throw InputError("seasonal displacements must be >= 1");
        if (std::abs(smar->seasonal_lag_coeff) >= 1.0 - kStationarityMargin) {
            throw InputError("seasonal lag coefficient too large for stationarity");
        }
        if (std::abs(smar->seasonal_lead_coeff) >= 1.0 - kStationarityMargin) {
            throw InputError("seasonal lead coefficient too large for stationarity");
        }
    }
}

static std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += detail::format_double(v[i]);
    }
    return out;
}

static std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(v[i]);
    }
    return out;
}

std::string serialize_model(const Model& m) {
    const MarModel& base = base_of(m);
    const auto* marx = std::get_if<MarxModel>(&m);
    const auto* smar = std::get_if<SmarModel>(&m);
    std::string out;
    out += "r = " + std::to_string(base.r()) + "\n";
    out += "s = " + std::to_string(base.s()) + "\n";
    out += "lag_coeffs = " + join_doubles(base.lag_coeffs) + "\n";
    out += "lead_coeffs = " + join_doubles(base.lead_coeffs) + "\n";
    out += "dof = " + detail::format_double(base.noise.dof) + "\n";
    out += "scale = " + detail::format_double(base.noise.scale) + "\n";
    out += "beta = " + (marx ? join_doubles(marx->beta) : std::string()) + "\n";
    out += "offsets = " + (marx ? join_ints(marx->offsets) : std::string()) + "\n";
    std::string names;
    if (marx) {
        for (size_t i = 0; i < marx->regressor_names.size(); ++i) {
            if (i > 0) names += ',';
            names += marx->regressor_names[i];
        }
    }
    out += "regressor_names = " + names + "\n";
    out += "seasonal_lag = " + detail::format_double(smar ? smar->seasonal_lag_coeff : 0.0) + "\n";
    out += "seasonal_lead = " + detail::format_double(smar ? smar->seasonal_lead_coeff : 0.0) + "\n";
    out += "seasonal_lag_period = " + std::to_string(smar ? smar->lag_period : 1) + "\n";
    out += "seasonal_lead_period = " + std::to_string(smar ? smar->lead_period : 1) + "\n";
    return out;
}

namespace {

struct KeyValues {
    std::vector<std::pair<std::string, std::string>> entries;

    const std::string* find(const std::string& key) const {
        for (const auto& [k, v] : entries) {
            if (k == key) return &v;
        }
        return nullptr;
    }
    const std::string& require(const std::string& key) const {
        const std::string* v = find(key);
        if (!v) throw InputError("model text missing field '" + key + "'");
        return *v;
    }
};

KeyValues parse_key_values(const std::string& text) {
    KeyValues out;
    std::istringstream in(text);
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
        auto strip = [](std::string s) {
            size_t a = s.find_first_not_of(" \t");
            size_t b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        out.entries.emplace_back(strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
    }
    return out;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    for (const auto& tok : split_ws(s)) out.push_back(detail::parse_double(tok, 0));
    return out;
}

int parse_int(const std::string& s) {
    try {
        size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size()) throw InputError("trailing text after integer '" + s + "'");
        return v;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw InputError("expected an integer, got '" + s + "'");
    }
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    for (const auto& tok : split_ws(s)) out.push_back(parse_int(tok));
    return out;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

}  // namespace

Model deserialize_model(const std::string& text) {
    KeyValues kv = parse_key_values(text);
    MarModel base;
    base.lag_coeffs = parse_doubles(kv.require("lag_coeffs"));
    base.lead_coeffs = parse_doubles(kv.require("lead_coeffs"));
    base.noise.dof = detail::parse_double(kv.require("dof"), 0);
    base.noise.scale = detail::parse_double(kv.require("scale"), 0);
    if (parse_int(kv.require("r")) != base.r() || parse_int(kv.require("s")) != base.s()) {
        throw InputError("declared orders disagree with coefficient counts");
    }
    std::vector<double> beta = parse_doubles(kv.require("beta"));
    std::vector<int> offsets = parse_ints(kv.require("offsets"));
    std::vector<std::string> names;
    if (const std::string* raw = kv.find("regressor_names")) names = split_commas(*raw);
    if (!names.empty() && names.size() != beta.size()) {
        throw InputError("regressor name count disagrees with beta count");
    }
    double seasonal_lag = detail::parse_double(kv.require("seasonal_lag"), 0);
    double seasonal_lead = detail::parse_double(kv.require("seasonal_lead"), 0);
    int lag_period = parse_int(kv.require("seasonal_lag_period"));
    int lead_period = parse_int(kv.require("seasonal_lead_period"));

    Model model;
    if (!beta.empty()) {
        if (seasonal_lag != 0.0 || seasonal_lead != 0.0) {
            throw InputError("a model cannot carry both regressors and seasonal factors");
        }
        model = MarxModel{base, std::move(beta), std::move(offsets), std::move(names)};
    } else if (seasonal_lag != 0.0 || seasonal_lead != 0.0) {
        model = SmarModel{base, seasonal_lag, seasonal_lead, lag_period, lead_period};
    } else {
        model = base;
    }
    validate_model(model);
    return model;
}

void save_model(const std::string& path, const Model& m) {
    detail::write_text_file(path, serialize_model(m));
}

Model load_model(const std::string& path) {
    return deserialize_model(detail::read_text_file(path));
}

}  // namespace noncausal

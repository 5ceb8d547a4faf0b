#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "CLI11.hpp"

#include "noncausal/calendar.hpp"
#include "noncausal/credibility.hpp"
#include "noncausal/csv_io.hpp"
#include "noncausal/density_forecast.hpp"
#include "noncausal/errors.hpp"
#include "noncausal/estimation.hpp"
#include "noncausal/model.hpp"
#include "noncausal/process.hpp"
#include "noncausal/timeseries.hpp"

using namespace noncausal;

namespace {

std::string fd(double x) { return detail::format_double(x); }

// ----------------------------------------------------------- run recording

std::uint64_t fnv1a64_bytes(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= static_cast<std::uint64_t>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

// Collects the resolved configuration and every file a command writes, then
// emits run_manifest.txt: key=value lines the --config option reads back,
// plus one content-hash comment per output file. No timestamps, so reruns
// with identical inputs produce identical manifests.
class RunWriter {
public:
    RunWriter(std::string command, const std::string& out_dir)
        : command_(std::move(command)), dir_(out_dir) {
        std::filesystem::create_directories(dir_);
    }

    void echo(const std::string& key, const std::string& value) {
        if (!value.empty()) config_.emplace_back(key, value);
    }
    void echo(const std::string& key, int value) { config_.emplace_back(key, std::to_string(value)); }
    void echo(const std::string& key, long value) { config_.emplace_back(key, std::to_string(value)); }
    void echo(const std::string& key, std::uint64_t value) {
        config_.emplace_back(key, std::to_string(value));
    }
    void echo_flag(const std::string& key, bool value) {
        if (value) config_.emplace_back(key, "true");
    }

    // Registers name as an output file and returns its full path.
    std::string path_of(const std::string& name) {
        files_.push_back(name);
        return (dir_ / name).string();
    }

    void write(const std::string& name, const std::string& content) {
        detail::write_text_file(path_of(name), content);
    }

    void finish() {
        std::ostringstream out;
        out << "# command " << command_ << "\n";
        for (const auto& [k, v] : config_) out << k << "=" << v << "\n";
        for (const auto& name : files_) {
            const std::string bytes = detail::read_text_file((dir_ / name).string());
            out << "# hash " << name << " " << hex64(fnv1a64_bytes(bytes)) << "\n";
        }
        detail::write_text_file((dir_ / "run_manifest.txt").string(), out.str());
    }

private:
    std::string command_;
    std::filesystem::path dir_;
    std::vector<std::pair<std::string, std::string>> config_;
    std::vector<std::string> files_;
};

// ------------------------------------------------------------ small helpers

// Loads one numeric column; when no name is given the file must hold exactly
// one so the choice is unambiguous. resolved reports the column actually used.
TimeSeries load_column_series(const std::string& path, const std::string& column,
                              std::string* resolved = nullptr) {
    if (!column.empty()) {
        if (resolved != nullptr) *resolved = column;
        return load_series(path, column);
    }
    detail::DatedColumns table = detail::read_dated_csv(path);
    if (table.names.size() != 1) {
        throw InputError(path + " holds " + std::to_string(table.names.size()) +
                         " value columns; pick one with --column");
    }
    if (resolved != nullptr) *resolved = table.names[0];
    return TimeSeries(table.start, std::move(table.columns[0]));
}

BoundsSeries shift_bounds(const BoundsSeries& b, double delta) {
    std::vector<double> lo = b.lower_values();
    std::vector<double> hi = b.upper_values();
    for (double& v : lo) v += delta;
    for (double& v : hi) v += delta;
    return BoundsSeries(b.start(), std::move(lo), std::move(hi));
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
    std::vector<int> out;
    for (const std::string& tok : split_list(text)) {
        try {
            size_t used = 0;
            int v = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            throw InputError(what + " list holds a non-integer entry '" + tok + "'");
        }
    }
    if (out.empty()) throw InputError(what + " list is empty");
    return out;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    for (const std::string& tok : split_list(text)) {
        try {
            size_t used = 0;
            double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            throw InputError(what + " list holds a non-numeric entry '" + tok + "'");
        }
    }
    if (out.empty()) throw InputError(what + " list is empty");
    return out;
}

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ",";
        out += fd(v[i]);
    }
    return out;
}

std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ",";
        out += std::to_string(v[i]);
    }
    return out;
}

// Reads a flat key=value config file into command line tokens of the form
// --key=value. Lines starting with # or ; are comments, so a run manifest
// feeds straight back in. Keys the user already passed explicitly are
// dropped by the caller, which makes the file a pure source of defaults.
std::vector<std::string> load_config_args(const std::string& path) {
    const std::string text = detail::read_text_file(path);
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() &&
               (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
            line.pop_back();
        }
        const size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        if (line[first] == '#' || line[first] == ';') continue;
        const size_t eq = line.find('=', first);
        if (eq == std::string::npos) {
            throw ParseError("config line is not key=value", line_no);
        }
        std::string key = line.substr(first, eq - first);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
        if (key.empty()) throw ParseError("config line has an empty key", line_no);
        std::string value = line.substr(eq + 1);
        const size_t vfirst = value.find_first_not_of(" \t");
        value = vfirst == std::string::npos ? std::string() : value.substr(vfirst);
        out.push_back("--" + key + "=" + value);
    }
    return out;
}

// Splits --config out of the raw arguments and appends the file's entries
// for every option the user did not set explicitly.
std::vector<std::string> merge_config(int argc, char** argv) {
    std::vector<std::string> args;
    std::string config_path;
    for (int i = 1; i < argc; ++i) {
        const std::string tok = argv[i];
        if (tok == "--config") {
            if (i + 1 >= argc) throw InputError("--config needs a file path");
            config_path = argv[++i];
        } else if (tok.rfind("--config=", 0) == 0) {
            config_path = tok.substr(9);
        } else {
            args.push_back(tok);
        }
    }
    if (config_path.empty()) return args;

    std::set<std::string> given;
    for (const std::string& tok : args) {
        if (tok.rfind("--", 0) == 0 && tok.size() > 2) {
            const size_t eq = tok.find('=');
            given.insert(tok.substr(2, eq == std::string::npos ? std::string::npos : eq - 2));
        }
    }
    for (std::string& entry : load_config_args(config_path)) {
        const std::string key = entry.substr(2, entry.find('=') - 2);
        if (given.count(key) == 0) args.push_back(std::move(entry));
    }
    return args;
}

const char* category_word(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::input: return "input";
        case ErrorCategory::convergence: return "convergence";
        case ErrorCategory::degeneracy: return "degeneracy";
        case ErrorCategory::evaluation: return "evaluation";
    }
    return "error";
}

std::string describe_model(const Model& m) {
    const MarModel& base = base_of(m);
    std::string out = "lag=[" + join_doubles(base.lag_coeffs) + "] lead=[" +
                      join_doubles(base.lead_coeffs) + "]";
    if (const auto* marx = std::get_if<MarxModel>(&m)) {
        out += " beta=[" + join_doubles(marx->beta) + "] offsets=[" + join_ints(marx->offsets) + "]";
    } else if (const auto* smar = std::get_if<SmarModel>(&m)) {
        if (smar->seasonal_lag_coeff != 0.0) {
            out += " seasonal_lag=" + fd(smar->seasonal_lag_coeff) + " at " +
                   std::to_string(smar->lag_period);
        }
        if (smar->seasonal_lead_coeff != 0.0) {
            out += " seasonal_lead=" + fd(smar->seasonal_lead_coeff) + " at " +
                   std::to_string(smar->lead_period);
        }
    }
    out += " dof=" + fd(base.noise.dof) + " scale=" + fd(base.noise.scale);
    return out;
}

// Parameter labels and values in the order the standard errors are reported:
// lag, lead, regressors, seasonal lag, seasonal lead, dof, scale.
std::vector<std::pair<std::string, double>> parameter_list(const Model& m) {
    std::vector<std::pair<std::string, double>> out;
    const MarModel& base = base_of(m);
    for (size_t i = 0; i < base.lag_coeffs.size(); ++i) {
        out.emplace_back("lag[" + std::to_string(i + 1) + "]", base.lag_coeffs[i]);
    }
    for (size_t i = 0; i < base.lead_coeffs.size(); ++i) {
        out.emplace_back("lead[" + std::to_string(i + 1) + "]", base.lead_coeffs[i]);
    }
    if (const auto* marx = std::get_if<MarxModel>(&m)) {
        for (size_t i = 0; i < marx->beta.size(); ++i) {
            std::string label = marx->regressor_names.size() == marx->beta.size()
                                    ? marx->regressor_names[i]
                                    : "x" + std::to_string(i + 1);
            label += "(offset " + std::to_string(marx->offsets[i]) + ")";
            out.emplace_back(std::move(label), marx->beta[i]);
        }
    } else if (const auto* smar = std::get_if<SmarModel>(&m)) {
        if (smar->seasonal_lag_coeff != 0.0) {
            out.emplace_back("seasonal_lag(period " + std::to_string(smar->lag_period) + ")",
                             smar->seasonal_lag_coeff);
        }
        if (smar->seasonal_lead_coeff != 0.0) {
            out.emplace_back("seasonal_lead(period " + std::to_string(smar->lead_period) + ")",
                             smar->seasonal_lead_coeff);
        }
    }
    out.emplace_back("dof", base.noise.dof);
    out.emplace_back("scale", base.noise.scale);
    return out;
}

const char* kForecastHeader =
    "origin_date,horizon,method,p_in_bounds,p_below,p_above,point_mean,point_median,seed,"
    "n_draws";

std::string forecast_row(const ProbabilityForecast& pf) {
    std::ostringstream out;
    out << to_string(pf.origin) << "," << pf.horizon << "," << method_name(pf.method) << ","
        << fd(pf.p_in_bounds) << "," << fd(pf.p_below_lower) << "," << fd(pf.p_above_upper) << ","
        << fd(pf.point_mean) << "," << fd(pf.point_median) << "," << pf.seed << "," << pf.n_sims;
    return out.str();
}

// -------------------------------------------------------------- transform

struct TransformArgs {
    std::string input;
    std::string column;
    std::string mode = "yoy-log";
    std::string out_dir = ".";
};

void run_transform(const TransformArgs& a) {
    RunWriter w("transform", a.out_dir);
    std::string resolved;
    TimeSeries levels = load_column_series(a.input, a.column, &resolved);
    TimeSeries result = a.mode == "yoy-log" ? yoy_log_inflation(levels) : pct_change_yoy(levels);
    save_series(w.path_of("transformed.csv"), result, resolved);

    w.echo("input", a.input);
    w.echo("column", resolved);
    w.echo("mode", a.mode);
    w.echo("out", a.out_dir);
    w.finish();
}

// -------------------------------------------------------------------- fit

struct FitArgs {
    std::string input;
    std::string column;
    std::string out_dir = ".";
    int r = -1;
    int s = -1;
    int p_max = 15;
    int n_starts = 8;
    std::string smar;  // "D1" or "D1,D2"
    std::string exog;
    bool demean_series = false;
    int acf_lags = 24;
};

void append_fit_block(std::ostringstream& rep, const FitResult& fr) {
    auto params = parameter_list(fr.model);
    const bool have_se = fr.std_errors && fr.std_errors->size() == params.size();
    rep << "coefficients:\n";
    for (size_t i = 0; i < params.size(); ++i) {
        rep << "  " << params[i].first << " = " << fd(params[i].second);
        if (have_se) rep << " (se " << fd((*fr.std_errors)[i]) << ")";
        rep << "\n";
    }
    if (fr.std_errors && !have_se) {
        rep << "standard_errors:";
        for (double se : *fr.std_errors) rep << " " << fd(se);
        rep << "\n";
    }
    if (!fr.std_errors) rep << "standard_errors: unavailable (information matrix not positive definite)\n";
    rep << "loglik = " << fd(fr.loglik) << "\n";
    rep << "bic = " << fd(fr.bic) << "\n";
    rep << "n_effective = " << fr.n_effective << "\n";
    rep << "converged = " << (fr.converged ? "true" : "false") << "\n";
}

void run_fit(const FitArgs& a) {
    if ((a.r < 0) != (a.s < 0)) {
        throw InputError("pass both --r and --s to fix the orders, or neither to select them");
    }
    if (!a.smar.empty() && !a.exog.empty()) {
        throw InputError("--smar and --exog extend the model in incompatible ways; pick one");
    }

    RunWriter w("fit", a.out_dir);
    std::string resolved;
    TimeSeries raw = load_column_series(a.input, a.column, &resolved);
    double mean = 0.0;
    TimeSeries y = raw;
    if (a.demean_series) {
        DemeanResult dm = demean(raw);
        y = dm.series;
        mean = dm.mean;
    }
    std::optional<ExogenousPanel> panel;
    if (!a.exog.empty()) panel = load_panel(a.exog);

    std::ostringstream rep;
    rep << "series: " << a.input << " column " << resolved << ", " << y.size()
        << " observations " << to_string(y.start()) << ".." << to_string(y.end()) << "\n";
    if (a.demean_series) rep << "demeaned: mean = " << fd(mean) << "\n";

    FitResult fr;
    if (a.r >= 0) {
        fr = fit_mar_amle(y, a.r, a.s, a.n_starts);
        rep << "orders: fixed at r=" << a.r << " s=" << a.s << "\n";
    } else {
        PseudoCausalFit pc = fit_pseudo_causal(y, a.p_max);
        rep << "pseudo_causal_order: " << pc.p << " (bic by order:";
        for (size_t i = 0; i < pc.bic_by_order.size(); ++i) {
            rep << " " << i << "=" << fd(pc.bic_by_order[i]);
        }
        rep << ")\n";
        MarSelection sel = select_mar(y, pc.p, a.n_starts);
        fr = sel.best;
        rep << "order_candidates:\n";
        for (const auto& c : sel.candidates) {
            rep << "  r=" << c.r << " s=" << c.s << " loglik=" << fd(c.loglik)
                << " bic=" << fd(c.bic) << " converged=" << (c.converged ? "true" : "false")
                << "\n";
        }
        const MarModel& bm = base_of(fr.model);
        rep << "selected_orders: r=" << bm.r() << " s=" << bm.s() << "\n";
    }

    if (!a.smar.empty()) {
        std::vector<int> periods = parse_int_list(a.smar, "--smar");
        if (periods.size() > 2) throw InputError("--smar accepts one or two displacements");
        std::optional<int> d2;
        if (periods.size() == 2) d2 = periods[1];
        SmarSelection sel = fit_smar(y, fr, periods[0], d2, a.n_starts);
        fr = sel.best;
        rep << "seasonal_candidates:\n";
        for (const auto& c : sel.candidates) {
            rep << "  lag_period=" << c.lag_period << " lead_period=" << c.lead_period
                << " loglik=" << fd(c.loglik) << " bic=" << fd(c.bic)
                << " converged=" << (c.converged ? "true" : "false") << "\n";
        }
    }
    if (panel) {
        const MarModel& bm = base_of(fr.model);
        MarxSelection sel = select_marx_offsets(y, *panel, bm.r(), bm.s(), a.n_starts);
        fr = sel.best;
        rep << "offset_candidates:\n";
        for (const auto& c : sel.candidates) {
            rep << "  offsets=[" << join_ints(c.offsets) << "] loglik=" << fd(c.loglik)
                << " bic=" << fd(c.bic) << " converged=" << (c.converged ? "true" : "false")
                << "\n";
        }
    }

    if (!fr.converged) {
        throw ConvergenceError("estimation did not converge; best found: " +
                               describe_model(fr.model));
    }
    append_fit_block(rep, fr);

    // Residual diagnostics on whatever window the final model supports.
    TimeSeries res = residuals(y, fr.model, panel);
    const int lag_cap = std::min(a.acf_lags, res.size() - 6);
    if (lag_cap >= 1) {
        DiagnosticsReport diag = diagnostics(res, lag_cap);
        rep << "jarque_bera = " << fd(diag.jarque_bera_statistic)
            << " (p = " << fd(diag.jarque_bera_p_value) << ", n = " << diag.n << ")\n";
        rep << "significant_acf_displacements:";
        for (int d : diag.significant_displacements) rep << " " << d;
        rep << "\n";
        std::ostringstream csv;
        csv << "displacement,acf,significant\n";
        for (size_t i = 0; i < diag.acf.size(); ++i) {
            const bool sig = std::find(diag.significant_displacements.begin(),
                                       diag.significant_displacements.end(),
                                       static_cast<int>(i)) != diag.significant_displacements.end();
            csv << i << "," << fd(diag.acf[i]) << "," << (sig ? 1 : 0) << "\n";
        }
        w.write("diagnostics.csv", csv.str());
    } else {
        rep << "diagnostics: skipped, residual sample too short\n";
    }

    save_model(w.path_of("model.txt"), fr.model);
    w.write("fit_report.txt", rep.str());

    w.echo("input", a.input);
    w.echo("column", resolved);
    if (a.r >= 0) {
        w.echo("r", a.r);
        w.echo("s", a.s);
    }
    w.echo("p-max", a.p_max);
    w.echo("n-starts", a.n_starts);
    w.echo("smar", a.smar);
    w.echo("exog", a.exog);
    w.echo_flag("demean", a.demean_series);
    w.echo("acf-lags", a.acf_lags);
    w.echo("out", a.out_dir);
    w.finish();
}

// --------------------------------------------------------------- forecast

struct ForecastArgs {
    std::string model_path;
    std::string input;
    std::string column;
    std::string bounds_path;
    std::string out_dir = ".";
    int h = 1;
    std::string method = "lls";
    std::uint64_t seed = 1;
    long n_sims = 100000;
    int truncation = 50;
    long k_sims = 10000;
    long s_resample = 1000;
    int grid_points = 501;
    std::string origin;
    std::string exog;
    std::string exog_future;
    bool demean_series = false;
    bool paper_scale = false;
    bool save_paths = false;
};

std::string paths_csv(const ForecastPaths& paths) {
    std::ostringstream out;
    out << "path,step,date,value\n";
    for (size_t i = 0; i < paths.paths.size(); ++i) {
        for (size_t k = 0; k < paths.paths[i].size(); ++k) {
            out << i << "," << (k + 1) << ","
                << to_string(add_months(paths.origin, static_cast<int>(k) + 1)) << ","
                << fd(paths.paths[i][k]) << "\n";
        }
    }
    return out.str();
}

void run_forecast(const ForecastArgs& a) {
    if (a.method != "sir" && (!a.exog.empty() || !a.exog_future.empty())) {
        throw InputError("regressor panels apply to --method sir only");
    }
    if (!a.exog.empty() != !a.exog_future.empty()) {
        throw InputError("regressor forecasting needs both --exog and --exog-future");
    }

    RunWriter w("forecast", a.out_dir);
    Model model = load_model(a.model_path);
    std::string resolved;
    TimeSeries series = load_column_series(a.input, a.column, &resolved);
    if (!a.origin.empty()) series = series.up_to(parse_month(a.origin));
    BoundsSeries bounds = load_bounds(a.bounds_path);
    if (a.demean_series) {
        DemeanResult dm = demean(series);
        series = dm.series;
        bounds = shift_bounds(bounds, -dm.mean);
    }

    FitResult fr;
    fr.model = model;
    fr.converged = true;

    ProbabilityForecast pf;
    if (a.method == "lls") {
        if (const auto* marx = std::get_if<MarxModel>(&model); marx != nullptr && marx->q() > 0) {
            throw InputError(
                "the simulation estimator does not handle regressor models; use --method sir");
        }
        pf = lls_probability(fr, series, bounds, a.h, LlsSettings{a.n_sims, a.truncation, a.seed});
    } else if (a.method == "gj") {
        if (a.h != 1) {
            throw InputError(
                "the sample-based density estimator supports horizon 1 only; use lls or sir "
                "for longer horizons");
        }
        std::vector<double> grid = gj_default_grid(fr, series, a.grid_points);
        DensityEstimate dens = gj_density_h1(fr, series, grid);
        if (dens.grid_warning) {
            std::cerr << "warning: density grid captured a raw integral of "
                      << fd(dens.raw_integral) << "; results may miss mass\n";
        }
        pf = density_probability(dens, bounds);
        std::ostringstream csv;
        csv << "grid_value,density\n";
        for (size_t i = 0; i < dens.grid.size(); ++i) {
            csv << fd(dens.grid[i]) << "," << fd(dens.density[i]) << "\n";
        }
        w.write("density.csv", csv.str());
    } else {
        SirSettings st{a.k_sims, a.s_resample, a.seed};
        SirForecast sf = a.exog_future.empty()
                             ? sir_forecast(fr, series, a.h, st)
                             : marx_sir_forecast(fr, series, load_panel(a.exog),
                                                 load_panel(a.exog_future), a.h, st);
        pf = probability_in_bounds(sf.weighted, bounds, ForecastMethod::sir);
        pf.seed = a.seed;
        pf.n_resample = static_cast<long>(sf.resampled.paths.size());
        if (a.save_paths) w.write("paths.csv", paths_csv(sf.resampled));
    }

    w.write("forecast.csv", std::string(kForecastHeader) + "\n" + forecast_row(pf) + "\n");

    w.echo("model", a.model_path);
    w.echo("input", a.input);
    w.echo("column", resolved);
    w.echo("bounds", a.bounds_path);
    w.echo("horizon", a.h);
    w.echo("method", a.method);
    w.echo("seed", a.seed);
    w.echo("n-sims", a.n_sims);
    w.echo("truncation", a.truncation);
    w.echo("k-sims", a.k_sims);
    w.echo("s-resample", a.s_resample);
    w.echo("grid-points", a.grid_points);
    w.echo("origin", a.origin);
    w.echo("exog", a.exog);
    w.echo("exog-future", a.exog_future);
    w.echo_flag("demean", a.demean_series);
    w.echo_flag("paper-scale", a.paper_scale);
    w.echo_flag("save-paths", a.save_paths);
    w.echo("out", a.out_dir);
    w.finish();
}

// --------------------------------------------------------------- backtest

struct BacktestArgs {
    std::string input;
    std::string column;
    std::string bounds_path;
    std::string out_dir = ".";
    std::string horizons = "1";
    std::string methods = "lls,sir";
    int initial_window = 100;
    int r = -1;
    int s = -1;
    int p_max = 15;
    int n_starts = 8;
    std::uint64_t seed = 1;
    long n_sims = 100000;
    int truncation = 50;
    long k_sims = 10000;
    long s_resample = 1000;
    bool demean_series = false;
    bool paper_scale = false;
};

void run_backtest(const BacktestArgs& a) {
    if ((a.r < 0) != (a.s < 0)) {
        throw InputError("pass both --r and --s to fix the orders, or neither to select them");
    }
    std::vector<int> horizons = parse_int_list(a.horizons, "--horizons");
    for (int h : horizons) {
        if (h < 1) throw InputError("horizons must be at least 1");
    }
    std::vector<std::string> methods = split_list(a.methods);
    if (methods.empty()) throw InputError("--methods list is empty");
    for (const std::string& m : methods) {
        if (m != "lls" && m != "sir") {
            throw InputError("backtest methods are lls and sir; got '" + m + "'");
        }
    }
    const int h_max = *std::max_element(horizons.begin(), horizons.end());

    RunWriter w("backtest", a.out_dir);
    std::string resolved;
    TimeSeries series = load_column_series(a.input, a.column, &resolved);
    BoundsSeries bounds = load_bounds(a.bounds_path);
    if (series.size() < a.initial_window + h_max) {
        throw InsufficientDataError("series holds " + std::to_string(series.size()) +
                                    " observations; the initial window plus the longest "
                                    "horizon needs " +
                                    std::to_string(a.initial_window + h_max));
    }

    struct IndexAccumulator {
        std::vector<MonthDate> dates;
        std::vector<double> values;
        int n_failed = 0;
    };
    std::map<std::pair<std::string, int>, IndexAccumulator> accumulators;
    for (const std::string& m : methods) {
        for (int h : horizons) accumulators[{m, h}];
    }

    std::ostringstream csv;
    csv << kForecastHeader << ",status\n";
    for (int n = a.initial_window; n + h_max <= series.size(); ++n) {
        TimeSeries history = series.first_n(n);
        BoundsSeries b = bounds;
        if (a.demean_series) {
            DemeanResult dm = demean(history);
            history = dm.series;
            b = shift_bounds(bounds, -dm.mean);
        }
        const std::uint64_t seed_n = a.seed + static_cast<std::uint64_t>(n - a.initial_window);

        FitResult fr;
        std::string fit_status;
        try {
            if (a.r >= 0) {
                fr = fit_mar_amle(history, a.r, a.s, a.n_starts);
            } else {
                PseudoCausalFit pc = fit_pseudo_causal(history, a.p_max);
                fr = select_mar(history, pc.p, a.n_starts).best;
            }
            if (!fr.converged) {
                throw ConvergenceError("window fit did not converge; best found: " +
                                       describe_model(fr.model));
            }
        } catch (const Error& e) {
            fit_status = category_word(e.category());
            std::cerr << "origin " << to_string(history.end()) << ": " << e.what() << "\n";
        }

        for (const std::string& m : methods) {
            for (int h : horizons) {
                IndexAccumulator& acc = accumulators[{m, h}];
                const std::string method_label = m == "lls" ? "LLS" : "SIR";
                if (!fit_status.empty()) {
                    csv << to_string(history.end()) << "," << h << "," << method_label
                        << ",,,,,," << seed_n << ",0," << fit_status << "\n";
                    ++acc.n_failed;
                    continue;
                }
                try {
                    ProbabilityForecast pf;
                    if (m == "lls") {
                        pf = lls_probability(fr, history, b, h,
                                             LlsSettings{a.n_sims, a.truncation, seed_n});
                    } else {
                        SirForecast sf = sir_forecast(fr, history, h,
                                                      SirSettings{a.k_sims, a.s_resample, seed_n});
                        pf = probability_in_bounds(sf.weighted, b, ForecastMethod::sir);
                        pf.seed = seed_n;
                    }
                    csv << forecast_row(pf) << ",ok\n";
                    acc.dates.push_back(add_months(history.end(), h));
                    acc.values.push_back(pf.p_in_bounds);
                } catch (const Error& e) {
                    csv << to_string(history.end()) << "," << h << "," << method_label
                        << ",,,,,," << seed_n << ",0," << category_word(e.category()) << "\n";
                    ++acc.n_failed;
                    std::cerr << "origin " << to_string(history.end()) << " h=" << h << " " << m
                              << ": " << e.what() << "\n";
                }
            }
        }
    }
    w.write("backtest.csv", csv.str());

    for (const auto& [key, acc] : accumulators) {
        CredibilityIndex index;
        index.name = key.first + "_h" + std::to_string(key.second);
        index.dates = acc.dates;
        index.values = acc.values;
        index.horizon = key.second;
        index.n_failed = acc.n_failed;
        save_index(w.path_of("index_" + index.name + ".csv"), index);
    }

    w.echo("input", a.input);
    w.echo("column", resolved);
    w.echo("bounds", a.bounds_path);
    w.echo("horizons", a.horizons);
    w.echo("methods", a.methods);
    w.echo("initial-window", a.initial_window);
    if (a.r >= 0) {
        w.echo("r", a.r);
        w.echo("s", a.s);
    }
    w.echo("p-max", a.p_max);
    w.echo("n-starts", a.n_starts);
    w.echo("seed", a.seed);
    w.echo("n-sims", a.n_sims);
    w.echo("truncation", a.truncation);
    w.echo("k-sims", a.k_sims);
    w.echo("s-resample", a.s_resample);
    w.echo_flag("demean", a.demean_series);
    w.echo_flag("paper-scale", a.paper_scale);
    w.echo("out", a.out_dir);
    w.finish();
}

// ------------------------------------------------------------- credibility

struct CredibilityArgs {
    std::vector<std::string> index_paths;
    std::string outcomes_path;
    std::string realized_path;
    std::string bounds_path;
    std::string column;
    std::string thresholds;
    std::string out_dir = ".";
};

void run_credibility(const CredibilityArgs& a) {
    const bool have_outcomes = !a.outcomes_path.empty();
    const bool have_realized = !a.realized_path.empty() && !a.bounds_path.empty();
    if (have_outcomes == have_realized) {
        throw InputError("provide either --outcomes, or --realized with --bounds");
    }

    RunWriter w("credibility", a.out_dir);
    std::vector<CredibilityIndex> indices;
    for (const std::string& path : a.index_paths) {
        CredibilityIndex idx = load_index(path);
        for (const CredibilityIndex& seen : indices) {
            if (seen.name == idx.name) {
                throw InputError("two index files share the name '" + idx.name +
                                 "'; rename one");
            }
        }
        indices.push_back(std::move(idx));
    }

    OutcomeSeries outcomes;
    if (have_outcomes) {
        outcomes = load_outcomes(a.outcomes_path);
    } else {
        TimeSeries realized = load_column_series(a.realized_path, a.column);
        outcomes = outcomes_from_realized(realized, load_bounds(a.bounds_path));
    }

    std::vector<double> thresholds;
    if (!a.thresholds.empty()) thresholds = parse_double_list(a.thresholds, "--thresholds");

    std::vector<RocCurve> curves;
    curves.reserve(indices.size());
    for (const CredibilityIndex& idx : indices) curves.push_back(roc_curve(idx, outcomes, thresholds));
    std::stable_sort(curves.begin(), curves.end(),
                     [](const RocCurve& x, const RocCurve& y) { return x.auc > y.auc; });

    for (const RocCurve& c : curves) {
        std::ostringstream csv;
        csv << "threshold,fpr,tpr\n";
        for (const RocPoint& p : c.points) {
            csv << fd(p.threshold) << "," << fd(p.fpr) << "," << fd(p.tpr) << "\n";
        }
        w.write("roc_" + c.index_name + ".csv", csv.str());
    }
    std::ostringstream summary;
    summary << "index_name,auc,n_obs,n_failed\n";
    for (const RocCurve& c : curves) {
        summary << c.index_name << "," << fd(c.auc) << "," << c.n_obs << "," << c.n_failed
                << "\n";
    }
    w.write("roc_summary.csv", summary.str());

    for (const std::string& path : a.index_paths) w.echo("index", path);
    w.echo("outcomes", a.outcomes_path);
    w.echo("realized", a.realized_path);
    w.echo("bounds", a.bounds_path);
    w.echo("column", a.column);
    w.echo("thresholds", a.thresholds);
    w.echo("out", a.out_dir);
    w.finish();
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string model_path;
    int n = 0;
    std::uint64_t seed = 1;
    int burn = -1;
    std::string origin = "2000-01";
    std::string exog;
    std::string out_dir = ".";
};

void run_simulate(const SimulateArgs& a) {
    RunWriter w("simulate", a.out_dir);
    Model model = load_model(a.model_path);
    std::optional<ExogenousPanel> panel;
    if (!a.exog.empty()) panel = load_panel(a.exog);
    std::optional<int> burn;
    if (a.burn >= 0) burn = a.burn;

    SimulationResult sim = simulate(model, a.n, a.seed, panel, burn, parse_month(a.origin));
    save_series(w.path_of("series.csv"), sim.series, "value");
    save_series(w.path_of("innovations.csv"), sim.innovations, "innovation");

    w.echo("model", a.model_path);
    w.echo("n", a.n);
    w.echo("seed", a.seed);
    if (a.burn >= 0) w.echo("burn", a.burn);
    w.echo("origin", a.origin);
    w.echo("exog", a.exog);
    w.echo("out", a.out_dir);
    w.finish();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mixed causal-noncausal autoregression toolkit: estimation, density "
                 "forecasts, probability-in-bounds backtests, and ROC ranking of "
                 "credibility indices"};
    app.require_subcommand(1);

    TransformArgs transform_args;
    auto* transform = app.add_subcommand(
        "transform", "Turn a monthly level series into year-over-year growth");
    transform->add_option("--config", "Key-value file read as defaults; explicit flags win");
    transform->add_option("--input", transform_args.input, "Level series CSV")->required();
    transform->add_option("--column", transform_args.column,
                          "Value column (defaults to the only one)");
    transform->add_option("--mode", transform_args.mode, "yoy-log or yoy-pct")
        ->check(CLI::IsMember({"yoy-log", "yoy-pct"}));
    transform->add_option("--out", transform_args.out_dir, "Output directory");
    transform->callback([&transform_args] { run_transform(transform_args); });

    FitArgs fit_args;
    auto* fit = app.add_subcommand("fit", "Estimate a two-sided autoregression");
    fit->add_option("--config", "Key-value file read as defaults; explicit flags win");
    fit->add_option("--input", fit_args.input, "Series CSV")->required();
    fit->add_option("--column", fit_args.column, "Value column (defaults to the only one)");
    fit->add_option("--r", fit_args.r, "Lag order (with --s, skips order selection)");
    fit->add_option("--s", fit_args.s, "Lead order (with --r, skips order selection)");
    fit->add_option("--p-max", fit_args.p_max, "Largest total order scanned");
    fit->add_option("--n-starts", fit_args.n_starts, "Optimizer start points");
    fit->add_option("--smar", fit_args.smar, "Seasonal displacement(s), e.g. 12 or 6,12");
    fit->add_option("--exog", fit_args.exog, "Regressor panel CSV (offset selection)");
    fit->add_flag("--demean", fit_args.demean_series, "Subtract the sample mean before fitting");
    fit->add_option("--acf-lags", fit_args.acf_lags, "Residual autocorrelation displacements");
    fit->add_option("--out", fit_args.out_dir, "Output directory");
    fit->callback([&fit_args] { run_fit(fit_args); });

    ForecastArgs fc_args;
    auto* forecast = app.add_subcommand(
        "forecast", "Probability that the next values stay inside announced bounds");
    forecast->add_option("--config", "Key-value file read as defaults; explicit flags win");
    forecast->add_option("--model", fc_args.model_path, "Model file from fit")->required();
    forecast->add_option("--input", fc_args.input, "Series CSV")->required();
    forecast->add_option("--column", fc_args.column, "Value column (defaults to the only one)");
    forecast->add_option("--bounds", fc_args.bounds_path, "Bounds CSV (date,lower,upper)")
        ->required();
    forecast->add_option("--horizon", fc_args.h, "Forecast horizon in months")
        ->check(CLI::PositiveNumber);
    forecast->add_option("--method", fc_args.method, "lls, gj, or sir")
        ->check(CLI::IsMember({"lls", "gj", "sir"}));
    forecast->add_option("--seed", fc_args.seed, "Random seed")->required();
    auto* opt_n = forecast->add_option("--n-sims", fc_args.n_sims, "Simulation draws (lls)");
    forecast->add_option("--truncation", fc_args.truncation, "Future-error horizon (lls)");
    auto* opt_k = forecast->add_option("--k-sims", fc_args.k_sims, "Proposal paths (sir)");
    auto* opt_s =
        forecast->add_option("--s-resample", fc_args.s_resample, "Resampled paths (sir)");
    auto* opt_g = forecast->add_option("--grid-points", fc_args.grid_points, "Grid size (gj)");
    forecast->add_option("--origin", fc_args.origin,
                         "Forecast origin YYYY-MM (defaults to the series end)");
    forecast->add_option("--exog", fc_args.exog, "Regressor panel CSV (sir)");
    forecast->add_option("--exog-future", fc_args.exog_future,
                         "Regressor values for the forecast months (sir)");
    forecast->add_flag("--demean", fc_args.demean_series,
                       "Subtract the sample mean; bounds shift with it");
    forecast->add_flag("--paper-scale", fc_args.paper_scale,
                       "Raise simulation counts to publication scale");
    forecast->add_flag("--save-paths", fc_args.save_paths, "Write resampled paths (sir)");
    forecast->add_option("--out", fc_args.out_dir, "Output directory");
    forecast->callback([&fc_args, opt_n, opt_k, opt_s, opt_g] {
        if (fc_args.paper_scale) {
            if (opt_n->count() == 0) fc_args.n_sims = 1000000;
            if (opt_k->count() == 0) fc_args.k_sims = 100000;
            if (opt_s->count() == 0) fc_args.s_resample = 10000;
            if (opt_g->count() == 0) fc_args.grid_points = 2001;
        }
        run_forecast(fc_args);
    });

    BacktestArgs bt_args;
    auto* backtest = app.add_subcommand(
        "backtest", "Expanding-window refits with one probability forecast per origin");
    backtest->add_option("--config", "Key-value file read as defaults; explicit flags win");
    backtest->add_option("--input", bt_args.input, "Series CSV")->required();
    backtest->add_option("--column", bt_args.column, "Value column (defaults to the only one)");
    backtest->add_option("--bounds", bt_args.bounds_path, "Bounds CSV (date,lower,upper)")
        ->required();
    backtest->add_option("--horizons", bt_args.horizons, "Horizon list, e.g. 1,6,12");
    backtest->add_option("--methods", bt_args.methods, "Comma list from {lls,sir}");
    backtest->add_option("--initial-window", bt_args.initial_window,
                         "Observations in the first fit window");
    backtest->add_option("--r", bt_args.r, "Lag order (with --s, skips per-window selection)");
    backtest->add_option("--s", bt_args.s, "Lead order (with --r, skips per-window selection)");
    backtest->add_option("--p-max", bt_args.p_max, "Largest total order scanned");
    backtest->add_option("--n-starts", bt_args.n_starts, "Optimizer start points");
    backtest->add_option("--seed", bt_args.seed, "Random seed")->required();
    auto* bt_n = backtest->add_option("--n-sims", bt_args.n_sims, "Simulation draws (lls)");
    backtest->add_option("--truncation", bt_args.truncation, "Future-error horizon (lls)");
    auto* bt_k = backtest->add_option("--k-sims", bt_args.k_sims, "Proposal paths (sir)");
    auto* bt_s =
        backtest->add_option("--s-resample", bt_args.s_resample, "Resampled paths (sir)");
    backtest->add_flag("--demean", bt_args.demean_series,
                       "Subtract each window's mean; bounds shift with it");
    backtest->add_flag("--paper-scale", bt_args.paper_scale,
                       "Raise simulation counts to publication scale");
    backtest->add_option("--out", bt_args.out_dir, "Output directory");
    backtest->callback([&bt_args, bt_n, bt_k, bt_s] {
        if (bt_args.paper_scale) {
            if (bt_n->count() == 0) bt_args.n_sims = 1000000;
            if (bt_k->count() == 0) bt_args.k_sims = 100000;
            if (bt_s->count() == 0) bt_args.s_resample = 10000;
        }
        run_backtest(bt_args);
    });

    CredibilityArgs cred_args;
    auto* credibility = app.add_subcommand(
        "credibility", "Rank probability indices by how well they separate realized outcomes");
    credibility->add_option("--config", "Key-value file read as defaults; explicit flags win");
    credibility->add_option("--index", cred_args.index_paths, "Index CSV (repeatable)")
        ->required();
    credibility->add_option("--outcomes", cred_args.outcomes_path,
                            "Outcome CSV (date,outcome with in/out labels)");
    credibility->add_option("--realized", cred_args.realized_path,
                            "Realized series CSV, classified against --bounds");
    credibility->add_option("--bounds", cred_args.bounds_path, "Bounds CSV for --realized");
    credibility->add_option("--column", cred_args.column,
                            "Value column of --realized (defaults to the only one)");
    credibility->add_option("--thresholds", cred_args.thresholds,
                            "Threshold list (defaults to every index value)");
    credibility->add_option("--out", cred_args.out_dir, "Output directory");
    credibility->callback([&cred_args] { run_credibility(cred_args); });

    SimulateArgs sim_args;
    auto* simulate_cmd =
        app.add_subcommand("simulate", "Draw a series and its innovations from a model file");
    simulate_cmd->add_option("--config", "Key-value file read as defaults; explicit flags win");
    simulate_cmd->add_option("--model", sim_args.model_path, "Model file")->required();
    simulate_cmd->add_option("--n", sim_args.n, "Observations to draw")
        ->required()
        ->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--seed", sim_args.seed, "Random seed")->required();
    simulate_cmd->add_option("--burn", sim_args.burn, "Burn-in length per side");
    simulate_cmd->add_option("--origin", sim_args.origin, "Date of the first observation");
    simulate_cmd->add_option("--exog", sim_args.exog,
                             "Regressor panel CSV spanning n plus both burn windows");
    simulate_cmd->add_option("--out", sim_args.out_dir, "Output directory");
    simulate_cmd->callback([&sim_args] { run_simulate(sim_args); });

    try {
        // CLI11's own config handling does not reach subcommand options, so
        // merge the file into the argument list by hand before parsing. The
        // vector overload expects the arguments reversed.
        std::vector<std::string> args = merge_config(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

#include "kear/ar_linear.hpp"
#include "kear/datagen.hpp"
#include "kear/error.hpp"
#include "kear/evaluation.hpp"
#include "kear/kam.hpp"
#include "kear/kem.hpp"
#include "kear/kernel.hpp"
#include "kear/report_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

constexpr std::size_t kDefaultSteps = 300;

struct DataOptions {
    std::string dataset = "mg30";
    std::optional<std::size_t> length;
    std::size_t column = 0;
    std::optional<std::size_t> take;
    std::optional<int> sample_every;
    std::optional<std::size_t> burn_in;
};

bool is_csv(const std::string& dataset) { return dataset.rfind("csv:", 0) == 0; }

std::string dataset_slug(const std::string& dataset)
{
    return is_csv(dataset) ? fs::path(dataset.substr(4)).stem().string() : dataset;
}

kear::TimeSeries load_dataset(const DataOptions& opt, std::size_t default_length)
{
    const std::string& d = opt.dataset;
    if (is_csv(d)) {
        kear::CsvOptions csv;
        csv.column = opt.column;
        csv.take_first = opt.take;
        kear::TimeSeries s = kear::load_csv(d.substr(4), csv);
        s.name = dataset_slug(d);
        return opt.length ? s.take_first(*opt.length) : s;
    }
    const std::size_t length = opt.length.value_or(default_length);
    if (d == "mg30") {
        kear::MackeyGlassParams p;
        p.sample_every = opt.sample_every.value_or(p.sample_every);
        p.burn_in = opt.burn_in.value_or(p.burn_in);
        return kear::generate_mackey_glass(p, length);
    }
    if (d == "lorenz-x" || d == "lorenz-y" || d == "lorenz-z") {
        kear::LorenzParams p;
        p.sample_every = opt.sample_every.value_or(p.sample_every);
        p.burn_in = opt.burn_in.value_or(p.burn_in);
        kear::LorenzSeries all = kear::generate_lorenz(p, length);
        return d.back() == 'x' ? all.x : d.back() == 'y' ? all.y : all.z;
    }
    throw kear::InvalidConfig("unknown dataset '" + d + "' (expected mg30, lorenz-x, lorenz-y, lorenz-z or csv:<path>)");
}

kear::MomentEstimator parse_estimator(const std::string& text)
{
    if (text == "biased" || text == "biased-autocovariance") {
        return kear::MomentEstimator::BiasedAutocovariance;
    }
    if (text == "lagged-window") {
        return kear::MomentEstimator::LaggedWindow;
    }
    throw kear::InvalidConfig("unknown estimator '" + text + "' (expected biased-autocovariance or lagged-window)");
}

fs::path output_dir()
{
    const char* env = std::getenv("KEAR_OUTPUT_DIR");
    return env && *env ? fs::path(env) : fs::path("results");
}

std::string join(const std::vector<double>& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += (i ? " " : "") + kear::format_double(values[i]);
    }
    return out;
}

void add_data_options(CLI::App* cmd, DataOptions& opt)
{
    cmd->add_option("--dataset", opt.dataset, "mg30, lorenz-x, lorenz-y, lorenz-z or csv:<path>")->capture_default_str();
    cmd->add_option("--length", opt.length, "Samples to generate, or to keep from a CSV");
    cmd->add_option("--column", opt.column, "CSV column index")->capture_default_str();
    cmd->add_option("--take", opt.take, "Keep only the first N CSV values");
    cmd->add_option("--sample-every", opt.sample_every, "Integration steps per output sample (synthetic)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--burn-in", opt.burn_in, "Output samples discarded before recording (synthetic)");
}

// ---- generate ----

struct GenerateOptions {
    DataOptions data;
    std::optional<std::string> out;
};

int run_generate(const GenerateOptions& opt)
{
    const kear::TimeSeries series = load_dataset(opt.data, 400);
    const fs::path out = opt.out ? fs::path(*opt.out) : output_dir() / (dataset_slug(opt.data.dataset) + ".csv");
    if (out.has_parent_path()) {
        fs::create_directories(out.parent_path());
    }
    kear::save_csv(out, series);
    std::cout << "wrote " << series.size() << " samples to " << out.string() << '\n';
    return 0;
}

// ---- fit ----

struct FitOptions {
    DataOptions data;
    std::string method;
    int p = 0;
    std::optional<double> lp;
    std::optional<double> ell;
    std::string estimator = "biased-autocovariance";
};

int run_fit(const FitOptions& opt)
{
    const kear::Method method = kear::parse_method(opt.method);
    const kear::TimeSeries series = load_dataset(opt.data, 400);
    const std::span<const double> x = series.view();
    if (opt.p < 1 || series.size() < 2 * static_cast<std::size_t>(opt.p) + 1) {
        throw kear::InvalidConfig("need p >= 1 and at least 2p + 1 samples");
    }
    const std::vector<double> history = kear::recent_history(x, x.size(), static_cast<std::size_t>(opt.p));

    std::cout << "dataset: " << opt.data.dataset << " (" << series.size() << " samples)\n";
    std::cout << "method: " << kear::to_string(method) << "\n";
    std::cout << "p: " << opt.p << "\n";
    if (method == kear::Method::LAR) {
        const auto model = kear::fit_linear_ar(x, opt.p, parse_estimator(opt.estimator));
        std::cout << "coefficients: " << join(model.coefficients) << "\n";
        std::cout << "intercept: " << kear::format_double(model.intercept) << "\n";
        std::cout << "condition_number: " << kear::format_double(model.condition_number) << "\n";
        std::cout << "forecast: " << kear::format_double(kear::predict_linear(model, history)) << "\n";
        return 0;
    }
    if (opt.lp && opt.ell) {
        throw kear::InvalidConfig("give either --lp or --ell, not both");
    }
    const double ell = opt.ell ? *opt.ell : kear::bandwidth_from_median(x, opt.lp.value_or(1.0));
    if (!(ell > 0.0)) {
        throw kear::InvalidConfig("bandwidth must be positive");
    }
    const auto kernel = kear::KernelConfig::squared_exponential(ell);
    std::vector<double> coefficients;
    double condition = 0.0;
    kear::PreimageResult forecast;
    if (method == kear::Method::KAM) {
        const auto model = kear::fit_kam(x, opt.p, kernel);
        coefficients = model.coefficients;
        condition = model.condition_number;
        forecast = kear::predict_kam(model, history);
    } else {
        const auto model = kear::fit_kem(x, opt.p, kernel);
        coefficients = model.coefficients;
        condition = model.condition_number;
        forecast = kear::predict_kem(model, history);
    }
    std::cout << "ell: " << kear::format_double(ell) << "\n";
    std::cout << "coefficients: " << join(coefficients) << "\n";
    std::cout << "condition_number: " << kear::format_double(condition) << "\n";
    std::cout << "forecast: " << kear::format_double(forecast.x) << "\n";
    std::cout << "converged: " << (forecast.converged ? "true" : "false") << "\n";
    return 0;
}

// ---- evaluate ----

struct EvaluateOptions {
    DataOptions data;
    std::string method = "kem";
    std::size_t w = 100;
    std::optional<std::size_t> steps;
    std::vector<int> p_grid{1, 2, 3, 4, 5};
    std::vector<double> lp_grid{0.01, 0.1, 0.5, 1.0, 2.0, 5.0};
    bool trim = false;
    unsigned jobs = 1;
    std::string estimator = "biased-autocovariance";
    std::optional<std::string> config;
    std::optional<std::string> out;
    std::optional<std::string> csv;
    std::optional<std::string> plot;
};

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw kear::InvalidConfig("cannot open config file " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw kear::InvalidConfig("config file " + path + ": " + e.what());
    }
}

/// Copies config-file values into options the command line left unset.
void apply_config(const json& cfg, EvaluateOptions& opt, const CLI::App& cmd)
{
    if (!cfg.is_object()) {
        throw kear::InvalidConfig("config file must hold a JSON object");
    }
    auto unset = [&](const char* flag) { return cmd.count(flag) == 0; };
    try {
        for (const auto& [key, value] : cfg.items()) {
            if (key == "dataset") {
                if (unset("--dataset")) opt.data.dataset = value.get<std::string>();
            } else if (key == "method") {
                if (unset("--method")) opt.method = value.get<std::string>();
            } else if (key == "w") {
                if (unset("--w")) opt.w = value.get<std::size_t>();
            } else if (key == "steps") {
                if (unset("--steps") && !value.is_null()) opt.steps = value.get<std::size_t>();
            } else if (key == "length") {
                if (unset("--length") && !value.is_null()) opt.data.length = value.get<std::size_t>();
            } else if (key == "p_grid") {
                if (unset("--p-grid")) opt.p_grid = value.get<std::vector<int>>();
            } else if (key == "lp_grid") {
                if (unset("--lp-grid")) opt.lp_grid = value.get<std::vector<double>>();
            } else if (key == "trim_iqr") {
                if (unset("--trim")) opt.trim = value.get<bool>();
            } else if (key == "jobs") {
                if (unset("--jobs")) opt.jobs = value.get<unsigned>();
            } else if (key == "linear_estimator") {
                if (unset("--estimator")) opt.estimator = value.get<std::string>();
            } else if (key == "column") {
                if (unset("--column")) opt.data.column = value.get<std::size_t>();
            } else if (key == "take") {
                if (unset("--take") && !value.is_null()) opt.data.take = value.get<std::size_t>();
            } else if (key == "sample_every") {
                if (unset("--sample-every")) opt.data.sample_every = value.get<int>();
            } else if (key == "burn_in") {
                if (unset("--burn-in")) opt.data.burn_in = value.get<std::size_t>();
            } else {
                throw kear::InvalidConfig("config file: unknown key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw kear::InvalidConfig(std::string("config file: ") + e.what());
    }
}

int run_evaluate(EvaluateOptions opt, const CLI::App& cmd)
{
    json config_file;
    if (opt.config) {
        config_file = read_json_file(*opt.config);
        apply_config(config_file, opt, cmd);
    }

    kear::EvalConfig cfg;
    cfg.method = kear::parse_method(opt.method);
    cfg.w = opt.w;
    cfg.p_grid = opt.p_grid;
    cfg.lp_grid = opt.lp_grid;
    cfg.trim_iqr = opt.trim;
    cfg.jobs = opt.jobs;
    cfg.linear_estimator = parse_estimator(opt.estimator);
    cfg.validate();

    const bool synthetic = !is_csv(opt.data.dataset);
    if (synthetic && !opt.steps && !opt.data.length) {
        opt.steps = kDefaultSteps;
    }
    const std::size_t default_length = cfg.w + opt.steps.value_or(kDefaultSteps);
    const kear::TimeSeries series = load_dataset(opt.data, default_length);
    cfg.steps = opt.steps;

    const kear::ForecastReport report = kear::run_outer_evaluation(series, cfg);

    json summary = kear::summary_json(report, cfg, opt.data.dataset);
    summary["series_length"] = series.size();
    json dataset_options = json::object();
    if (opt.data.sample_every) dataset_options["sample_every"] = *opt.data.sample_every;
    if (opt.data.burn_in) dataset_options["burn_in"] = *opt.data.burn_in;
    if (is_csv(opt.data.dataset)) {
        dataset_options["column"] = opt.data.column;
        if (opt.data.take) dataset_options["take"] = *opt.data.take;
    }
    if (!dataset_options.empty()) {
        summary["dataset_options"] = dataset_options;
    }
    if (opt.config) {
        summary["config_file"] = {{"path", *opt.config}, {"contents", config_file}};
    }

    const std::string stem = dataset_slug(opt.data.dataset) + "_" + kear::to_string(cfg.method);
    const fs::path out = opt.out ? fs::path(*opt.out) : output_dir() / (stem + "_summary.json");
    const fs::path csv = opt.csv ? fs::path(*opt.csv) : output_dir() / (stem + "_steps.csv");
    kear::write_text(out, summary.dump(2) + "\n");
    kear::write_text(csv, kear::steps_csv(report));
    if (opt.plot) {
        kear::write_text(*opt.plot, kear::plot_csv(report, cfg.w));
    }

    std::cout << summary.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Kernel autoregressive forecasting: data generation, model fits and sliding-window evaluation"};
    app.require_subcommand(1);

    GenerateOptions gen;
    CLI::App* generate = app.add_subcommand("generate", "Write a dataset as a one-column CSV");
    add_data_options(generate, gen.data);
    generate->add_option("--out", gen.out, "Output CSV (default: $KEAR_OUTPUT_DIR/<dataset>.csv)");

    FitOptions fit;
    CLI::App* fit_cmd = app.add_subcommand("fit", "Fit one model on a whole series and forecast the next value");
    add_data_options(fit_cmd, fit.data);
    fit_cmd->add_option("--method", fit.method, "lar, kam or kem")->required();
    fit_cmd->add_option("--p", fit.p, "Model order")->required()->check(CLI::PositiveNumber);
    fit_cmd->add_option("--lp", fit.lp, "Bandwidth as a fraction of the series median (default 1)")
        ->check(CLI::PositiveNumber);
    fit_cmd->add_option("--ell", fit.ell, "Absolute bandwidth")->check(CLI::PositiveNumber);
    fit_cmd->add_option("--estimator", fit.estimator, "LAR moments: biased-autocovariance or lagged-window")
        ->capture_default_str();

    EvaluateOptions ev;
    CLI::App* evaluate = app.add_subcommand("evaluate", "Sliding-window one-step-ahead evaluation");
    add_data_options(evaluate, ev.data);
    evaluate->add_option("--method", ev.method, "lar, kam or kem")->capture_default_str();
    evaluate->add_option("--w", ev.w, "Outer training frame length (even)")->capture_default_str();
    evaluate->add_option("--steps", ev.steps, "Outer frames to evaluate (default 300 synthetic, length - w for CSV)");
    evaluate->add_option("--p-grid", ev.p_grid, "Candidate orders")->delimiter(',')->capture_default_str();
    evaluate->add_option("--lp-grid", ev.lp_grid, "Candidate bandwidth percentages")
        ->delimiter(',')
        ->capture_default_str();
    evaluate->add_flag("--trim", ev.trim, "Report the IQR-trimmed MSE");
    evaluate->add_option("--jobs", ev.jobs, "Worker threads over outer frames")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    evaluate->add_option("--estimator", ev.estimator, "LAR moments: biased-autocovariance or lagged-window")
        ->capture_default_str();
    evaluate->add_option("--config", ev.config, "JSON config file; command-line flags take precedence");
    evaluate->add_option("--out", ev.out, "Summary JSON (default: $KEAR_OUTPUT_DIR/<dataset>_<method>_summary.json)");
    evaluate->add_option("--csv", ev.csv, "Per-step CSV (default: $KEAR_OUTPUT_DIR/<dataset>_<method>_steps.csv)");
    evaluate->add_option("--plot", ev.plot, "Prediction-vs-truth CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (generate->parsed()) {
            return run_generate(gen);
        }
        if (fit_cmd->parsed()) {
            return run_fit(fit);
        }
        return run_evaluate(ev, *evaluate);
    } catch (const kear::InvalidConfig& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const kear::LoadError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const kear::InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

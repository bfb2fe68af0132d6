// colglasso command-line interface: simulate, fit, tune, replicate, eval,
// export-dot. Exit codes: 0 success, 2 input error, 3 solver did not
// converge (estimate still written), 4 every tuning candidate failed.

#include "colglasso/io.hpp"
#include "colglasso/likelihood.hpp"
#include "colglasso/metrics.hpp"
#include "colglasso/optimizer.hpp"
#include "colglasso/selection.hpp"
#include "colglasso/simulate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace cg = colglasso;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNoConverge = 3;
constexpr int kExitTuneFailed = 4;

// Accepts CLI11's TOML config files and, when the file starts with '{',
// a flat JSON object (subcommand names as nested objects).
class ConfigAuto : public CLI::ConfigTOML {
public:
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        const auto start = input.tellg();
        char first = 0;
        input >> std::ws;
        input.get(first);
        input.seekg(start);
        if (first != '{') return CLI::ConfigTOML::from_config(input);

        nlohmann::json j = nlohmann::json::parse(input);
        std::vector<CLI::ConfigItem> items;
        flatten(j, {}, items);
        return items;
    }

private:
    static void flatten(const nlohmann::json& j, std::vector<std::string> parents,
                        std::vector<CLI::ConfigItem>& items) {
        for (const auto& [key, value] : j.items()) {
            if (value.is_object()) {
                auto nested = parents;
                nested.push_back(key);
                flatten(value, nested, items);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            if (value.is_array()) {
                for (const auto& v : value) item.inputs.push_back(scalar(v));
            } else {
                item.inputs.push_back(scalar(value));
            }
            items.push_back(std::move(item));
        }
    }
    static std::string scalar(const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        return v.dump();
    }
};

struct SimArgs {
    std::string family = "star";
    int p = 10;
    int q = 3;
    int n = 250;
    std::uint64_t seed = 1;
    std::string out_data;
    std::string out_truth;
};

struct FitArgs {
    std::string data_path;
    cg::Hyperparams hyper;
    std::string out;
};

struct TuneArgs {
    std::string data_path;
    std::string mode = "full";
    std::vector<double> lambda1s{0.0};
    std::vector<double> lambda2s{0.0};
    std::vector<double> lambda3s{0.0};
    std::vector<double> taus{0.5};
    cg::Hyperparams base;
    std::string out;
    std::string trace_out;
};

struct ReplicateArgs {
    SimArgs sim;
    TuneArgs tune;
    int reps = 20;
    int threads = 0;
    std::string out_dir = ".";
};

struct EvalArgs {
    std::string estimate_path;
    std::string truth_path;
    std::string out;
};

struct DotArgs {
    std::string input;
    std::string out;
};

void add_solver_options(CLI::App* cmd, cg::Hyperparams& h) {
    cmd->add_option("--rho", h.rho, "Multiplier growth factor (> 1)");
    cmd->add_option("--eps-cd", h.eps_cd, "Coordinate-descent tolerance");
    cmd->add_option("--eps-alm", h.eps_alm, "Constraint-residual tolerance");
    cmd->add_option("--eps-dc", h.eps_dc, "Outer-loop parameter tolerance");
    cmd->add_option("--max-cd", h.max_cd, "Max coordinate-descent sweeps");
    cmd->add_option("--max-alm", h.max_alm, "Max augmented-Lagrangian iterations");
    cmd->add_option("--max-dc", h.max_dc, "Max outer iterations");
    cmd->add_option("--eps-zero", h.eps_zero, "Zero threshold for off-diagonals");
    cmd->add_option("--eps-merge", h.eps_merge, "Merge gap for color classes");
}

cg::SimSpec to_spec(const SimArgs& args) {
    cg::SimSpec spec;
    if (args.family == "star") spec.family = cg::SimSpec::Family::Star;
    else if (args.family == "cycle") spec.family = cg::SimSpec::Family::Cycle;
    else if (args.family == "grid") spec.family = cg::SimSpec::Family::Grid;
    else throw cg::InputError("unknown family '" + args.family + "'");
    spec.p = args.p;
    spec.q = args.q;
    spec.n = args.n;
    spec.seed = args.seed;
    return spec;
}

int run_simulate(const SimArgs& args) {
    const cg::SimSpec spec = to_spec(args);
    const cg::TrueModel model = cg::make_true_model(spec);
    const cg::DataMatrix data = cg::sample_mvn(model.theta, spec.n, spec.seed);
    cg::write_csv_data(args.out_data, data);
    cg::write_truth_json(args.out_truth,
                         cg::TruthFile{args.family, static_cast<int>(model.theta.rows()),
                                       spec.n, spec.seed, model.theta, model.graph});
    std::cout << "wrote " << args.out_data << " (" << data.n() << "x" << data.p() << ") and "
              << args.out_truth << "\n";
    return kExitOk;
}

cg::EstimateFile make_estimate_file(const cg::FitReport& report, const cg::Hyperparams& hyper,
                                    const cg::GramCache& gram, int n) {
    cg::ColoredGraphEstimate est =
        cg::extract_colored_estimate(report.params, hyper.eps_zero, hyper.eps_merge);
    est.loglik = cg::composite_loglik(est.params, gram, n);
    est.bic = -2.0 * est.loglik + est.df * std::log(n);
    double final_residual = 0.0;
    if (!report.alm_residuals.empty() && !report.alm_residuals.back().empty())
        final_residual = report.alm_residuals.back().back();
    return cg::EstimateFile{est.params.p(), n,     std::move(est),
                            hyper,          report.converged, report.dc_iterations,
                            report.objective_trace, final_residual};
}

int run_fit(const FitArgs& args) {
    args.hyper.validate();
    const cg::DataMatrix raw = cg::read_csv(args.data_path);
    const cg::DataMatrix data = cg::center_columns(raw);
    const cg::GramCache gram_cache = cg::gram(data);
    const cg::FitReport report = cg::fit(data, args.hyper);
    cg::EstimateFile out = make_estimate_file(report, args.hyper, gram_cache, data.n());
    cg::write_estimate_json(args.out, out);
    std::cout << "wrote " << args.out << " (df=" << out.estimate.df
              << ", bic=" << out.estimate.bic << ", converged=" << report.converged << ")\n";
    if (!report.converged) {
        std::cerr << "warning: solver did not converge"
                  << (report.message.empty() ? "" : (": " + report.message)) << "\n";
        return kExitNoConverge;
    }
    return kExitOk;
}

cg::TuneGrid to_grid(const TuneArgs& args) {
    cg::TuneGrid grid;
    grid.lambda1s = args.lambda1s;
    grid.lambda2s = args.lambda2s;
    grid.lambda3s = args.lambda3s;
    grid.taus = args.taus;
    if (args.mode == "full") grid.mode = cg::TuneGrid::Mode::FullGrid;
    else if (args.mode == "sequential") grid.mode = cg::TuneGrid::Mode::Sequential;
    else throw cg::InputError("unknown tuning mode '" + args.mode + "'");
    return grid;
}

int run_tune(const TuneArgs& args) {
    const cg::TuneGrid grid = to_grid(args);
    const cg::DataMatrix data = cg::center_columns(cg::read_csv(args.data_path));
    const cg::GramCache gram_cache = cg::gram(data);

    cg::TuneResult result = [&] {
        try {
            return cg::tune(data, grid, args.base);
        } catch (const cg::TuningError& err) {
            std::cerr << "error: " << err.what() << "\n";
            std::exit(kExitTuneFailed);
        }
    }();

    cg::EstimateFile out = make_estimate_file(result.fit, result.best, gram_cache, data.n());
    cg::write_estimate_json(args.out, out);
    if (!args.trace_out.empty()) cg::write_trace_csv(args.trace_out, result.trace, result.best);
    std::cout << "best: lambda1=" << result.best.lambda1 << " lambda2=" << result.best.lambda2
              << " lambda3=" << result.best.lambda3 << " tau=" << result.best.tau
              << " bic=" << result.estimate.bic << " df=" << result.estimate.df << "\n";
    return kExitOk;
}

struct RepOutcome {
    bool failed = false;
    std::string error;
    double mse = 0, f1 = 0, d0 = 0, acc = 0, bic = 0;
    int df = 0;
    double lambda1 = 0, lambda2 = 0, lambda3 = 0, tau = 0;
    bool converged = false;
    std::uint64_t seed = 0;
};

RepOutcome run_one_replicate(const cg::SimSpec& base_spec, const cg::TrueModel& model,
                             const cg::TuneGrid& grid, const cg::Hyperparams& hyper,
                             int replicate) {
    RepOutcome out;
    out.seed = base_spec.seed + static_cast<std::uint64_t>(replicate);
    try {
        const cg::DataMatrix data = cg::sample_mvn(model.theta, base_spec.n, out.seed);
        cg::TuneResult result = cg::tune(data, grid, hyper);
        const cg::MetricsReport rep =
            cg::evaluate(result.estimate.params, model.theta, model.graph);
        out.mse = rep.mse;
        out.f1 = rep.f1.f1;
        out.d0 = rep.d0;
        out.acc = rep.acc_all;
        out.df = result.estimate.df;
        out.bic = result.estimate.bic;
        out.lambda1 = result.best.lambda1;
        out.lambda2 = result.best.lambda2;
        out.lambda3 = result.best.lambda3;
        out.tau = result.best.tau;
        out.converged = result.fit.converged;
    } catch (const std::exception& err) {
        out.failed = true;
        out.error = err.what();
    }
    return out;
}

int run_replicate(const ReplicateArgs& args) {
    const cg::SimSpec spec = to_spec(args.sim);
    const cg::TrueModel model = cg::make_true_model(spec);
    const cg::TuneGrid grid = to_grid(args.tune);
    grid.validate();
    args.tune.base.validate();
    if (args.reps < 1) throw cg::InputError("replicate count must be >= 1");

    std::vector<RepOutcome> results(args.reps);
    const unsigned budget = args.threads > 0
                                ? static_cast<unsigned>(args.threads)
                                : std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = std::min<unsigned>(budget, args.reps);
    std::atomic<int> next{0};
    auto work = [&] {
        for (int r; (r = next.fetch_add(1)) < args.reps;)
            results[r] = run_one_replicate(spec, model, grid, args.tune.base, r + 1);
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    std::filesystem::create_directories(args.out_dir);
    const std::string rep_path = args.out_dir + "/replicates.csv";
    std::ofstream reps(rep_path);
    if (!reps) throw std::runtime_error("cannot write " + rep_path);
    reps << "replicate,seed,lambda1,lambda2,lambda3,tau,mse,f1,d0,acc_all,df,bic,converged,"
            "failed,error\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    for (int r = 0; r < args.reps; ++r) {
        const RepOutcome& o = results[r];
        reps << (r + 1) << "," << o.seed << ",";
        if (o.failed) {
            reps << ",,,,,,,,,,0,1," << o.error << "\n";
        } else {
            reps << num(o.lambda1) << "," << num(o.lambda2) << "," << num(o.lambda3) << ","
                 << num(o.tau) << "," << num(o.mse) << "," << num(o.f1) << "," << num(o.d0)
                 << "," << num(o.acc) << "," << o.df << "," << num(o.bic) << ","
                 << (o.converged ? 1 : 0) << ",0,\n";
        }
    }
    reps.flush();
    if (!reps) throw std::runtime_error("write failed: " + rep_path);

    auto mean_sd = [&](auto getter) {
        std::vector<double> vals;
        for (const auto& o : results)
            if (!o.failed) vals.push_back(getter(o));
        if (vals.empty()) return std::pair<double, double>{0.0, 0.0};
        double mean = 0;
        for (double v : vals) mean += v;
        mean /= vals.size();
        double var = 0;
        for (double v : vals) var += (v - mean) * (v - mean);
        const double sd = vals.size() > 1 ? std::sqrt(var / (vals.size() - 1)) : 0.0;
        return std::pair<double, double>{mean, sd};
    };
    const auto [mse_m, mse_s] = mean_sd([](const RepOutcome& o) { return o.mse; });
    const auto [f1_m, f1_s] = mean_sd([](const RepOutcome& o) { return o.f1; });
    const auto [d0_m, d0_s] = mean_sd([](const RepOutcome& o) { return o.d0; });
    const auto [acc_m, acc_s] = mean_sd([](const RepOutcome& o) { return o.acc; });
    const int failed =
        static_cast<int>(std::count_if(results.begin(), results.end(),
                                       [](const RepOutcome& o) { return o.failed; }));

    const std::string sum_path = args.out_dir + "/summary.csv";
    std::ofstream sum(sum_path);
    if (!sum) throw std::runtime_error("cannot write " + sum_path);
    sum << "family,p,n,reps,failed,mse,f1,d0,acc_all\n";
    sum << args.sim.family << "," << model.theta.rows() << "," << spec.n << "," << args.reps
        << "," << failed << "," << cg::mean_sd_cell(mse_m, mse_s) << ","
        << cg::mean_sd_cell(f1_m, f1_s) << "," << cg::mean_sd_cell(d0_m, d0_s) << ","
        << cg::mean_sd_cell(acc_m, acc_s) << "\n";
    sum.flush();
    if (!sum) throw std::runtime_error("write failed: " + sum_path);

    std::cout << "replicates: " << args.reps << " (failed " << failed << ")  MSE "
              << cg::mean_sd_cell(mse_m, mse_s) << "  F1 " << cg::mean_sd_cell(f1_m, f1_s)
              << "  d0 " << cg::mean_sd_cell(d0_m, d0_s) << "  Acc_all "
              << cg::mean_sd_cell(acc_m, acc_s) << "\n";
    return kExitOk;
}

int run_eval(const EvalArgs& args) {
    const cg::EstimateFile est = cg::read_estimate_json(args.estimate_path);
    const cg::TruthFile truth = cg::read_truth_json(args.truth_path);
    const cg::MetricsReport rep =
        cg::evaluate(est.estimate.params, truth.theta, truth.graph);
    if (!args.out.empty()) cg::write_metrics_json(args.out, rep);
    std::cout << "mse=" << rep.mse << " f1=" << rep.f1.f1 << " d0=" << rep.d0
              << " acc_all=" << rep.acc_all << "\n";
    return kExitOk;
}

int run_export_dot(const DotArgs& args) {
    const nlohmann::json j = [&] {
        std::ifstream in(args.input);
        if (!in) throw cg::InputError("cannot open " + args.input);
        try {
            return nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& err) {
            throw cg::InputError(args.input + ": " + err.what());
        }
    }();
    const std::string kind = j.value("kind", "estimate");
    const cg::ColoredGraph graph = kind == "truth"
                                       ? cg::read_truth_json(args.input).graph
                                       : cg::read_estimate_json(args.input).estimate.graph;
    const std::string dot = cg::export_dot(graph);
    if (args.out.empty()) {
        std::cout << dot;
    } else {
        std::ofstream out(args.out);
        if (!out) throw std::runtime_error("cannot write " + args.out);
        out << dot;
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + args.out);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse symmetry-constrained Gaussian precision matrix estimation"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML or JSON configuration file");
    app.config_formatter(std::make_shared<ConfigAuto>());

    SimArgs sim_args;
    auto* sim = app.add_subcommand("simulate", "Draw samples from a colored model");
    sim->add_option("--family", sim_args.family, "star|cycle|grid");
    sim->add_option("--p", sim_args.p, "Vertex count (star/cycle)");
    sim->add_option("--q", sim_args.q, "Grid side length");
    sim->add_option("--n", sim_args.n, "Sample size");
    sim->add_option("--seed", sim_args.seed, "RNG seed");
    sim->add_option("--out", sim_args.out_data, "Output data CSV")->required();
    sim->add_option("--truth", sim_args.out_truth, "Output truth JSON")->required();

    FitArgs fit_args;
    auto* fitc = app.add_subcommand("fit", "Fit with explicit hyperparameters");
    fitc->add_option("--data", fit_args.data_path, "Input data CSV")->required();
    fitc->add_option("--lambda1", fit_args.hyper.lambda1, "Diagonal-difference weight");
    fitc->add_option("--lambda2", fit_args.hyper.lambda2, "Sparsity weight");
    fitc->add_option("--lambda3", fit_args.hyper.lambda3, "Off-diagonal-difference weight");
    fitc->add_option("--tau", fit_args.hyper.tau, "Truncation threshold");
    add_solver_options(fitc, fit_args.hyper);
    fitc->add_option("--out", fit_args.out, "Output estimate JSON")->required();

    TuneArgs tune_args;
    auto* tunec = app.add_subcommand("tune", "Select hyperparameters by composite BIC");
    tunec->add_option("--data", tune_args.data_path, "Input data CSV")->required();
    tunec->add_option("--mode", tune_args.mode, "full|sequential");
    tunec->add_option("--lambda1", tune_args.lambda1s, "lambda1 candidates");
    tunec->add_option("--lambda2", tune_args.lambda2s, "lambda2 candidates");
    tunec->add_option("--lambda3", tune_args.lambda3s, "lambda3 candidates");
    tunec->add_option("--tau", tune_args.taus, "tau candidates");
    add_solver_options(tunec, tune_args.base);
    tunec->add_option("--out", tune_args.out, "Output estimate JSON")->required();
    tunec->add_option("--trace", tune_args.trace_out, "Output search-trace CSV");

    ReplicateArgs rep_args;
    auto* repc = app.add_subcommand("replicate", "Monte Carlo study: simulate, tune, evaluate");
    repc->add_option("--family", rep_args.sim.family, "star|cycle|grid");
    repc->add_option("--p", rep_args.sim.p, "Vertex count (star/cycle)");
    repc->add_option("--q", rep_args.sim.q, "Grid side length");
    repc->add_option("--n", rep_args.sim.n, "Sample size");
    repc->add_option("--seed", rep_args.sim.seed, "Base seed; replicate r uses seed+r");
    repc->add_option("--reps", rep_args.reps, "Replicate count");
    repc->add_option("--threads", rep_args.threads, "Worker threads (0 = hardware)");
    repc->add_option("--mode", rep_args.tune.mode, "full|sequential");
    repc->add_option("--lambda1", rep_args.tune.lambda1s, "lambda1 candidates");
    repc->add_option("--lambda2", rep_args.tune.lambda2s, "lambda2 candidates");
    repc->add_option("--lambda3", rep_args.tune.lambda3s, "lambda3 candidates");
    repc->add_option("--tau", rep_args.tune.taus, "tau candidates");
    add_solver_options(repc, rep_args.tune.base);
    repc->add_option("--out-dir", rep_args.out_dir, "Directory for replicates.csv/summary.csv");

    EvalArgs eval_args;
    auto* evalc = app.add_subcommand("eval", "Score an estimate against a truth file");
    evalc->add_option("--estimate", eval_args.estimate_path, "Estimate JSON")->required();
    evalc->add_option("--truth", eval_args.truth_path, "Truth JSON")->required();
    evalc->add_option("--out", eval_args.out, "Output metrics JSON");

    DotArgs dot_args;
    auto* dotc = app.add_subcommand("export-dot", "Render an estimate or truth file as DOT");
    dotc->add_option("--input", dot_args.input, "Estimate or truth JSON")->required();
    dotc->add_option("--out", dot_args.out, "Output DOT path (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (sim->parsed()) return run_simulate(sim_args);
        if (fitc->parsed()) return run_fit(fit_args);
        if (tunec->parsed()) return run_tune(tune_args);
        if (repc->parsed()) return run_replicate(rep_args);
        if (evalc->parsed()) return run_eval(eval_args);
        if (dotc->parsed()) return run_export_dot(dot_args);
    } catch (const cg::InputError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInput;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return kExitOk;
}

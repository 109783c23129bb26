// wapalim command line front end: fit, select, simulate.

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "wapalim/plm.hpp"
#include "wapalim/simbench.hpp"

using json = nlohmann::ordered_json;
using namespace wapalim;

namespace {

constexpr int kExitRead = 1;       // unreadable/malformed input
constexpr int kExitBadInput = 2;   // n not a power of two, unknown scenario
constexpr int kExitRankDef = 3;    // rank-deficient design

struct CsvData {
    Eigen::VectorXd Y;
    Eigen::MatrixXd X;
    std::vector<std::string> names;  // x1..xp
};

// header row "Y,x1,...,xp", one observation per row
CsvData read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open input file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::ios_base::failure("empty input file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();

    CsvData data;
    std::istringstream hdr(line);
    std::string cell;
    bool first = true;
    while (std::getline(hdr, cell, ',')) {
        if (first) {
            if (cell != "Y") throw std::ios_base::failure("first CSV column must be Y");
            first = false;
        } else {
            data.names.push_back(cell);
        }
    }
    const int p = static_cast<int>(data.names.size());

    std::vector<double> ys;
    std::vector<std::vector<double>> xs;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::vector<double> vals;
        try {
            while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw std::ios_base::failure("non-numeric CSV cell: " + cell);
        }
        if (static_cast<int>(vals.size()) != p + 1)
            throw std::ios_base::failure("CSV row has wrong number of columns");
        ys.push_back(vals[0]);
        xs.emplace_back(vals.begin() + 1, vals.end());
    }
    const int n = static_cast<int>(ys.size());
    if (n == 0) throw std::ios_base::failure("input file has no data rows: " + path);
    data.Y = Eigen::VectorXd::Map(ys.data(), n);
    data.X.resize(n, p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) data.X(i, j) = xs[i][j];
    return data;
}

// build the full output string first; never leave a partial file on error
void emit(const std::string& out_path, const std::string& payload) {
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::ios_base::failure("cannot open output file: " + out_path);
    out << payload;
}

struct FitOptions {
    std::string input, output;
    std::string filter = "sym8";
    int j0 = -1;  // -1: derive from n
    int iters = 20000, burnin = 5000;
    std::uint64_t seed = 1;
    int topk = 10;
};

void add_chain_flags(CLI::App* cmd, FitOptions& opt) {
    cmd->add_option("--input", opt.input, "input CSV with header Y,x1,...,xp")->required();
    cmd->add_option("--output", opt.output, "output path (stdout when omitted)");
    cmd->add_option("--filter", opt.filter, "wavelet filter")
        ->check(CLI::IsMember({"haar", "db4", "db6", "db8", "db10", "sym8"}));
    cmd->add_option("--j0", opt.j0, "coarsest decomposition level (default from n)");
    cmd->add_option("--iters", opt.iters, "total Gibbs iterations");
    cmd->add_option("--burnin", opt.burnin, "burn-in iterations to discard");
    cmd->add_option("--seed", opt.seed, "RNG seed");
}

ChainOutput run_fit(const FitOptions& opt, CsvData& data, int& j0_used) {
    data = read_csv(opt.input);
    const int n = static_cast<int>(data.Y.size());
    if (!is_power_of_two(n))
        throw std::invalid_argument("sample size must be a power of two, got " +
                                    std::to_string(n));
    if (opt.burnin < 0 || opt.iters <= opt.burnin)
        throw std::invalid_argument("need --iters > --burnin >= 0");

    const FilterBank fb = build_filter(opt.filter);
    j0_used = opt.j0 >= 0 ? opt.j0 : default_coarsest_level(n);
    Hyperparameters hp = default_hyperparameters(data.Y, data.X, fb, j0_used);
    hp.n_iter = opt.iters;
    hp.burn_in = opt.burnin;
    hp.seed = opt.seed;
    return run_chain(make_model_input(data.Y, data.X, fb, j0_used), hp);
}

json chain_meta(const FitOptions& opt, const ChainOutput& chain, int j0) {
    return {{"seed", chain.seed},
            {"n_iter", chain.n_iter},
            {"burn_in", chain.burn_in},
            {"kept", chain.kept},
            {"filter", opt.filter},
            {"j0", j0}};
}

std::vector<double> to_vec(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

int cmd_fit(const FitOptions& opt) {
    CsvData data;
    int j0 = 0;
    const ChainOutput chain = run_fit(opt, data, j0);
    const Eigen::VectorXd f_hat = chain.y_hat - data.X * chain.beta_hat;
    json out;
    out["beta_hat"] = to_vec(chain.beta_hat);
    out["beta_sd"] = to_vec(chain.beta_sd);
    out["inclusion_prob"] = to_vec(chain.inclusion_prob);
    out["predictors"] = data.names;
    out["theta_hat"] = to_vec(chain.theta_hat);
    out["y_hat"] = to_vec(chain.y_hat);
    out["f_hat"] = to_vec(f_hat);
    out["chain"] = chain_meta(opt, chain, j0);
    emit(opt.output, out.dump(2) + "\n");
    return 0;
}

int cmd_select(const FitOptions& opt) {
    if (opt.topk < 1) throw std::invalid_argument("--topk must be >= 1");
    CsvData data;
    int j0 = 0;
    const ChainOutput chain = run_fit(opt, data, j0);
    const auto ranked = select_models(chain, opt.topk);
    json models = json::array();
    for (const auto& [pattern, freq] : ranked) {
        std::string bits;
        json included = json::array();
        for (std::size_t i = 0; i < pattern.size(); ++i) {
            bits += pattern[i] ? '1' : '0';
            if (pattern[i]) included.push_back(data.names[i]);
        }
        models.push_back({{"pattern", bits}, {"predictors", included}, {"frequency", freq}});
    }
    json out;
    out["models"] = models;
    out["inclusion_prob"] = to_vec(chain.inclusion_prob);
    out["predictors"] = data.names;
    out["chain"] = chain_meta(opt, chain, j0);
    emit(opt.output, out.dump(2) + "\n");
    return 0;
}

struct SimOptions {
    std::string scenario, output;
    int reps = -1, iters = -1, burnin = -1, threads = 1;
    std::uint64_t seed = 1;
};

int cmd_simulate(const SimOptions& opt) {
    ScenarioSpec spec = parse_scenario(opt.scenario);
    if (opt.reps > 0) spec.replications = opt.reps;
    if (opt.iters > 0) spec.n_iter = opt.iters;
    if (opt.burnin >= 0) spec.burn_in = opt.burnin;
    if (spec.n_iter <= spec.burn_in)
        throw std::invalid_argument("need --iters > --burnin >= 0");
    spec.seed = opt.seed;
    spec.threads = opt.threads;
    const BenchmarkResult r = run_benchmark(spec);
    emit(opt.output, benchmark_csv_header() + "\n" + benchmark_csv_row(r) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian wavelet estimation for partially linear models"};
    app.require_subcommand(1);

    FitOptions fit_opt;
    auto* fit = app.add_subcommand("fit", "fit the model to a CSV dataset");
    add_chain_flags(fit, fit_opt);

    FitOptions sel_opt;
    auto* sel = app.add_subcommand("select", "rank predictor subsets by posterior frequency");
    add_chain_flags(sel, sel_opt);
    sel->add_option("--topk", sel_opt.topk, "number of ranked models to report");

    SimOptions sim_opt;
    auto* sim = app.add_subcommand("simulate", "run a benchmark scenario");
    sim->add_option("--scenario", sim_opt.scenario, "e.g. example1-heavisine-128")->required();
    sim->add_option("--output", sim_opt.output, "output path (stdout when omitted)");
    sim->add_option("--reps", sim_opt.reps, "replications");
    sim->add_option("--iters", sim_opt.iters, "total Gibbs iterations per replicate");
    sim->add_option("--burnin", sim_opt.burnin, "burn-in iterations");
    sim->add_option("--seed", sim_opt.seed, "RNG seed");
    sim->add_option("--threads", sim_opt.threads, "worker threads for replicates");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fit->parsed()) return cmd_fit(fit_opt);
        if (sel->parsed()) return cmd_select(sel_opt);
        return cmd_simulate(sim_opt);
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRead;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRankDef;
    }
}

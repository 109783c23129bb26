#include "wapalim/simbench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace wapalim {

namespace {

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

// jump locations and heights shared by Blocks and Bumps
const double kT[] = {0.1, 0.13, 0.15, 0.23, 0.25, 0.4, 0.44, 0.65, 0.76, 0.78, 0.81};
const double kHBlocks[] = {4, -5, 3, -4, 5, -4.2, 2.1, 4.3, -3.1, 2.1, -4.2};
const double kHBumps[] = {4, 5, 3, 4, 5, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2};
const double kWBumps[] = {0.005, 0.005, 0.006, 0.01, 0.01, 0.03, 0.01, 0.01, 0.005, 0.008, 0.005};

double blocks_at(double t) {
    double f = 0.0;
    for (int j = 0; j < 11; ++j) f += kHBlocks[j] * 0.5 * (1.0 + sgn(t - kT[j]));
    return f;
}

double bumps_at(double t) {
    double f = 0.0;
    for (int j = 0; j < 11; ++j) {
        const double u = std::abs((t - kT[j]) / kWBumps[j]);
        f += kHBumps[j] * std::pow(1.0 + u, -4.0);
    }
    return f;
}

double doppler_at(double t) {
    const double eps = 0.05;
    return std::sqrt(t * (1.0 - t)) * std::sin(2.0 * M_PI * (1.0 + eps) / (t + eps));
}

double heavisine_at(double t) { return 4.0 * std::sin(4.0 * M_PI * t) - sgn(t - 0.3) - sgn(0.72 - t); }

// piecewise polynomial test function of Nason (1996)
double piecepoly_at(double t) {
    if (t <= 0.5) return 4.0 * t * t * (3.0 - 4.0 * t);
    if (t <= 0.75) return (4.0 / 3.0) * t * (4.0 * t * t - 10.0 * t + 7.0) - 1.5;
    return (16.0 / 3.0) * t * (t - 1.0) * (t - 1.0);
}

struct SignalConfig {
    double scale;
    const char* filter;
};

SignalConfig example1_config(TestSignal s) {
    switch (s) {
        case TestSignal::Blocks: return {3.0, "haar"};
        case TestSignal::Bumps: return {7.0, "db6"};
        case TestSignal::Doppler: return {18.0, "sym8"};
        case TestSignal::Heavisine: return {2.0, "sym8"};
        default:
            throw std::invalid_argument("gen_example1: signal must be one of "
                                        "blocks/bumps/doppler/heavisine");
    }
}

SignalConfig example2_config(TestSignal s) {
    switch (s) {
        case TestSignal::PiecePoly: return {9.0, "db8"};
        case TestSignal::Bumps: return {3.0, "db8"};
        default:
            throw std::invalid_argument("gen_example2: signal must be piecepoly or bumps");
    }
}

std::pair<double, double> mean_and_se(const std::vector<double>& per_rep) {
    const int m = static_cast<int>(per_rep.size());
    double mean = 0.0;
    for (double x : per_rep) mean += x;
    mean /= m;
    if (m < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : per_rep) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (m - 1) / m)};
}

}  // namespace

TestSignal signal_from_name(const std::string& name) {
    if (name == "blocks") return TestSignal::Blocks;
    if (name == "bumps") return TestSignal::Bumps;
    if (name == "doppler") return TestSignal::Doppler;
    if (name == "heavisine") return TestSignal::Heavisine;
    if (name == "piecepoly") return TestSignal::PiecePoly;
    throw std::invalid_argument("unknown test signal: " + name);
}

std::string signal_name(TestSignal s) {
    switch (s) {
        case TestSignal::Blocks: return "blocks";
        case TestSignal::Bumps: return "bumps";
        case TestSignal::Doppler: return "doppler";
        case TestSignal::Heavisine: return "heavisine";
        case TestSignal::PiecePoly: return "piecepoly";
    }
    return "?";
}

std::vector<double> test_function(TestSignal signal, int n) {
    std::vector<double> f(n);
    for (int i = 1; i <= n; ++i) {
        const double t = static_cast<double>(i) / n;
        switch (signal) {
            case TestSignal::Blocks: f[i - 1] = blocks_at(t); break;
            case TestSignal::Bumps: f[i - 1] = bumps_at(t); break;
            case TestSignal::Doppler: f[i - 1] = doppler_at(t); break;
            case TestSignal::Heavisine: f[i - 1] = heavisine_at(t); break;
            case TestSignal::PiecePoly: f[i - 1] = piecepoly_at(t); break;
        }
    }
    return f;
}

Dataset gen_example1(TestSignal signal, int n, Rng& rng) {
    const auto cfg = example1_config(signal);
    Dataset ds;
    ds.filter = build_filter(cfg.filter);
    ds.beta_true.resize(2);
    ds.beta_true << 0.5, 1.0;

    const auto f = test_function(signal, n);
    ds.f_true = cfg.scale * Eigen::VectorXd::Map(f.data(), n);

    ds.X.resize(n, 2);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < 2; ++j) ds.X(i, j) = rng.normal();

    ds.Y = ds.X * ds.beta_true + ds.f_true;
    for (int i = 0; i < n; ++i) ds.Y[i] += rng.normal();
    return ds;
}

Dataset gen_example2(TestSignal signal, int n, Rng& rng) {
    const auto cfg = example2_config(signal);
    const int p = 20;
    Dataset ds;
    ds.filter = build_filter(cfg.filter);
    ds.beta_true = Eigen::VectorXd::Zero(p);
    ds.beta_true.head(4) << 1.5, 2.0, 2.5, 3.0;

    const auto f = test_function(signal, n);
    ds.f_true = cfg.scale * Eigen::VectorXd::Map(f.data(), n);

    // AR(1) covariance 0.4^|a-b|, unit variances
    Eigen::MatrixXd Sigma(p, p);
    for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b) Sigma(a, b) = std::pow(0.4, std::abs(a - b));
    const Eigen::MatrixXd L = Sigma.llt().matrixL();

    ds.X.resize(n, p);
    Eigen::VectorXd zrow(p);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) zrow[j] = rng.normal();
        ds.X.row(i) = (L * zrow).transpose();
    }

    ds.Y = ds.X * ds.beta_true + ds.f_true;
    for (int i = 0; i < n; ++i) ds.Y[i] += rng.normal();
    return ds;
}

ScenarioSpec parse_scenario(const std::string& name) {
    std::istringstream ss(name);
    std::string ex, sig, ns;
    if (!std::getline(ss, ex, '-') || !std::getline(ss, sig, '-') || !std::getline(ss, ns))
        throw std::invalid_argument("scenario must look like example1-heavisine-128: " + name);
    ScenarioSpec spec;
    spec.name = name;
    if (ex == "example1") spec.example = 1;
    else if (ex == "example2") spec.example = 2;
    else throw std::invalid_argument("unknown scenario example: " + ex);
    spec.signal = signal_from_name(sig);
    spec.n = std::stoi(ns);
    if (spec.n != 64 && spec.n != 128 && spec.n != 256 && spec.n != 512)
        throw std::invalid_argument("scenario n must be one of 64, 128, 256, 512");
    // validate signal/example pairing
    if (spec.example == 1) example1_config(spec.signal);
    else example2_config(spec.signal);
    return spec;
}

std::vector<std::string> known_scenarios() {
    std::vector<std::string> out;
    for (const char* s : {"blocks", "bumps", "doppler", "heavisine"})
        for (int n : {64, 128, 256, 512})
            out.push_back("example1-" + std::string(s) + "-" + std::to_string(n));
    for (const char* s : {"piecepoly", "bumps"})
        for (int n : {128, 256, 512})
            out.push_back("example2-" + std::string(s) + "-" + std::to_string(n));
    return out;
}

std::pair<double, double> amse(const std::vector<Eigen::VectorXd>& estimates,
                               const Eigen::VectorXd& truth) {
    if (estimates.empty()) throw std::invalid_argument("amse: need at least one replicate");
    std::vector<double> per_rep;
    per_rep.reserve(estimates.size());
    for (const auto& e : estimates) {
        if (e.size() != truth.size()) throw std::invalid_argument("amse: dimension mismatch");
        per_rep.push_back((e - truth).squaredNorm() / truth.size());
    }
    return mean_and_se(per_rep);
}

std::pair<double, double> amse_beta(const std::vector<Eigen::VectorXd>& estimates,
                                    const Eigen::VectorXd& truth) {
    if (estimates.empty()) throw std::invalid_argument("amse_beta: need at least one replicate");
    std::vector<double> per_rep;
    per_rep.reserve(estimates.size());
    for (const auto& e : estimates) {
        if (e.size() != truth.size())
            throw std::invalid_argument("amse_beta: dimension mismatch");
        per_rep.push_back((e - truth).squaredNorm());
    }
    return mean_and_se(per_rep);
}

BenchmarkResult run_benchmark(const ScenarioSpec& spec) {
    const auto t0 = std::chrono::steady_clock::now();
    const int M = spec.replications;
    std::vector<double> mse_y(M), mse_b(M);

    auto run_one = [&](int m) {
        Rng data_rng(spec.seed, static_cast<std::uint64_t>(2 * m));
        Dataset ds = (spec.example == 1) ? gen_example1(spec.signal, spec.n, data_rng)
                                         : gen_example2(spec.signal, spec.n, data_rng);
        const int J0 = default_coarsest_level(spec.n);
        Hyperparameters hp = default_hyperparameters(ds.Y, ds.X, ds.filter, J0);
        hp.n_iter = spec.n_iter;
        hp.burn_in = spec.burn_in;
        hp.seed = Rng(spec.seed, static_cast<std::uint64_t>(2 * m + 1)).next_raw();
        const ModelInput input = make_model_input(ds.Y, ds.X, ds.filter, J0);
        const ChainOutput chain = run_chain(input, hp);
        const Eigen::VectorXd truth = ds.X * ds.beta_true + ds.f_true;
        mse_y[m] = (chain.y_hat - truth).squaredNorm() / spec.n;
        mse_b[m] = (chain.beta_hat - ds.beta_true).squaredNorm();
    };

    const int workers = std::max(1, std::min(spec.threads, M));
    if (workers == 1) {
        for (int m = 0; m < M; ++m) run_one(m);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int m = next.fetch_add(1); m < M; m = next.fetch_add(1)) run_one(m);
            });
        for (auto& t : pool) t.join();
    }

    BenchmarkResult r;
    r.spec = spec;
    std::tie(r.amse, r.amse_se) = mean_and_se(mse_y);
    std::tie(r.amse_beta, r.amse_beta_se) = mean_and_se(mse_b);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::string benchmark_csv_header() {
    return "signal,n,M,AMSE,AMSE_SE,AMSE_beta,AMSE_beta_SE,seconds";
}

std::string benchmark_csv_row(const BenchmarkResult& r) {
    std::ostringstream ss;
    ss.precision(10);
    ss << signal_name(r.spec.signal) << ',' << r.spec.n << ',' << r.spec.replications << ','
       << r.amse << ',' << r.amse_se << ',' << r.amse_beta << ',' << r.amse_beta_se << ','
       << r.seconds;
    return ss.str();
}

}  // namespace wapalim

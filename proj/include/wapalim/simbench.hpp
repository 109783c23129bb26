#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "wapalim/plm.hpp"

namespace wapalim {

enum class TestSignal { Blocks, Bumps, Doppler, Heavisine, PiecePoly };

TestSignal signal_from_name(const std::string& name);
std::string signal_name(TestSignal s);

// Standard unscaled test signal sampled at t_i = i/n, i = 1..n.
std::vector<double> test_function(TestSignal signal, int n);

struct Dataset {
    Eigen::VectorXd Y;
    Eigen::MatrixXd X;
    Eigen::VectorXd f_true;  // c * f, the scaled nonparametric part
    Eigen::VectorXd beta_true;
    FilterBank filter;
};

// Example 1: p = 2 iid N(0,1) design, β = (0.5, 1)', f scaled per signal
// (Blocks c=3 Haar, Bumps c=7 db6, Doppler c=18 sym8, Heavisine c=2 sym8).
Dataset gen_example1(TestSignal signal, int n, Rng& rng);

// Example 2: p = 20, β = (1.5, 2, 2.5, 3, 0, ..., 0)', rows of X from a
// 20-dim normal with unit variances and AR(1) correlation 0.4^|a-b|,
// db8 filter (PiecePoly c=9, Bumps c=3).
Dataset gen_example2(TestSignal signal, int n, Rng& rng);

struct ScenarioSpec {
    std::string name;       // e.g. "example1-heavisine-128"
    int example = 1;        // 1 or 2
    TestSignal signal = TestSignal::Heavisine;
    int n = 128;
    int replications = 25;  // desk-scale default
    int n_iter = 6000;
    int burn_in = 1000;
    std::uint64_t seed = 1;
    int threads = 1;
};

// Parse "example{1,2}-{signal}-{n}"; throws on unknown names.
ScenarioSpec parse_scenario(const std::string& name);
std::vector<std::string> known_scenarios();

struct BenchmarkResult {
    ScenarioSpec spec;
    double amse = 0.0;
    double amse_se = 0.0;
    double amse_beta = 0.0;
    double amse_beta_se = 0.0;
    double seconds = 0.0;
};

// AMSE = (1/(Mn)) ΣΣ (Ŷ - Y)²; the second member of the pair is the Monte
// Carlo standard error across replicates.
std::pair<double, double> amse(const std::vector<Eigen::VectorXd>& estimates,
                               const Eigen::VectorXd& truth);
std::pair<double, double> amse_beta(const std::vector<Eigen::VectorXd>& estimates,
                                    const Eigen::VectorXd& truth);

// Replicates run on independent RNG streams derived from (seed, m) and merge
// deterministically by replicate index.
BenchmarkResult run_benchmark(const ScenarioSpec& spec);

std::string benchmark_csv_header();
std::string benchmark_csv_row(const BenchmarkResult& r);

}  // namespace wapalim

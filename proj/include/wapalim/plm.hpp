#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <vector>

#include "wapalim/randdist.hpp"
#include "wapalim/wavelet.hpp"

namespace wapalim {

// Wavelet-domain regression system d = Uβ + θ + ε̃, split into the detail
// block (which carries the likelihood) and the scaling block (pass-through
// in reconstruction). Row ordering of U matches d exactly.
struct ModelInput {
    Eigen::VectorXd d_detail;   // length n_d = 2^J - 2^J0
    Eigen::VectorXd d_scaling;  // length 2^J0
    Eigen::MatrixXd U_detail;   // n_d x p
    Eigen::MatrixXd U_scaling;  // 2^J0 x p
    std::vector<int> level_of;  // detail row -> resolution level j
    int n = 0;                  // 2^J
    int p = 0;
    int J0 = 0;
    FilterBank filter;

    int n_detail() const { return static_cast<int>(d_detail.size()); }
    int num_levels() const { return log2_exact(n) - J0; }
    std::pair<int, int> level_range(int j) const;
};

ModelInput make_model_input(const Eigen::VectorXd& Y, const Eigen::MatrixXd& X,
                            const FilterBank& filter, int J0);

struct Hyperparameters {
    double a1 = 2.0, b1 = 1.0;
    double a2 = 2.0, b2 = 1.0;
    double a3 = 1.0, b3 = 1.0;
    int n_iter = 20000;
    int burn_in = 5000;
    std::uint64_t seed = 1;
};

// Data-driven default hyperparameters: a1=2, a2=2, a3=1; IG/Gamma prior means
// matched to plug-in estimates computed from OLS residuals and the MAD of the
// finest-level detail coefficients.
Hyperparameters default_hyperparameters(const Eigen::VectorXd& Y, const Eigen::MatrixXd& X,
                                        const FilterBank& filter, int J0);

// One full parameter configuration of the sampler.
struct GibbsState {
    Eigen::VectorXd beta;        // p, zero where gamma = 0
    std::vector<std::uint8_t> gamma;  // p
    Eigen::VectorXd v;           // p, mixing variances of the normal-scale slab
    double eta2 = 1.0;           // slab scale η²
    double q = 0.5;              // prior inclusion probability of a predictor
    double sigma2 = 1.0;         // noise variance
    std::vector<std::uint8_t> z;      // n_d, spike/slab indicators of θ
    std::vector<double> eps;     // per level j, slab probability ε_j
    Eigen::VectorXd theta;       // n_d, zero where z = 0
    double tau_theta = 1.0;      // DE rate of the θ slab

    bool invariants_ok() const;
};

struct ChainOutput {
    int kept = 0;
    Eigen::MatrixXd beta_draws;      // kept x p
    Eigen::VectorXd beta_hat;        // posterior mean
    Eigen::VectorXd beta_sd;         // posterior sd per coefficient
    Eigen::VectorXd inclusion_prob;  // mean of gamma draws
    Eigen::VectorXd theta_hat;       // n_d, posterior mean
    Eigen::VectorXd y_hat;           // n, reconstruction W'(Uβ̂+θ̂) with scaling pass-through
    std::vector<double> sigma2_trace, q_trace, eta2_trace, tau_theta_trace;
    // gamma pattern -> (count, first appearance index), insertion-ordered ties
    std::map<std::vector<std::uint8_t>, std::pair<long, long>> pattern_counts;
    std::uint64_t seed = 0;
    int n_iter = 0, burn_in = 0;
};

// The Gibbs sampler for the hierarchical spike-and-slab model. Holds the
// model input plus precomputed column norms; the hot (γ,β) block maintains
// the residual incrementally across the i-loop.
class GibbsSampler {
public:
    GibbsSampler(const ModelInput& input, const Hyperparameters& hyper);

    GibbsState initial_state() const;

    // individual full-conditional updates, in the sampler's fixed order
    void update_gamma_beta(Rng& rng, GibbsState& s) const;
    void update_v(Rng& rng, GibbsState& s) const;
    void update_eta2(Rng& rng, GibbsState& s) const;
    void update_q(Rng& rng, GibbsState& s) const;
    void update_sigma2(Rng& rng, GibbsState& s) const;
    void update_z(Rng& rng, GibbsState& s) const;
    void update_eps(Rng& rng, GibbsState& s) const;
    void update_theta(Rng& rng, GibbsState& s) const;
    void update_tau_theta(Rng& rng, GibbsState& s) const;

    void step(Rng& rng, GibbsState& s) const;

    const ModelInput& input() const { return input_; }
    const Hyperparameters& hyper() const { return hyper_; }

    // residual Z = d - U_γ β_γ - θ over the detail block
    Eigen::VectorXd residual(const GibbsState& s) const;
    // d* = d - U_γ β_γ
    Eigen::VectorXd d_star(const GibbsState& s) const;

private:
    ModelInput input_;
    Hyperparameters hyper_;
    Eigen::VectorXd col_norms_;  // U_i'U_i over the detail block
    Eigen::VectorXd beta_ols_;
};

ChainOutput run_chain(const ModelInput& input, const Hyperparameters& hyper);

// The K most frequent γ patterns among kept draws, ties broken by first
// appearance in the chain.
std::vector<std::pair<std::vector<std::uint8_t>, double>> select_models(const ChainOutput& chain,
                                                                        int K);

// J0 = floor(log2(log(n)) + 1)
int default_coarsest_level(int n);

}  // namespace wapalim
